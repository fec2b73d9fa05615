use serde::{Deserialize, Serialize};

use super::poly;
use super::series::CoeffSeries;
use crate::error::{Error, Result};
use crate::C64;

/// Relative distance from the unit circle below which a root counts as "on" it.
pub const CIRCLE_TOL: f64 = 1e-9;
/// Relative distance below which a zero and a pole are treated as the same point.
pub const ROOT_MATCH_TOL: f64 = 1e-9;

/// A rational boundary symbol `gain · Π(z - zₖ) / Π(z - pⱼ)`, kept in factored
/// form so that products, reciprocals and reflections act exactly on the
/// root lists.
///
/// Invariants: no pole lies on the unit circle, and no zero coincides with a
/// pole (common factors are cancelled at construction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalSymbol {
    gain: C64,
    zeros: Vec<C64>,
    poles: Vec<C64>,
}

fn matches(a: C64, b: C64) -> bool {
    (a - b).norm() <= ROOT_MATCH_TOL * a.norm().max(b.norm()).max(1.0)
}

impl RationalSymbol {
    /// Build from numerator and denominator coefficient lists (low → high).
    pub fn from_polys(numerator: &[C64], denominator: &[C64]) -> Result<Self> {
        let mut num = numerator.to_vec();
        let mut den = denominator.to_vec();
        poly::trim(&mut num);
        poly::trim(&mut den);
        if den.is_empty() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        if num.is_empty() {
            return Ok(Self::zero());
        }
        let gain = num.last().unwrap() / den.last().unwrap();
        Self::from_factors(gain, poly::roots(&num), poly::roots(&den))
    }

    pub fn from_factors(gain: C64, zeros: Vec<C64>, poles: Vec<C64>) -> Result<Self> {
        let s = Self::reduced(gain, zeros, poles);
        s.check_circle()?;
        Ok(s)
    }

    fn reduced(gain: C64, mut zeros: Vec<C64>, poles: Vec<C64>) -> Self {
        if gain.norm() == 0.0 {
            return Self::zero();
        }
        let mut kept_poles = Vec::with_capacity(poles.len());
        for p in poles {
            if let Some(i) = zeros.iter().position(|z| matches(*z, p)) {
                zeros.swap_remove(i);
            } else {
                kept_poles.push(p);
            }
        }
        let key = |c: &C64| (c.re, c.im);
        zeros.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        kept_poles.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        Self { gain, zeros, poles: kept_poles }
    }

    fn check_circle(&self) -> Result<()> {
        match self.poles.iter().find(|p| (p.norm() - 1.0).abs() <= CIRCLE_TOL) {
            Some(p) => Err(Error::NoCircleAnnulus(format!("{p}"))),
            None => Ok(()),
        }
    }

    pub fn zero() -> Self {
        Self { gain: C64::new(0.0, 0.0), zeros: Vec::new(), poles: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::reduced(c, Vec::new(), Vec::new())
    }

    /// `c·zⁿ` for any integer `n`.
    pub fn monomial(n: i32, c: C64) -> Self {
        let origin = C64::new(0.0, 0.0);
        let k = n.unsigned_abs() as usize;
        if n >= 0 {
            Self::reduced(c, vec![origin; k], Vec::new())
        } else {
            Self::reduced(c, Vec::new(), vec![origin; k])
        }
    }

    /// Exact rational form of a Laurent polynomial (`tail_bound` is ignored).
    pub fn from_laurent(series: &CoeffSeries) -> Result<Self> {
        if series.is_zero() {
            return Ok(Self::zero());
        }
        let shift = series.lo();
        let num = series.coeffs().to_vec();
        let base = Self::from_polys(&num, &[C64::new(1.0, 0.0)])?;
        Ok(base.mul(&Self::monomial(shift as i32, C64::new(1.0, 0.0))))
    }

    pub fn gain(&self) -> C64 {
        self.gain
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn is_zero(&self) -> bool {
        self.gain.norm() == 0.0
    }

    pub fn numerator(&self) -> Vec<C64> {
        poly::from_roots(&self.zeros).into_iter().map(|c| c * self.gain).collect()
    }

    pub fn denominator(&self) -> Vec<C64> {
        poly::from_roots(&self.poles)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let num: C64 = self.zeros.iter().map(|a| z - a).product();
        let den: C64 = self.poles.iter().map(|p| z - p).product();
        self.gain * num / den
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let zeros = self.zeros.iter().chain(&other.zeros).copied().collect();
        let poles = self.poles.iter().chain(&other.poles).copied().collect();
        Self::reduced(self.gain * other.gain, zeros, poles)
    }

    /// Pointwise reciprocal; `None` for the zero symbol or when a zero sits on
    /// the circle (the reciprocal would have a pole there).
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() || self.zeros.iter().any(|z| (z.norm() - 1.0).abs() <= CIRCLE_TOL) {
            return None;
        }
        Some(Self::reduced(1.0 / self.gain, self.poles.clone(), self.zeros.clone()))
    }

    /// `R(1/z)`, which on the circle is `f̆(ξ) = f(ξ̄)`.
    pub fn breve(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let origin = C64::new(0.0, 0.0);
        let mut gain = self.gain;
        let mut zeros = Vec::new();
        let mut poles = Vec::new();
        for &a in &self.zeros {
            // 1/z - a = -a (z - 1/a) / z
            if a == origin {
                poles.push(origin);
            } else {
                gain *= -a;
                zeros.push(1.0 / a);
                poles.push(origin);
            }
        }
        for &p in &self.poles {
            if p == origin {
                zeros.push(origin);
            } else {
                gain /= -p;
                poles.push(1.0 / p);
                zeros.push(origin);
            }
        }
        Self::reduced(gain, zeros, poles)
    }

    /// `conj R(z̄)`, i.e. `f*`: coefficients and roots conjugated.
    pub fn star(&self) -> Self {
        Self::reduced(
            self.gain.conj(),
            self.zeros.iter().map(|z| z.conj()).collect(),
            self.poles.iter().map(|p| p.conj()).collect(),
        )
    }

    /// The rational function equal to `conj f` on the circle.
    pub fn bar(&self) -> Self {
        self.breve().star()
    }

    /// Membership in `H^∞`: no pole in the closed disk after cancellation.
    /// Poles within [`CIRCLE_TOL`] of the circle make the question ambiguous.
    pub fn is_bounded_analytic(&self) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        if let Some(p) = self.poles.iter().find(|p| (p.norm() - 1.0).abs() <= CIRCLE_TOL) {
            return Err(Error::PoleOnCircle(format!("{p}")));
        }
        Ok(self.poles.iter().all(|p| p.norm() > 1.0))
    }

    /// True when the function is a constant (no zeros, no poles).
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.zeros.is_empty() && self.poles.is_empty())
    }

    /// Laurent expansion on the annulus containing the circle, stored on
    /// `[-n, n]`, with a certified `ℓ¹` tail from the geometric decay of each
    /// pole factor.
    pub fn to_series(&self, n: usize) -> Result<CoeffSeries> {
        self.check_circle()?;
        if self.is_zero() {
            return Ok(CoeffSeries::zero());
        }
        let n = n as i64;
        let k = 2 * n + 8;
        let one = C64::new(1.0, 0.0);
        let mut analytic = CoeffSeries::one();
        let mut coanalytic = CoeffSeries::one();
        for &p in &self.poles {
            let r = p.norm();
            if r == 0.0 {
                coanalytic = coanalytic.shift(-1);
            } else if r > 1.0 {
                // 1/(z - p) = -(1/p) Σ (z/p)^m
                let q = 1.0 / p;
                let mut coeffs = Vec::with_capacity(k as usize + 1);
                let mut term = -q;
                for _ in 0..=k {
                    coeffs.push(term);
                    term *= q;
                }
                let rq = 1.0 / r;
                let tail = rq.powi(k as i32 + 2) / (1.0 - rq);
                let f = CoeffSeries::new(0, coeffs, tail);
                analytic = analytic.multiply_truncated(&f, 0, k);
            } else {
                // 1/(z - p) = Σ_{m≥1} p^{m-1} z^{-m}
                let mut coeffs = Vec::with_capacity(k as usize);
                let mut term = one;
                for _ in 0..k {
                    coeffs.push(term);
                    term *= p;
                }
                coeffs.reverse();
                let tail = r.powi(k as i32) / (1.0 - r);
                let f = CoeffSeries::new(-k, coeffs, tail);
                coanalytic = coanalytic.multiply_truncated(&f, -k - self.poles.len() as i64, 0);
            }
        }
        let num = CoeffSeries::new(0, self.numerator(), 0.0);
        Ok(num.multiply(&analytic).multiply(&coanalytic).truncate(-n, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn geometric_series_and_tail() {
        // 1/(1 - 0.5z) = Σ 0.5ⁿ zⁿ
        let r = RationalSymbol::from_polys(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(-0.5, 0.0)]).unwrap();
        let n = 30;
        let s = r.to_series(n).unwrap();
        for k in 0..=n as i64 {
            assert!((s.get(k) - c(0.5f64.powi(k as i32), 0.0)).norm() < 1e-15);
        }
        assert!(s.get(-1).norm() < 1e-15);
        let exact_tail = 0.5f64.powi(n as i32 + 1) / 0.5;
        assert!(s.tail_bound() >= exact_tail * (1.0 - 1e-9));
        assert!(s.tail_bound() <= 2.0 * exact_tail);
    }

    #[test]
    fn blaschke_factor_by_long_division() {
        // (z - 0.5)/(1 - 0.5z): long division gives -0.5, then 0.75·0.5^{n-1}.
        let r = RationalSymbol::from_polys(&[c(-0.5, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(-0.5, 0.0)]).unwrap();
        let s = r.to_series(20).unwrap();
        // Oracle: synthetic division of numerator by denominator as power series.
        let num = [-0.5, 1.0];
        let den = [1.0, -0.5];
        let mut q = [0.0f64; 21];
        for i in 0..=20 {
            let mut acc = if i < num.len() { num[i] } else { 0.0 };
            if i >= 1 {
                acc -= den[1] * q[i - 1];
            }
            q[i] = acc / den[0];
        }
        for (i, qi) in q.iter().enumerate() {
            assert!((s.get(i as i64) - c(*qi, 0.0)).norm() < 1e-14, "coefficient {i}");
        }
        assert!((s.get(0) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((s.get(1) - c(0.75, 0.0)).norm() < 1e-15);
        assert!((s.get(2) - c(0.375, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_outside_expands_in_nonnegative_powers() {
        let r = RationalSymbol::from_polys(&[c(1.0, 0.0)], &[c(-2.0, 0.0), c(1.0, 0.0)]).unwrap();
        let s = r.to_series(20).unwrap();
        assert!(s.lo() >= 0);
        for k in 0..=20i64 {
            assert!((s.get(k) + c(0.5f64.powi(k as i32 + 1), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn pole_inside_expands_in_negative_powers() {
        let r = RationalSymbol::from_polys(&[c(1.0, 0.0)], &[c(-0.4, 0.0), c(1.0, 0.0)]).unwrap();
        let s = r.to_series(20).unwrap();
        assert!(s.hi() <= -1);
        for m in 1..=20i64 {
            assert!((s.get(-m) - c(0.4f64.powi(m as i32 - 1), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_poles_on_circle() {
        let err = RationalSymbol::from_polys(&[c(1.0, 0.0)], &[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NoCircleAnnulus(_)));
    }

    #[test]
    fn common_factors_cancel() {
        // (z-0.5)(z+2)/((z-0.5)(z-3))
        let num = poly::from_roots(&[c(0.5, 0.0), c(-2.0, 0.0)]);
        let den = poly::from_roots(&[c(0.5, 0.0), c(3.0, 0.0)]);
        let r = RationalSymbol::from_polys(&num, &den).unwrap();
        assert_eq!(r.zeros().len(), 1);
        assert_eq!(r.poles().len(), 1);
        assert!(r.is_bounded_analytic().unwrap());
    }

    #[test]
    fn breve_and_bar_agree_with_pointwise_values() {
        let r = RationalSymbol::from_factors(c(0.7, -0.2), vec![c(0.3, 0.4), c(-1.5, 0.0)], vec![c(0.2, -0.1), c(0.0, 2.0)]).unwrap();
        for k in 0..7 {
            let xi = C64::from_polar(1.0, 0.9 * k as f64 + 0.1);
            assert!((r.breve().eval(xi) - r.eval(xi.conj())).norm() < 1e-12);
            assert!((r.bar().eval(xi) - r.eval(xi).conj()).norm() < 1e-12);
            assert!((r.star().eval(xi) - r.eval(xi.conj()).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn laurent_round_trip_through_rational_form() {
        let l = CoeffSeries::from_terms(&[(-2, c(1.0, 0.5)), (0, c(-0.3, 0.0)), (2, c(0.0, 2.0))]);
        let r = RationalSymbol::from_laurent(&l).unwrap();
        let s = r.to_series(10).unwrap();
        assert!(s.max_abs_diff(&l) < 1e-12);
    }
}
