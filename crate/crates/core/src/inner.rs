//! Inner functions: finite Blaschke products times optional singular atoms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{CoeffSeries, RationalSymbol};
use crate::C64;

/// Blaschke zeros must satisfy `|a| ≤ 1 - ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-6;
const UNIMODULAR_TOL: f64 = 1e-12;
const ATOM_TOL: f64 = 1e-12;

/// A point mass `mass·δ_ζ` of the singular measure, `ζ = e^{i·angle}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

impl Atom {
    pub fn point(&self) -> C64 {
        C64::from_polar(1.0, self.angle)
    }
}

/// `c · Π (z - aₖ)/(1 - āₖz) · exp(Σ sⱼ (z + ζⱼ)/(z - ζⱼ))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "InnerDescriptor", try_from = "InnerDescriptor")]
pub struct InnerFunction {
    constant: C64,
    zeros: Vec<C64>,
    atoms: Vec<Atom>,
}

/// Config-fragment form: constant `(re, im)`, zeros with multiplicity, atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerDescriptor {
    pub constant: (f64, f64),
    #[serde(default)]
    pub zeros: Vec<ZeroEntry>,
    #[serde(default)]
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
}

impl From<InnerFunction> for InnerDescriptor {
    fn from(f: InnerFunction) -> Self {
        let mut zeros: Vec<ZeroEntry> = Vec::new();
        for z in &f.zeros {
            match zeros.last_mut() {
                Some(e) if e.re == z.re && e.im == z.im => e.multiplicity += 1,
                _ => zeros.push(ZeroEntry { re: z.re, im: z.im, multiplicity: 1 }),
            }
        }
        InnerDescriptor { constant: (f.constant.re, f.constant.im), zeros, atoms: f.atoms }
    }
}

impl TryFrom<InnerDescriptor> for InnerFunction {
    type Error = Error;

    fn try_from(d: InnerDescriptor) -> Result<Self> {
        let zeros = d
            .zeros
            .iter()
            .flat_map(|e| std::iter::repeat_n(C64::new(e.re, e.im), e.multiplicity as usize))
            .collect();
        InnerFunction::new(C64::new(d.constant.0, d.constant.1), zeros, d.atoms)
    }
}

fn blaschke_factor_series(a: C64, n: usize) -> CoeffSeries {
    let r = a.norm();
    if r == 0.0 {
        return CoeffSeries::monomial(1, C64::new(1.0, 0.0));
    }
    let w = 1.0 - r * r;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(-a);
    let mut p = C64::new(1.0, 0.0);
    for _ in 1..=n {
        coeffs.push(p * w);
        p *= a.conj();
    }
    CoeffSeries::new(0, coeffs, w * r.powi(n as i32) / (1.0 - r))
}

/// Taylor coefficients of `exp(s(z+ζ)/(z-ζ))` on `[0, n]`:
/// `e^{-s} L_k^{(-1)}(2s) ζ^{-k}` by the three-term Laguerre recurrence.
fn atom_series(atom: &Atom, n: usize) -> CoeffSeries {
    let x = 2.0 * atom.mass;
    let scale = (-atom.mass).exp();
    let mut lag = Vec::with_capacity(n + 1);
    lag.push(1.0);
    if n >= 1 {
        lag.push(-x);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 2.0 - x) * lag[k - 1] - (kf - 2.0) * lag[k - 2]) / kf;
        lag.push(next);
    }
    let rot = C64::from_polar(1.0, -atom.angle);
    let mut phase = C64::new(1.0, 0.0);
    let coeffs: Vec<C64> = lag
        .iter()
        .map(|l| {
            let c = phase * (scale * l);
            phase *= rot;
            c
        })
        .collect();
    // Parseval deficit: the boundary function is unimodular, so the omitted
    // ℓ² mass is 1 - Σ|ĉ|². Reported as a heuristic tail.
    let energy: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let tail = (1.0 - energy).max(0.0).sqrt();
    CoeffSeries::new(0, coeffs, tail).with_heuristic(true)
}

impl InnerFunction {
    pub fn new(constant: C64, zeros: Vec<C64>, atoms: Vec<Atom>) -> Result<Self> {
        if (constant.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::Invalid(format!("constant {constant} is not unimodular")));
        }
        if let Some(a) = zeros.iter().find(|a| a.norm() > 1.0 - ZERO_MARGIN || !a.is_finite()) {
            return Err(Error::Invalid(format!("Blaschke zero {a} is too close to the circle")));
        }
        if let Some(at) = atoms.iter().find(|a| a.mass.is_nan() || a.mass <= 0.0 || !a.angle.is_finite()) {
            return Err(Error::Invalid(format!("singular atom {at:?} must have positive mass")));
        }
        Ok(Self { constant, zeros, atoms })
    }

    /// Blaschke product with constant 1.
    pub fn blaschke(zeros: &[C64]) -> Result<Self> {
        Self::new(C64::new(1.0, 0.0), zeros.to_vec(), Vec::new())
    }

    /// `zᵈ`.
    pub fn power_of_z(d: usize) -> Self {
        Self { constant: C64::new(1.0, 0.0), zeros: vec![C64::new(0.0, 0.0); d], atoms: Vec::new() }
    }

    /// The constant inner function 1.
    pub fn unit() -> Self {
        Self::power_of_z(0)
    }

    pub fn single_atom(angle: f64, mass: f64) -> Result<Self> {
        Self::new(C64::new(1.0, 0.0), Vec::new(), vec![Atom { angle, mass }])
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Number of Blaschke zeros counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_finite_blaschke(&self) -> bool {
        self.atoms.is_empty()
    }

    /// A unimodular constant: `K_θ = {0}`.
    pub fn is_constant(&self) -> bool {
        self.zeros.is_empty() && self.atoms.is_empty()
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        let mut v = self.constant;
        for a in &self.zeros {
            v *= (z - a) / (1.0 - a.conj() * z);
        }
        let mut exponent = C64::new(0.0, 0.0);
        for at in &self.atoms {
            let zeta = at.point();
            if (z - zeta).norm() <= ATOM_TOL {
                return Err(Error::AtomSingularity(format!("{z}")));
            }
            exponent += at.mass * (z + zeta) / (z - zeta);
        }
        Ok(v * exponent.exp())
    }

    /// Taylor coefficients on `[0, n]`. Finite Blaschke products carry a
    /// certified `ℓ¹` tail; singular atoms make the result heuristic.
    pub fn expand(&self, n: usize) -> CoeffSeries {
        let n_i = n as i64;
        let mut s = CoeffSeries::monomial(0, self.constant);
        for &a in &self.zeros {
            s = s.multiply_truncated(&blaschke_factor_series(a, n), 0, n_i);
        }
        for at in &self.atoms {
            s = s.multiply_truncated(&atom_series(at, n), 0, n_i);
        }
        s
    }

    pub fn product(&self, other: &Self) -> Self {
        Self {
            constant: self.constant * other.constant,
            zeros: self.zeros.iter().chain(&other.zeros).copied().collect(),
            atoms: self.atoms.iter().chain(&other.atoms).copied().collect(),
        }
    }

    /// `θ*(z) = conj θ(z̄)`, again inner.
    pub fn star(&self) -> Self {
        Self {
            constant: self.constant.conj(),
            zeros: self.zeros.iter().map(|z| z.conj()).collect(),
            atoms: self.atoms.iter().map(|a| Atom { angle: -a.angle, mass: a.mass }).collect(),
        }
    }

    /// Exact quotient of polynomials for a finite Blaschke product.
    pub fn to_rational(&self) -> Result<RationalSymbol> {
        if !self.is_finite_blaschke() {
            return Err(Error::NotFiniteBlaschke);
        }
        let mut gain = self.constant;
        let mut poles = Vec::new();
        for a in &self.zeros {
            if a.norm() > 0.0 {
                // 1 - āz = -ā (z - 1/ā)
                gain /= -a.conj();
                poles.push(1.0 / a.conj());
            }
        }
        RationalSymbol::from_factors(gain, self.zeros.clone(), poles)
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.constant != C64::new(1.0, 0.0) {
            parts.push(format!("c={:.6}{:+.6}i", self.constant.re, self.constant.im));
        }
        if !self.zeros.is_empty() {
            let zs: Vec<String> = self.zeros.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
            parts.push(format!("zeros=[{}]", zs.join(",")));
        }
        for a in &self.atoms {
            parts.push(format!("atom@{:.6}:{:.6}", a.angle, a.mass));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::sample_expand;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let z = InnerFunction::power_of_z(1);
        assert!((z.evaluate(c(0.3, 0.0)).unwrap() - c(0.3, 0.0)).norm() < 1e-16);
        let b = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap();
        assert!(b.evaluate(c(0.5, 0.0)).unwrap().norm() < 1e-16);
        let v = b.evaluate(C64::from_polar(1.0, std::f64::consts::PI / 3.0)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn boundary_values_are_unimodular() {
        let th = InnerFunction::new(
            C64::from_polar(1.0, 0.7),
            vec![c(0.5, 0.2), c(-0.3, 0.6), c(0.0, 0.0)],
            vec![Atom { angle: 0.0, mass: 1.0 }],
        )
        .unwrap();
        for k in 0..256 {
            let xi = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 256.0);
            assert!((th.evaluate(xi).unwrap().norm() - 1.0).abs() <= 1e-10);
        }
        assert!(matches!(th.evaluate(c(1.0, 0.0)), Err(Error::AtomSingularity(_))));
    }

    #[test]
    fn rejects_invalid_descriptors() {
        assert!(InnerFunction::blaschke(&[c(0.9999999, 0.0)]).is_err());
        assert!(InnerFunction::new(c(2.0, 0.0), vec![], vec![]).is_err());
        assert!(InnerFunction::single_atom(0.0, -1.0).is_err());
    }

    #[test]
    fn z_squared_expands_exactly() {
        let s = InnerFunction::power_of_z(2).expand(10);
        assert!(s.same_coefficients(&CoeffSeries::monomial(2, c(1.0, 0.0))));
        assert_eq!(s.tail_bound(), 0.0);
    }

    #[test]
    fn single_blaschke_factor_coefficients() {
        let s = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap().expand(40);
        assert!((s.get(0) - c(-0.5, 0.0)).norm() < 1e-16);
        for n in 1..=40 {
            let want = 0.75 * 0.5f64.powi(n - 1);
            assert!((s.get(n as i64) - c(want, 0.0)).norm() < 1e-16);
        }
        assert!(s.tail_bound() <= 0.75 * 0.5f64.powi(40) / 0.5 * (1.0 + 1e-12));
    }

    #[test]
    fn product_expansion_matches_series_product() {
        let b1 = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap();
        let b2 = InnerFunction::blaschke(&[c(-0.5, 0.0)]).unwrap();
        let n = 60;
        let lhs = b1.product(&b2).expand(n);
        let rhs = b1.expand(n).multiply(&b2.expand(n));
        for k in 0..=n as i64 {
            assert!((lhs.get(k) - rhs.get(k)).norm() <= lhs.tail_bound() + rhs.tail_bound() + 1e-15);
        }
    }

    #[test]
    fn product_descriptors() {
        let z = InnerFunction::power_of_z(1);
        assert_eq!(z.product(&z), InnerFunction::power_of_z(2));
        let b = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap();
        let bz = b.product(&z);
        assert_eq!(bz.degree(), 2);
        assert!(bz.zeros().contains(&c(0.0, 0.0)) && bz.zeros().contains(&c(0.5, 0.0)));
        assert_eq!(b.product(&InnerFunction::unit()), b);
    }

    #[test]
    fn blaschke_expansion_equals_rational_expansion() {
        let th = InnerFunction::new(C64::from_polar(1.0, -0.4), vec![c(0.6, -0.3), c(0.1, 0.7), c(0.6, -0.3)], vec![]).unwrap();
        let n = 120;
        let a = th.expand(n);
        let b = th.to_rational().unwrap().to_series(n).unwrap();
        for k in 0..=n as i64 {
            assert!((a.get(k) - b.get(k)).norm() <= 1e-12, "index {k}");
        }
    }

    #[test]
    fn atom_recurrence_matches_sampled_expansion() {
        let th = InnerFunction::single_atom(0.8, 0.5).unwrap();
        let exact = th.expand(200);
        assert!(exact.is_heuristic());
        let f = |z: C64| th.evaluate(z).unwrap();
        let sampled = sample_expand(&f, 16);
        for k in 0..=200i64 {
            assert!((exact.get(k) - sampled.get(k)).norm() <= 10.0 * sampled.tail_bound().max(1e-12), "index {k}");
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let th = InnerFunction::new(C64::from_polar(1.0, 0.3), vec![c(0.2, 0.1), c(0.2, 0.1), c(-0.4, 0.0)], vec![Atom { angle: 1.0, mass: 0.5 }]).unwrap();
        let json = serde_json::to_string(&th).unwrap();
        assert!(json.contains("\"multiplicity\":2"));
        let back: InnerFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, th);
    }
}
