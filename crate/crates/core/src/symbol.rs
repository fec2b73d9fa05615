//! Operator symbols: a Laurent or rational base times integer powers of
//! inner functions.
//!
//! Keeping inner factors symbolic lets `θ̄·θ` cancel exactly before any
//! truncated expansion happens. A negative power stands for the conjugate,
//! which on the circle is the reciprocal.

use crate::error::Result;
use crate::fourier::{CoeffSeries, RationalSymbol, TransformKind};
use crate::inner::InnerFunction;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolBase {
    Laurent(CoeffSeries),
    Rational(RationalSymbol),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    base: SymbolBase,
    factors: Vec<(InnerFunction, i32)>,
}

impl Symbol {
    pub fn laurent(series: CoeffSeries) -> Self {
        Self { base: SymbolBase::Laurent(series), factors: Vec::new() }
    }

    /// Laurent polynomial from `(index, coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, C64)]) -> Self {
        Self::laurent(CoeffSeries::from_terms(terms))
    }

    pub fn rational(r: RationalSymbol) -> Self {
        Self { base: SymbolBase::Rational(r), factors: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::laurent(CoeffSeries::monomial(0, c))
    }

    pub fn base(&self) -> &SymbolBase {
        &self.base
    }

    pub fn factors(&self) -> &[(InnerFunction, i32)] {
        &self.factors
    }

    /// Multiply by `θ^power` (`θ̄^{-power}` when negative).
    pub fn times_inner(&self, theta: &InnerFunction, power: i32) -> Self {
        let mut out = self.clone();
        out.push_factor(theta.clone(), power);
        out
    }

    fn push_factor(&mut self, theta: InnerFunction, power: i32) {
        if power == 0 || theta.is_constant() && theta.constant() == C64::new(1.0, 0.0) {
            return;
        }
        if let Some(pos) = self.factors.iter().position(|(f, _)| *f == theta) {
            self.factors[pos].1 += power;
            if self.factors[pos].1 == 0 {
                self.factors.remove(pos);
            }
        } else {
            self.factors.push((theta, power));
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let base = match (&self.base, &other.base) {
            (SymbolBase::Laurent(a), SymbolBase::Laurent(b)) => SymbolBase::Laurent(a.multiply(b)),
            _ => SymbolBase::Rational(self.base_rational()?.mul(&other.base_rational()?)),
        };
        let mut out = Self { base, factors: self.factors.clone() };
        for (f, p) in &other.factors {
            out.push_factor(f.clone(), *p);
        }
        Ok(out)
    }

    /// The boundary function `conj φ`.
    pub fn bar(&self) -> Self {
        let base = match &self.base {
            SymbolBase::Laurent(s) => SymbolBase::Laurent(s.transform(TransformKind::Bar)),
            SymbolBase::Rational(r) => SymbolBase::Rational(r.bar()),
        };
        let factors = self.factors.iter().map(|(f, p)| (f.clone(), -p)).collect();
        Self { base, factors }
    }

    /// `φ*(ξ) = conj φ(ξ̄)`.
    pub fn star(&self) -> Self {
        let base = match &self.base {
            SymbolBase::Laurent(s) => SymbolBase::Laurent(s.transform(TransformKind::Star)),
            SymbolBase::Rational(r) => SymbolBase::Rational(r.star()),
        };
        let mut out = Self { base, factors: Vec::new() };
        for (f, p) in &self.factors {
            out.push_factor(f.star(), *p);
        }
        out
    }

    /// `φ̆(ξ) = φ(ξ̄)`; on inner factors `θ̆ = conj θ*`.
    pub fn breve(&self) -> Self {
        let base = match &self.base {
            SymbolBase::Laurent(s) => SymbolBase::Laurent(s.transform(TransformKind::Breve)),
            SymbolBase::Rational(r) => SymbolBase::Rational(r.breve()),
        };
        let mut out = Self { base, factors: Vec::new() };
        for (f, p) in &self.factors {
            out.push_factor(f.star(), -p);
        }
        out
    }

    /// True when some inner factor carries singular atoms, so expansions are
    /// not certified.
    pub fn is_heuristic(&self) -> bool {
        self.factors.iter().any(|(f, _)| !f.is_finite_blaschke())
    }

    fn base_rational(&self) -> Result<RationalSymbol> {
        match &self.base {
            SymbolBase::Rational(r) => Ok(r.clone()),
            SymbolBase::Laurent(s) => RationalSymbol::from_laurent(s),
        }
    }

    /// Exact rational form; fails with `NotFiniteBlaschke` when a factor has
    /// singular atoms.
    pub fn as_rational(&self) -> Result<RationalSymbol> {
        let mut r = self.base_rational()?;
        for (f, p) in &self.factors {
            let fr = f.to_rational()?;
            let fr = if *p < 0 { fr.bar() } else { fr };
            for _ in 0..p.unsigned_abs() {
                r = r.mul(&fr);
            }
        }
        Ok(r)
    }

    /// Laurent coefficients on `[-n, n]` with a propagated tail bound.
    pub fn series(&self, n: usize) -> Result<CoeffSeries> {
        let ni = n as i64;
        let mut s = match &self.base {
            SymbolBase::Laurent(s) => s.truncate(-ni, ni),
            SymbolBase::Rational(r) => r.to_series(n)?,
        };
        for (f, p) in &self.factors {
            let e = f.expand(n);
            let e = if *p < 0 { e.transform(TransformKind::Bar) } else { e };
            for _ in 0..p.unsigned_abs() {
                s = s.multiply_truncated(&e, -ni, ni);
            }
        }
        Ok(s)
    }

    pub fn label(&self) -> String {
        let base = match &self.base {
            SymbolBase::Laurent(s) => {
                let terms: Vec<String> = s.iter().map(|(n, c)| format!("{n}:{}{:+}i", c.re, c.im)).collect();
                format!("laurent[{}]", terms.join(","))
            }
            SymbolBase::Rational(r) => {
                let roots = |v: &[C64]| v.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect::<Vec<_>>().join(",");
                format!(
                    "rational[gain={}{:+}i;zeros={};poles={}]",
                    r.gain().re,
                    r.gain().im,
                    roots(r.zeros()),
                    roots(r.poles())
                )
            }
        };
        let mut out = base;
        for (f, p) in &self.factors {
            out.push_str(&format!(" * ({})^{p}", f.label()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn conjugate_factor_cancels_exactly() {
        let th = InnerFunction::single_atom(0.0, 1.0).unwrap();
        let psi = Symbol::from_terms(&[(-1, c(1.0, 0.0)), (2, c(0.0, 1.0))]);
        let phi = psi.times_inner(&th, 1).times_inner(&th, -1);
        assert_eq!(phi, psi);
        assert!(!phi.is_heuristic());
    }

    #[test]
    fn series_of_factored_symbol_matches_direct_product() {
        let b = InnerFunction::blaschke(&[c(0.5, 0.2)]).unwrap();
        let phi = Symbol::from_terms(&[(-1, c(1.0, 0.0)), (0, c(0.5, 0.0))]).times_inner(&b, -1);
        let got = phi.series(80).unwrap();
        let want = CoeffSeries::from_terms(&[(-1, c(1.0, 0.0)), (0, c(0.5, 0.0))])
            .multiply(&b.expand(80).transform(TransformKind::Bar));
        for n in -60..=20 {
            assert!((got.get(n) - want.get(n)).norm() < 1e-14, "index {n}");
        }
    }

    #[test]
    fn rational_form_matches_series() {
        let b = InnerFunction::blaschke(&[c(0.3, -0.4), c(-0.5, 0.0)]).unwrap();
        let phi = Symbol::from_terms(&[(-2, c(1.0, 1.0)), (1, c(0.25, 0.0))]).times_inner(&b, -1);
        let r = phi.as_rational().unwrap().to_series(60).unwrap();
        let s = phi.series(60).unwrap();
        for n in -40..=40 {
            assert!((r.get(n) - s.get(n)).norm() < 1e-12, "index {n}");
        }
    }

    #[test]
    fn transforms_agree_with_pointwise_definitions() {
        let b = InnerFunction::blaschke(&[c(0.4, 0.3)]).unwrap();
        let phi = Symbol::from_terms(&[(-1, c(0.2, 0.7)), (0, c(1.0, 0.0)), (2, c(0.0, -0.3))]).times_inner(&b, 1);
        let r = phi.as_rational().unwrap();
        for k in 0..16 {
            let xi = C64::from_polar(1.0, 0.37 + k as f64 * 0.41);
            let v = r.eval(xi);
            assert!((phi.bar().as_rational().unwrap().eval(xi) - v.conj()).norm() < 1e-12);
            assert!((phi.star().as_rational().unwrap().eval(xi) - r.eval(xi.conj()).conj()).norm() < 1e-12);
            assert!((phi.breve().as_rational().unwrap().eval(xi) - r.eval(xi.conj())).norm() < 1e-12);
        }
    }

    #[test]
    fn atoms_make_symbol_heuristic() {
        let th = InnerFunction::single_atom(0.5, 0.3).unwrap();
        let phi = Symbol::constant(c(1.0, 0.0)).times_inner(&th, 1);
        assert!(phi.is_heuristic());
        assert!(phi.series(20).unwrap().is_heuristic());
        assert!(phi.as_rational().is_err());
    }
}
