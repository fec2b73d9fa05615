//! Bundled member/non-member pairs for the vanishing criteria.
//!
//! Each member is built directly in the target class from an analytic
//! factor `q`; its partner multiplies by a monomial that introduces a pole at
//! the origin (or otherwise breaks the class), so the expected verdicts are
//! known by construction and independent of the classifier.

use crate::fourier::RationalSymbol;
use crate::inner::InnerFunction;
use crate::operators::OperatorKind;
use crate::symbol::Symbol;
use crate::C64;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub label: String,
    pub kind: OperatorKind,
    pub phi: Symbol,
    pub eta: InnerFunction,
    pub theta: InnerFunction,
    pub member: bool,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn b(zeros: &[C64]) -> InnerFunction {
    InnerFunction::blaschke(zeros).expect("corpus zeros lie inside the disk")
}

fn etas() -> Vec<InnerFunction> {
    vec![InnerFunction::unit(), InnerFunction::power_of_z(1), b(&[c(0.5, 0.0)]), b(&[c(0.0, 0.3), c(0.0, 0.0)])]
}

fn thetas() -> Vec<InnerFunction> {
    vec![
        InnerFunction::power_of_z(2),
        b(&[c(0.5, 0.0)]),
        b(&[c(-0.4, 0.0), c(0.2, 0.3)]),
        b(&[c(0.0, 0.0), c(0.6, 0.0)]),
    ]
}

fn analytic_factors() -> Vec<Symbol> {
    let r = |num: &[C64], den: &[C64]| Symbol::rational(RationalSymbol::from_polys(num, den).expect("corpus symbol"));
    vec![
        Symbol::constant(c(1.0, 0.0)),
        Symbol::from_terms(&[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]),
        r(&[c(1.0, 0.0)], &[c(-2.0, 0.0), c(1.0, 0.0)]),
        r(&[c(0.5, 0.0), c(1.0, 0.0)], &[c(3.0, 0.0), c(1.0, 0.0)]),
    ]
}

fn mono(n: i64) -> Symbol {
    Symbol::from_terms(&[(n, c(1.0, 0.0))])
}

fn times(a: &Symbol, b: &Symbol) -> Symbol {
    a.mul(b).expect("corpus symbols are rational")
}

/// `(member, non_member)` for the coset classes with an analytic parameter.
fn coset_pair(kind: OperatorKind, q: &Symbol, eta: &InnerFunction, theta: &InnerFunction) -> (Symbol, Symbol) {
    match kind {
        // η̄θq and η̄θq·z̄
        OperatorKind::Rto => {
            let m = q.times_inner(eta, -1).times_inner(theta, 1);
            (m.clone(), times(&m, &mono(-1)))
        }
        // η̄q and η̄q·z̄
        OperatorKind::Rho | OperatorKind::Srho => {
            let m = q.times_inner(eta, -1);
            (m.clone(), times(&m, &mono(-1)))
        }
        // η·conj(θq) and η·conj(θq)·z
        OperatorKind::Tau => {
            let m = q.bar().times_inner(eta, 1).times_inner(theta, -1);
            (m.clone(), times(&m, &mono(1)))
        }
        // η̆q and η̆q·z̄
        _ => {
            let m = q.times_inner(&eta.star(), -1);
            (m.clone(), times(&m, &mono(-1)))
        }
    }
}

/// The bundled corpus: 8 pairs for each of the restricted Toeplitz, restricted
/// Hankel, small restricted Hankel, `τ` and `h` operators, and 6 pairs each
/// for the small and big truncated Toeplitz operators (52 pairs).
pub fn vanishing_corpus() -> Vec<CorpusEntry> {
    let (es, ts, qs) = (etas(), thetas(), analytic_factors());
    let mut out = Vec::new();
    let mut push = |kind: OperatorKind, label: String, phi: Symbol, eta: &InnerFunction, theta: &InnerFunction, member: bool| {
        out.push(CorpusEntry { label, kind, phi, eta: eta.clone(), theta: theta.clone(), member });
    };
    for kind in [OperatorKind::Rto, OperatorKind::Rho, OperatorKind::Srho, OperatorKind::Tau, OperatorKind::HSmall] {
        for i in 0..8 {
            let (eta, theta, q) = (&es[i % 4], &ts[(i + i / 4) % 4], &qs[(i / 2 + i) % 4]);
            let (m, nm) = coset_pair(kind, q, eta, theta);
            push(kind, format!("{kind}/{i:02}/member"), m, eta, theta, true);
            push(kind, format!("{kind}/{i:02}/non_member"), nm, eta, theta, false);
        }
    }
    let unit = InnerFunction::unit();
    let consts = [c(1.0, 0.0), c(2.0, -1.0), c(0.0, 3.0), c(0.5, 0.0), c(-1.0, 1.0), c(0.0, -0.7)];
    // STTO: cθ̄ against θ̄(c + z/2) and cθ̄z̄.
    for (i, &k) in consts.iter().enumerate() {
        let theta = &ts[i % 4];
        let m = Symbol::constant(k).times_inner(theta, -1);
        let nm = if i % 2 == 0 {
            Symbol::from_terms(&[(0, k), (1, c(0.5, 0.0))]).times_inner(theta, -1)
        } else {
            times(&m, &mono(-1))
        };
        push(OperatorKind::Stto, format!("stto/{i:02}/member"), m, &unit, theta, true);
        push(OperatorKind::Stto, format!("stto/{i:02}/non_member"), nm, &unit, theta, false);
    }
    // BTTO: cθ̄ is a member exactly when θ has real zeros (θ* = θ).
    let symmetric = [
        InnerFunction::power_of_z(1),
        InnerFunction::power_of_z(2),
        b(&[c(0.5, 0.0)]),
        b(&[c(-0.4, 0.0), c(0.6, 0.0)]),
        b(&[c(0.0, 0.0), c(-0.7, 0.0)]),
        b(&[c(0.3, 0.0)]),
    ];
    let skew = [
        b(&[c(0.2, 0.3)]),
        b(&[c(0.0, 0.5)]),
        b(&[c(0.5, 0.0), c(0.1, -0.4)]),
    ];
    for (i, (&k, theta)) in consts.iter().zip(&symmetric).enumerate() {
        let m = Symbol::constant(k).times_inner(theta, -1);
        push(OperatorKind::Btto, format!("btto/{i:02}/member"), m, &unit, theta, true);
        let (nm, nm_theta) = match skew.get(i) {
            Some(th) => (Symbol::constant(k).times_inner(th, -1), th),
            None => (Symbol::from_terms(&[(0, k), (1, c(0.5, 0.0))]).times_inner(theta, -1), theta),
        };
        push(OperatorKind::Btto, format!("btto/{i:02}/non_member"), nm, &unit, nm_theta, false);
    }
    out
}
