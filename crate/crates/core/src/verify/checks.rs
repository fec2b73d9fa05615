use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fourier::{CoeffSeries, Projection};
use crate::inner::InnerFunction;
use crate::operators::{assemble, matmul, rank_one, shifts, OperatorKind, ShiftKind};
use crate::spaces::{conj_model_projection_matrix, materialize, model_projection_matrix, BasisSpec};
use crate::symbol::Symbol;
use crate::C64;

use super::classify::{classify_symbol, expected_vanishing, SymbolClass};
use super::report::{CheckReport, Expect};
use super::VerifyConfig;

/// Column `k` holds coefficient `index(i)` of `vs[k]` in row `i`.
pub(crate) fn coords(vs: &[CoeffSeries], rows: usize, index: impl Fn(usize) -> i64) -> DMatrix<C64> {
    DMatrix::from_fn(rows, vs.len(), |i, k| vs[k].get(index(i)))
}

pub(crate) fn z_symbol() -> Symbol {
    Symbol::from_terms(&[(1, C64::new(1.0, 0.0))])
}

/// `S*f = (f - f(0))/z`.
pub(crate) fn backward_shift(f: &CoeffSeries) -> CoeffSeries {
    if f.hi() < 1 {
        return CoeffSeries::zero().with_tail_bound(f.tail_bound());
    }
    f.truncate(1, f.hi()).shift(-1)
}

fn require_blaschke(theta: &InnerFunction) -> Result<()> {
    if theta.is_finite_blaschke() {
        Ok(())
    } else {
        Err(Error::NotFiniteBlaschke)
    }
}

fn window(n: usize) -> [i64; 2] {
    [0, n as i64]
}

/// The model-space projection on `[0, N]` three ways: `I - T_θT_θ̄`, the sum of
/// outer products of the orthonormal basis, and `H_θ̆H_θ̄`. The conjugate window
/// `I - dT_θ̄ dT_θ` is compared with the entrywise conjugate, since
/// `V P_θ V⁻¹` is the projection onto `conj(zK_θ)`.
pub fn check_projection_identity(theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    require_blaschke(theta)?;
    let (n, l) = (cfg.window, cfg.assembly().order());
    let p = model_projection_matrix(theta, n).entries;

    let e = materialize(&BasisSpec::model(theta, l))?;
    let u = coords(&e, n + 1, |i| i as i64);
    let outer = matmul(&u, &u.adjoint());

    let th = theta.expand(l + n + 2);
    let hb = DMatrix::from_fn(n + 1, l, |j, i| th.get((j + i + 1) as i64));
    let hankel = matmul(&hb, &hb.adjoint());

    let conj = conj_model_projection_matrix(theta, n).entries;

    let components = vec![
        ("basis_outer_products".to_string(), (&p - outer).norm()),
        ("hankel_product".to_string(), (&p - hankel).norm()),
        ("conjugate_window".to_string(), (p.map(|z| z.conj()) - conj).norm()),
    ];
    let residual = components.iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(CheckReport::new(
        "projection",
        "P_θ = I − T_θT_θ̄ = Σ e_j⊗e_j = H_θ̆H_θ̄ ; V P_θ V⁻¹ = I − dT_θ̄ dT_θ",
        Expect::Vanish,
        residual,
        cfg.tol_identity,
    )
    .components(components)
    .window(&[window(n)])
    .digest(&["projection", &theta.label(), &cfg.describe()]))
}

struct Defect {
    residual: f64,
    lhs: f64,
    rhs: f64,
    heuristic: bool,
}

fn defect(kind: OperatorKind, phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<Defect> {
    require_blaschke(theta)?;
    let acfg = cfg.assembly_plus_one();
    let (n, l) = (cfg.window + 1, acfg.order());
    let x = assemble(kind, phi, eta, theta, &acfg)?;
    let x0 = x.entries.columns(0, n).into_owned();
    let xs = x.entries.columns(1, n).into_owned();
    let s = shifts(&ShiftKind::Compressed(theta.clone()), 0, l)?.entries;
    let s_adj = s.adjoint();

    let conj_zphieta = phi.mul(&z_symbol())?.times_inner(eta, 1).bar();
    let (lhs, partner) = match kind {
        // X − S_θ* X 𝒮_η
        OperatorKind::Rto => (x0 - matmul(&s_adj, &xs), conj_zphieta.times_inner(theta, 1)),
        // X 𝒮_η − S_θ* X
        _ => (xs - matmul(&s_adj, &x0), conj_zphieta.times_inner(&theta.star(), -1)),
    };
    let u = backward_shift(&theta.expand(l));
    let v = partner.series(l)?.project(Projection::PAnalytic);
    let r1 = rank_one(&u, &v, &BasisSpec::beurling(eta, n, l), &BasisSpec::model(theta, l))?;
    Ok(Defect {
        residual: (&lhs - &r1.entries).norm(),
        lhs: lhs.norm(),
        rhs: r1.entries.norm(),
        heuristic: x.heuristic || r1.heuristic || phi.is_heuristic(),
    })
}

fn defect_report(kind: OperatorKind, anchor: &str, phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    let d = defect(kind, phi, eta, theta, cfg)?;
    Ok(CheckReport::new(kind.as_str(), anchor, Expect::Vanish, d.residual, cfg.tol_identity)
        .components(vec![("lhs_norm".into(), d.lhs), ("rhs_norm".into(), d.rhs)])
        .heuristic(d.heuristic)
        .window(&[[0, theta.degree() as i64 - 1], window(cfg.window)])
        .digest(&[kind.as_str(), "defect", &phi.label(), &eta.label(), &theta.label(), &cfg.describe()]))
}

/// `A − S_θ* A 𝒮_(η) = S*θ ⊗ P(θ·conj(zφη))` for `A` the restricted Toeplitz operator.
pub fn check_rto_defect(phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    defect_report(OperatorKind::Rto, "A − S_θ*A𝒮_(η) = S*θ ⊗ P(θ·conj(zφη))", phi, eta, theta, cfg)
}

/// `A 𝒮_(η) − S_θ* A = S*θ ⊗ P(θ̆·conj(zφη))` for `A` the restricted Hankel operator.
pub fn check_rho_defect(phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    defect_report(OperatorKind::Rho, "A𝒮_(η) − S_θ*A = S*θ ⊗ P(θ̆·conj(zφη))", phi, eta, theta, cfg)
}

/// `‖A𝒮_(η) − S_θA‖_F` for the restricted Toeplitz operator with symbol `phi`.
fn commutator(phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<(f64, bool)> {
    require_blaschke(theta)?;
    let acfg = cfg.assembly_plus_one();
    let n = cfg.window + 1;
    let x = assemble(OperatorKind::Rto, phi, eta, theta, &acfg)?;
    let s = shifts(&ShiftKind::Compressed(theta.clone()), 0, acfg.order())?.entries;
    let comm = x.entries.columns(1, n).into_owned() - matmul(&s, &x.entries.columns(0, n).into_owned());
    Ok((comm.norm(), x.heuristic))
}

const INTERTWINING: &str = "A𝒮_(η) = S_θA ⇔ A = 𝒯_φ with φ ∈ η̄H∞";

/// The restricted Toeplitz operator with symbol `η̄ψ` intertwines the shifts.
pub fn check_intertwining(psi: &CoeffSeries, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    if psi.lo() < 0 {
        return Err(Error::Invalid("ψ must be analytic".into()));
    }
    let phi = Symbol::laurent(psi.clone()).times_inner(eta, -1);
    let (residual, heuristic) = commutator(&phi, eta, theta, cfg)?;
    Ok(CheckReport::new("intertwining", INTERTWINING, Expect::Vanish, residual, cfg.tol_identity)
        .heuristic(heuristic)
        .window(&[[0, theta.degree() as i64 - 1], window(cfg.window)])
        .digest(&["intertwining", &phi.label(), &eta.label(), &theta.label(), &cfg.describe()]))
}

/// The same commutator for an arbitrary rational symbol. The expectation is
/// set by the classifier: members of `η̄H∞` must vanish, certified
/// non-members must separate.
pub fn probe_intertwining(phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    let member = theta.is_constant() || classify_symbol(&phi.as_rational()?, eta, theta, SymbolClass::EtaBarHinf)?;
    let (residual, heuristic) = commutator(phi, eta, theta, cfg)?;
    let expect = if member { Expect::Vanish } else { Expect::Separate };
    Ok(CheckReport::new("intertwining_probe", INTERTWINING, expect, residual, cfg.tol_identity)
        .heuristic(heuristic)
        .window(&[[0, theta.degree() as i64 - 1], window(cfg.window)])
        .digest(&["intertwining_probe", &phi.label(), &eta.label(), &theta.label(), &cfg.describe()]))
}

/// Trusted-window norm of the assembled operator, expected to vanish exactly
/// when the classifier places `phi` in the matching class.
pub fn check_vanishing(kind: OperatorKind, phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    require_blaschke(theta)?;
    let member = expected_vanishing(kind, &phi.as_rational()?, eta, theta)?
        .ok_or_else(|| Error::Invalid(format!("no vanishing criterion for {kind}")))?;
    let m = assemble(kind, phi, eta, theta, &cfg.assembly())?;
    let expect = if member { Expect::Vanish } else { Expect::Separate };
    let anchor = match kind {
        OperatorKind::Rto => "𝒯_φ = 0 ⇔ φ ∈ η̄θH∞",
        OperatorKind::Rho => "ℋ_φ = 0 ⇔ φ ∈ η̄H∞",
        OperatorKind::Srho => "small restricted Hankel = 0 ⇔ φ ∈ η̄H∞",
        OperatorKind::Stto => "t_φ^θ = 0 ⇔ φ ∈ ℂθ̄",
        OperatorKind::Btto => "T_φ^θ = 0 ⇔ φ ∈ conj(θH∞) ∩ θ̆H∞",
        OperatorKind::Tau => "τ_φ = 0 ⇔ φ ∈ η·conj(θH∞)",
        _ => "h_φ = 0 ⇔ φ ∈ η̆H∞",
    };
    Ok(CheckReport::new(format!("vanishing/{kind}"), anchor, expect, m.trusted_norm(), cfg.tol_identity)
        .heuristic(m.heuristic)
        .window(&[
            [m.trusted_rows.start as i64, m.trusted_rows.end as i64 - 1],
            [m.trusted_cols.start as i64, m.trusted_cols.end as i64 - 1],
        ])
        .digest(&["vanishing", kind.as_str(), &phi.label(), &eta.label(), &theta.label(), &cfg.describe()]))
}

/// `S*e_k = S_θ* e_k` for every basis vector of `K_θ`: the backward shift at
/// coefficient level against the adjoint of the compressed-shift matrix.
pub fn check_backward_shift(theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    require_blaschke(theta)?;
    let l = cfg.assembly().order();
    let e = materialize(&BasisSpec::model(theta, l))?;
    let c = shifts(&ShiftKind::Compressed(theta.clone()), 0, l)?.entries;
    let mut residual: f64 = 0.0;
    for (k, ek) in e.iter().enumerate() {
        let lhs = backward_shift(ek);
        let mut rhs = CoeffSeries::zero();
        for (j, ej) in e.iter().enumerate() {
            rhs = rhs.add(&ej.scale(c[(k, j)].conj()));
        }
        residual = residual.max(lhs.sub(&rhs).l2());
    }
    Ok(CheckReport::new("backward_shift", "S*e_k = S_θ*e_k on K_θ", Expect::Vanish, residual, cfg.tol_identity)
        .window(&[[0, theta.degree() as i64 - 1]])
        .digest(&["backward_shift", &theta.label(), &cfg.describe()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn z(k: usize) -> InnerFunction {
        InnerFunction::power_of_z(k)
    }

    fn b(zeros: &[C64]) -> InnerFunction {
        InnerFunction::blaschke(zeros).unwrap()
    }

    #[test]
    fn projection_identity_for_two_factors() {
        let r = check_projection_identity(&b(&[c(0.5, 0.0), c(0.0, 0.3)]), &VerifyConfig::new(60)).unwrap();
        assert!(r.residual < 1e-12, "{r:?}");
        assert!(r.passed);
    }

    #[test]
    fn rto_defect_exact_case() {
        let phi = Symbol::from_terms(&[(-1, c(1.0, 0.0))]);
        let r = check_rto_defect(&phi, &z(1), &z(1), &VerifyConfig::new(30)).unwrap();
        assert!(r.residual <= 1e-12, "{r:?}");
        // X = E₀₀, so the left side is nonzero.
        assert!((r.components[0].residual - 1.0).abs() < 1e-14);
    }

    #[test]
    fn defects_on_generic_instance() {
        let eta = b(&[c(0.3, -0.2)]);
        let theta = b(&[c(0.5, 0.1), c(-0.4, 0.6)]);
        let phi = Symbol::from_terms(&[(-3, c(0.2, 0.1)), (-1, c(0.5, -0.4)), (0, c(1.0, 0.0)), (2, c(-0.3, 0.8))]);
        let cfg = VerifyConfig::new(40);
        let r = check_rto_defect(&phi, &eta, &theta, &cfg).unwrap();
        assert!(r.residual < 1e-11, "{r:?}");
        assert!(r.components[0].residual > 1e-3);
        let r = check_rho_defect(&phi, &eta, &theta, &cfg).unwrap();
        assert!(r.residual < 1e-11, "{r:?}");
        assert!(r.components[0].residual > 1e-3);
    }

    #[test]
    fn rho_defect_vanishes_on_kernel_class() {
        let eta = b(&[c(0.2, 0.2)]);
        let theta = b(&[c(0.5, 0.0), c(0.1, -0.6)]);
        let phi = Symbol::from_terms(&[(0, c(1.0, 0.0)), (1, c(0.4, 0.3))])
            .times_inner(&theta.star(), -1)
            .times_inner(&eta, -1);
        let r = check_rho_defect(&phi, &eta, &theta, &VerifyConfig::new(40)).unwrap();
        assert!(r.components[0].residual < 1e-10, "{r:?}");
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn intertwining_examples() {
        let cfg = VerifyConfig::new(40);
        let psi = CoeffSeries::from_terms(&[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]);
        let r = check_intertwining(&psi, &z(1), &b(&[c(0.5, 0.0)]), &cfg).unwrap();
        assert!(r.residual <= 1e-8);
        let psi = CoeffSeries::monomial(1, c(1.0, 0.0));
        let r = check_intertwining(&psi, &InnerFunction::unit(), &z(2), &cfg).unwrap();
        assert!(r.residual <= 1e-10);
        let probe = Symbol::from_terms(&[(-2, c(1.0, 0.0))]);
        let r = probe_intertwining(&probe, &z(1), &z(3), &cfg).unwrap();
        assert_eq!(r.expect, Expect::Separate);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn vanishing_examples() {
        let cfg = VerifyConfig::new(30);
        let r = check_vanishing(OperatorKind::Rto, &Symbol::from_terms(&[(1, c(1.0, 0.0))]), &z(1), &z(2), &cfg).unwrap();
        assert!(r.residual <= 1e-12 && r.expect == Expect::Vanish);
        let phi = Symbol::from_terms(&[(-1, c(1.0, 0.0)), (0, c(1.0, 0.0))]);
        let r = check_vanishing(OperatorKind::Rho, &phi, &z(1), &b(&[c(0.5, 0.0)]), &cfg).unwrap();
        assert_eq!(r.expect, Expect::Vanish);
        assert!(r.passed);
        let phi = Symbol::from_terms(&[(-2, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        let r = check_vanishing(OperatorKind::Rho, &phi, &z(1), &b(&[c(0.5, 0.0)]), &cfg).unwrap();
        assert_eq!(r.expect, Expect::Separate);
        assert!(r.passed);
        let r = check_vanishing(OperatorKind::Stto, &Symbol::from_terms(&[(-1, c(2.0, -1.0))]), &InnerFunction::unit(), &z(1), &cfg).unwrap();
        assert!(r.residual <= 1e-12 && r.passed);
    }

    #[test]
    fn backward_shift_examples() {
        let cfg = VerifyConfig::new(40);
        assert_eq!(check_backward_shift(&z(3), &cfg).unwrap().residual, 0.0);
        assert!(check_backward_shift(&b(&[c(0.5, 0.0)]), &cfg).unwrap().residual <= 1e-10);
        assert!(check_backward_shift(&b(&[c(0.5, 0.0), c(0.0, 0.3)]), &cfg).unwrap().residual <= 1e-10);
    }
}
