use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{CoeffSeries, TransformKind};
use crate::inner::InnerFunction;
use crate::spaces::{materialize, BasisSpec, COMPRESS_REL};
use crate::symbol::Symbol;
use crate::C64;

use super::classic::{dual_toeplitz, hankel, toeplitz, HankelVariant};
use super::{AssemblyConfig, OperatorKind, OperatorMatrix};

/// Entry `(j, k) = ⟨(𝒥?)(φ·uₖ), vⱼ⟩` for domain vectors `uₖ` and codomain
/// vectors `vⱼ`. The codomain is orthonormal, so pairing with it realizes the
/// projection onto its span. Columns are computed independently.
pub fn restricted_matrix(phi: &CoeffSeries, domain: &BasisSpec, codomain: &BasisSpec, flip: bool) -> Result<OperatorMatrix> {
    let us = materialize(domain)?;
    let vs = materialize(codomain)?;
    let phi = phi.compress(COMPRESS_REL);
    let columns: Vec<Vec<(C64, f64)>> = us
        .par_iter()
        .map(|u| {
            let w = phi.multiply(u);
            let w = if flip { w.transform(TransformKind::FlipJ) } else { w };
            vs.iter().map(|v| w.inner_product(v)).collect()
        })
        .collect();
    let rows = vs.len();
    let mut entries = DMatrix::zeros(rows, us.len());
    let mut err: f64 = 0.0;
    for (k, col) in columns.iter().enumerate() {
        for (j, &(val, e)) in col.iter().enumerate() {
            entries[(j, k)] = val;
            err = err.max(e);
        }
    }
    let mut m = OperatorMatrix::new(entries, domain.clone(), codomain.clone(), err);
    m.heuristic = phi.is_heuristic() || domain.is_heuristic() || codomain.is_heuristic();
    Ok(m)
}

/// Domain, codomain and whether `𝒥` is applied, per tag.
pub(crate) fn layout(
    kind: OperatorKind,
    eta: &InnerFunction,
    theta: &InnerFunction,
    cfg: &AssemblyConfig,
) -> Option<(BasisSpec, BasisSpec, bool)> {
    let (n, l) = (cfg.size(), cfg.order());
    let model = || BasisSpec::model(theta, l);
    let beurling = || BasisSpec::beurling(eta, n, l);
    let complement = || BasisSpec::pair(BasisSpec::conj_h02(n), BasisSpec::beurling(theta, n, l));
    Some(match kind {
        OperatorKind::Rto => (beurling(), model(), false),
        OperatorKind::Rho => (beurling(), model(), true),
        OperatorKind::Tau => (model(), beurling(), false),
        OperatorKind::HSmall => (model(), beurling(), true),
        OperatorKind::Tto => (model(), model(), false),
        OperatorKind::Tho => (model(), model(), true),
        OperatorKind::LittleTho => (model(), BasisSpec::conj_model(theta, l), false),
        OperatorKind::Btho => (model(), complement(), false),
        OperatorKind::Btto => (model(), complement(), true),
        OperatorKind::Stto => (
            model(),
            BasisSpec::pair(BasisSpec::conj_beurling(theta, n, l), BasisSpec::monomial(n)),
            false,
        ),
        OperatorKind::Srho => (beurling(), BasisSpec::conj_model(theta, l), false),
        OperatorKind::Toeplitz | OperatorKind::HankelFlipped | OperatorKind::HankelHat | OperatorKind::DualToeplitz => {
            return None
        }
    })
}

/// Assemble an operator as a matrix between its labelled bases.
///
/// | tag | domain | codomain | formula |
/// |---|---|---|---|
/// | `Toeplitz` | `zᵏ` | `zʲ` | `P(φf)` |
/// | `HankelFlipped` / `HankelHat` | `zᵏ` | `zʲ` / `z̄^{j+1}` | `𝒥Q(φf)` / `Q(φf)` |
/// | `DualToeplitz` | `z̄^{k+1}` | `z̄^{j+1}` | `Q(φf)` |
/// | `Rto` / `Rho` | `ηzᵏ` | `K_θ` | `P_θ(φh)` / `P_θ𝒥(φh)` |
/// | `Tau` / `HSmall` | `K_θ` | `ηzʲ` | `P_{ηH²}(φh)` / `P_{ηH²}𝒥(φh)` |
/// | `Tto` / `Tho` | `K_θ` | `K_θ` | `P_θ(φh)` / `P_θ𝒥(φh)` |
/// | `LittleTho` | `K_θ` | `conj(zK_θ)` | `P_θ̄(φf)` |
/// | `Btho` / `Btto` | `K_θ` | `conj(H₀²) ⊕ θH²` | `(I-P_θ)(φf)` / `(I-P_θ)𝒥(φf)` |
/// | `Stto` | `K_θ` | `θ̄ conj(H₀²) ⊕ H²` | `(I-P_θ̄)(φf)` |
/// | `Srho` | `ηzᵏ` | `conj(zK_θ)` | `P_θ̄(φh)` |
pub fn assemble(
    kind: OperatorKind,
    phi: &Symbol,
    eta: &InnerFunction,
    theta: &InnerFunction,
    cfg: &AssemblyConfig,
) -> Result<OperatorMatrix> {
    if cfg.window == 0 {
        return Err(Error::WindowTooSmall("window must be at least 1".into()));
    }
    if cfg.expansion_factor < 2 {
        return Err(Error::Invalid("expansion factor must be at least 2".into()));
    }
    let n = cfg.size();
    let series = phi.series(cfg.order())?;
    match layout(kind, eta, theta, cfg) {
        Some((domain, codomain, flip)) => restricted_matrix(&series, &domain, &codomain, flip),
        None => Ok(match kind {
            OperatorKind::Toeplitz => toeplitz(&series, n, n),
            OperatorKind::HankelFlipped => hankel(&series, n, HankelVariant::Flipped),
            OperatorKind::HankelHat => hankel(&series, n, HankelVariant::Hat),
            _ => dual_toeplitz(&series, n),
        }),
    }
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

    fn mono(n: i64, coef: C64) -> Symbol {
        Symbol::from_terms(&[(n, coef)])
    }

    #[test]
    fn rto_vanishes_on_member() {
        let m = assemble(OperatorKind::Rto, &mono(1, c(1.0, 0.0)), &z(1), &z(2), &AssemblyConfig::new(10)).unwrap();
        assert_eq!(m.entries.shape(), (2, 11));
        assert!(m.entries.norm() < 1e-15);
    }

    #[test]
    fn rto_of_one_moves_first_column_to_z() {
        let m = assemble(OperatorKind::Rto, &mono(0, c(1.0, 0.0)), &z(1), &z(2), &AssemblyConfig::new(2)).unwrap();
        let mut want = DMatrix::zeros(2, 3);
        want[(1, 0)] = c(1.0, 0.0);
        assert_eq!(m.entries, want);
    }

    #[test]
    fn stto_vanishes_on_multiple_of_theta_bar() {
        let m = assemble(OperatorKind::Stto, &mono(-1, c(0.0, 3.0)), &InnerFunction::unit(), &z(1), &AssemblyConfig::new(8)).unwrap();
        assert!(m.entries.norm() < 1e-15);
    }

    #[test]
    fn btto_vanishes_on_z_bar_for_theta_z() {
        let m = assemble(OperatorKind::Btto, &mono(-1, c(1.0, 0.0)), &InnerFunction::unit(), &z(1), &AssemblyConfig::new(8)).unwrap();
        assert!(m.entries.norm() < 1e-15);
    }

    #[test]
    fn tau_is_adjoint_of_rto_of_conjugate() {
        let eta = InnerFunction::blaschke(&[c(0.3, 0.2)]).unwrap();
        let theta = InnerFunction::blaschke(&[c(0.5, 0.0), c(-0.2, 0.6)]).unwrap();
        let phi = Symbol::from_terms(&[(-2, c(0.4, 0.1)), (0, c(1.0, 0.0)), (1, c(0.0, -0.7))]);
        let cfg = AssemblyConfig::new(30);
        let tau = assemble(OperatorKind::Tau, &phi, &eta, &theta, &cfg).unwrap();
        let rto = assemble(OperatorKind::Rto, &phi.bar(), &eta, &theta, &cfg).unwrap();
        assert!((tau.entries - rto.entries.adjoint()).norm() < 1e-10);
    }

    #[test]
    fn classical_kinds_use_monomial_bases() {
        let phi = Symbol::from_terms(&[(-1, c(2.0, 0.0)), (1, c(1.0, 0.0))]);
        let cfg = AssemblyConfig::new(1);
        let t = assemble(OperatorKind::Toeplitz, &phi, &InnerFunction::unit(), &InnerFunction::unit(), &cfg).unwrap();
        assert_eq!(t.entries, DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]));
        let d = assemble(OperatorKind::DualToeplitz, &phi, &InnerFunction::unit(), &InnerFunction::unit(), &cfg).unwrap();
        assert_eq!(d.entries, t.entries.transpose());
    }

    #[test]
    fn model_valued_kinds_reject_atoms() {
        let atom = InnerFunction::single_atom(0.0, 1.0).unwrap();
        let r = assemble(OperatorKind::Tto, &mono(0, c(1.0, 0.0)), &z(1), &atom, &AssemblyConfig::new(4));
        assert!(matches!(r, Err(Error::NotFiniteBlaschke)));
    }

    #[test]
    fn assembly_is_deterministic_under_parallelism() {
        let eta = InnerFunction::blaschke(&[c(0.3, 0.2)]).unwrap();
        let theta = InnerFunction::blaschke(&[c(0.5, 0.0), c(-0.2, 0.6)]).unwrap();
        let phi = Symbol::from_terms(&[(-2, c(0.4, 0.1)), (0, c(1.0, 0.0)), (3, c(0.0, -0.7))]);
        let cfg = AssemblyConfig::new(60);
        let a = assemble(OperatorKind::Tau, &phi, &eta, &theta, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| assemble(OperatorKind::Tau, &phi, &eta, &theta, &cfg).unwrap());
        assert_eq!(a.entries, b.entries);
    }
}
