use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::operators::{assemble, matmul, restricted_matrix, toeplitz, OperatorKind};
use crate::spaces::{materialize, model_projection_block, BasisSpec};
use crate::symbol::Symbol;
use crate::C64;

use super::checks::{check_backward_shift, coords};
use super::report::{CheckReport, Expect};
use super::VerifyConfig;

fn vstack(top: &DMatrix<C64>, bottom: &DMatrix<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    m.rows_mut(0, top.nrows()).copy_from(top);
    m.rows_mut(top.nrows(), bottom.nrows()).copy_from(bottom);
    m
}

fn blocks(a: &DMatrix<C64>, b: &DMatrix<C64>, c: &DMatrix<C64>, d: &DMatrix<C64>) -> DMatrix<C64> {
    let (r0, c0) = a.shape();
    let mut m = DMatrix::zeros(r0 + c.nrows(), c0 + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, c0), b.shape()).copy_from(b);
    m.view_mut((r0, 0), c.shape()).copy_from(c);
    m.view_mut((r0, c0), d.shape()).copy_from(d);
    m
}

/// The identity battery: adjoint relations between the four restricted
/// operators, the Hankel-product forms of the restricted Toeplitz operator and
/// of the Gram matrix of the restricted Hankel operator, the splittings of the
/// small and big truncated Toeplitz operators, the conjugation relation and
/// dual-Toeplitz form of the small restricted Hankel operator, the
/// backward-shift relation, and the 2×2 block form of `T_φ` and `H_φ` in
/// `θH² ⊕ K_θ`. The residual is the largest component.
pub fn check_decompositions(phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, cfg: &VerifyConfig) -> Result<CheckReport> {
    if !theta.is_finite_blaschke() {
        return Err(Error::NotFiniteBlaschke);
    }
    let acfg = cfg.assembly();
    let (n, l) = (acfg.size(), acfg.order());
    let unit = InnerFunction::unit();
    let asm = |kind, s: &Symbol, e: &InnerFunction| assemble(kind, s, e, theta, &acfg).map(|m| m.entries);
    let mut components: Vec<(String, f64)> = Vec::new();
    let mut push = |name: &str, v: f64| components.push((name.to_string(), v));

    let rto = asm(OperatorKind::Rto, phi, eta)?;
    let rho = asm(OperatorKind::Rho, phi, eta)?;

    push("tau_adjoint", (asm(OperatorKind::Tau, phi, eta)? - asm(OperatorKind::Rto, &phi.bar(), eta)?.adjoint()).norm());
    push("h_small_adjoint", (asm(OperatorKind::HSmall, phi, eta)? - asm(OperatorKind::Rho, &phi.star(), eta)?.adjoint()).norm());

    let e = materialize(&BasisSpec::model(theta, l))?;
    let u_tm = coords(&e, l, |i| i as i64);
    let th = theta.expand(2 * l + 2);
    let phieta = phi.times_inner(eta, 1);

    // 𝒯_φ = U*·H_θ̆·Ĥ_{θ̄φη}
    let h_breve = DMatrix::from_fn(l, l, |j, i| th.get((j + i + 1) as i64));
    let g = phieta.times_inner(theta, -1).series(l + n + 1)?;
    let h_g = DMatrix::from_fn(l, n, |i, k| g.get(-(i as i64) - k as i64 - 1));
    let via_hankel = matmul(&matmul(&u_tm.adjoint(), &h_breve), &h_g);
    push("rto_hankel_product", (&rto - via_hankel).norm());

    // ℋ_φ*ℋ_φ = B*B with B = Ĥ_θ̄·H_{φη}
    let h_bar = DMatrix::from_fn(l, l, |i, j| th.get((i + j + 1) as i64).conj());
    let pe = phieta.series(l + n + 1)?;
    let h_pe = DMatrix::from_fn(l, n, |j, k| pe.get(-(j as i64) - k as i64 - 1));
    let bmat = matmul(&h_bar, &h_pe);
    push("rho_gram", (matmul(&rho.adjoint(), &rho) - matmul(&bmat.adjoint(), &bmat)).norm());

    // t_φ = (h_{θφ} ; τ_φ) and T_φ = (τ_φ ; h_{φθ*}) with η = 1.
    let stto = asm(OperatorKind::Stto, phi, &unit)?;
    let tau1 = asm(OperatorKind::Tau, phi, &unit)?;
    let split = vstack(&asm(OperatorKind::HSmall, &phi.times_inner(theta, 1), &unit)?, &tau1);
    push("stto_split", (stto - split).norm());
    let btto = asm(OperatorKind::Btto, phi, &unit)?;
    let split = vstack(&tau1, &asm(OperatorKind::HSmall, &phi.times_inner(&theta.star(), 1), &unit)?);
    push("btto_split", (btto - split).norm());

    // Small restricted Hankel operator: conjugation relation and P_θ̄Ĥ_{φη}.
    let srho = asm(OperatorKind::Srho, phi, eta)?;
    let partner = phi.star().times_inner(eta, -1).times_inner(&eta.star(), 1);
    push("srho_conjugation", (&srho - asm(OperatorKind::Rho, &partner, eta)?.map(|z| z.conj())).norm());
    let p_conj = model_projection_block(theta, n, l).entries.map(|z| z.conj());
    let cm = materialize(&BasisSpec::conj_model(theta, l))?;
    let u_cm = coords(&cm, n, |i| -(i as i64) - 1);
    push("srho_dual_toeplitz", (matmul(&p_conj, &h_pe) - matmul(&u_cm, &srho)).norm());

    push("backward_shift", check_backward_shift(theta, cfg)?.residual);

    // 2×2 block forms in the split basis (θzᵏ then e_j), with η = θ.
    let bw = materialize(&BasisSpec::beurling(theta, n, l))?;
    let mut split_basis = bw.clone();
    split_basis.extend(e.iter().cloned());
    let u = coords(&split_basis, l, |i| i as i64);
    let ps = phi.series(2 * l)?;
    let t_l = toeplitz(&ps, l, l).entries;
    let h_l = DMatrix::from_fn(l, l, |a, b| ps.get(-(a as i64) - b as i64 - 1));
    let ua = u.adjoint();
    let t_split = matmul(&ua, &matmul(&t_l, &u));
    let h_split = matmul(&ua, &matmul(&h_l, &u));
    let beur = BasisSpec::beurling(theta, n, l);
    let t_want = blocks(
        &toeplitz(&ps, n, n).entries,
        &asm(OperatorKind::Tau, phi, theta)?,
        &asm(OperatorKind::Rto, phi, theta)?,
        &asm(OperatorKind::Tto, phi, theta)?,
    );
    let h_want = blocks(
        &restricted_matrix(&ps, &beur, &beur, true)?.entries,
        &asm(OperatorKind::HSmall, phi, theta)?,
        &asm(OperatorKind::Rho, phi, theta)?,
        &asm(OperatorKind::Tho, phi, theta)?,
    );
    push("toeplitz_blocks", (t_split - t_want).norm());
    push("hankel_blocks", (h_split - h_want).norm());

    let residual = components.iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(CheckReport::new(
        "decompositions",
        "adjoints; 𝒯_φ = H_θ̆H_{θ̄φη}; ℋ_φ*ℋ_φ = (H_θ̄H_{φη})*(H_θ̄H_{φη}); t_φ = τ_φ + θ̄𝒥h_{θφ}; T_φ = 𝒥τ_φ + θh_{φθ*}; V-relation; S* = S_θ*; block matrices",
        Expect::Vanish,
        residual,
        cfg.tol_identity,
    )
    .components(components)
    .heuristic(phi.is_heuristic() || !eta.is_finite_blaschke())
    .window(&[[0, cfg.window as i64]])
    .digest(&["decompositions", &phi.label(), &eta.label(), &theta.label(), &cfg.describe()]))
}
