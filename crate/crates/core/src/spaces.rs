//! Orthonormal bases for `H² = θH² ⊕ K_θ` and for `conj(zK_θ)`, and matrix
//! realizations of the projections onto `K_θ` and `conj(zK_θ)`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{CoeffSeries, TransformKind};
use crate::inner::InnerFunction;
use crate::operators::{matmul, OperatorMatrix};
use crate::C64;

/// Fringe coefficients below this relative `ℓ¹` mass are folded into the
/// tail bound when a basis vector is materialized.
pub const COMPRESS_REL: f64 = 1e-17;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BasisKind {
    /// `{zᵏ}`
    MonomialH2,
    /// `{η zᵏ}`
    Beurling(InnerFunction),
    /// Takenaka–Malmquist basis of `K_θ`.
    ModelTm(InnerFunction),
    /// `{V eₖ}` for the Takenaka–Malmquist vectors `eₖ`; spans `conj(zK_θ)`.
    ConjModel(InnerFunction),
    /// `{z̄^{k+1}}`
    ConjH02,
    /// `{θ̄ z̄^{k+1}}`
    ConjBeurling(InnerFunction),
    /// Orthogonal direct sum, first block then second.
    Pair(Box<BasisSpec>, Box<BasisSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub size: usize,
    /// Highest coefficient index kept when a basis vector is expanded.
    pub expansion_order: usize,
}

impl BasisSpec {
    pub fn monomial(size: usize) -> Self {
        Self { kind: BasisKind::MonomialH2, size, expansion_order: 0 }
    }

    pub fn beurling(eta: &InnerFunction, size: usize, expansion_order: usize) -> Self {
        Self { kind: BasisKind::Beurling(eta.clone()), size, expansion_order }
    }

    /// The full Takenaka–Malmquist basis (`size = degree θ`).
    pub fn model(theta: &InnerFunction, expansion_order: usize) -> Self {
        Self { kind: BasisKind::ModelTm(theta.clone()), size: theta.degree(), expansion_order }
    }

    pub fn conj_model(theta: &InnerFunction, expansion_order: usize) -> Self {
        Self { kind: BasisKind::ConjModel(theta.clone()), size: theta.degree(), expansion_order }
    }

    pub fn conj_h02(size: usize) -> Self {
        Self { kind: BasisKind::ConjH02, size, expansion_order: 0 }
    }

    pub fn conj_beurling(theta: &InnerFunction, size: usize, expansion_order: usize) -> Self {
        Self { kind: BasisKind::ConjBeurling(theta.clone()), size, expansion_order }
    }

    pub fn pair(first: BasisSpec, second: BasisSpec) -> Self {
        let size = first.size + second.size;
        let expansion_order = first.expansion_order.max(second.expansion_order);
        Self { kind: BasisKind::Pair(Box::new(first), Box::new(second)), size, expansion_order }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            BasisKind::ModelTm(t) | BasisKind::ConjModel(t) => {
                if !t.is_finite_blaschke() {
                    return Err(Error::NotFiniteBlaschke);
                }
                if self.size > t.degree() {
                    return Err(Error::Invalid(format!(
                        "model basis size {} exceeds degree {}",
                        self.size,
                        t.degree()
                    )));
                }
                Ok(())
            }
            BasisKind::Pair(a, b) => {
                a.validate()?;
                b.validate()?;
                if a.size + b.size != self.size {
                    return Err(Error::Invalid("pair size mismatch".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// True when some vector is built from a function with singular atoms.
    pub fn is_heuristic(&self) -> bool {
        match &self.kind {
            BasisKind::Beurling(f) | BasisKind::ConjBeurling(f) => !f.is_finite_blaschke(),
            BasisKind::Pair(a, b) => a.is_heuristic() || b.is_heuristic(),
            _ => false,
        }
    }

    /// Short label used in sidecars and error messages.
    pub fn label(&self) -> String {
        match &self.kind {
            BasisKind::MonomialH2 => format!("monomial_h2[{}]", self.size),
            BasisKind::Beurling(f) => format!("beurling({})[{}]", f.label(), self.size),
            BasisKind::ModelTm(f) => format!("model_tm({})[{}]", f.label(), self.size),
            BasisKind::ConjModel(f) => format!("conj_model({})[{}]", f.label(), self.size),
            BasisKind::ConjH02 => format!("conj_h02[{}]", self.size),
            BasisKind::ConjBeurling(f) => format!("conj_beurling({})[{}]", f.label(), self.size),
            BasisKind::Pair(a, b) => format!("{} + {}", a.label(), b.label()),
        }
    }
}

/// Takenaka–Malmquist vectors `eₖ = √(1-|aₖ|²)/(1-āₖz) · Π_{j<k} b_{aⱼ}`.
fn takenaka_malmquist(theta: &InnerFunction, size: usize, order: usize) -> Vec<CoeffSeries> {
    let n = order as i64;
    let mut prefix = CoeffSeries::one();
    let mut out = Vec::with_capacity(size);
    for &a in theta.zeros().iter().take(size) {
        let r = a.norm();
        let w = (1.0 - r * r).sqrt();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut p = C64::new(w, 0.0);
        for _ in 0..=order {
            coeffs.push(p);
            p *= a.conj();
            if r == 0.0 {
                break;
            }
        }
        let tail = if r == 0.0 { 0.0 } else { w * r.powi(order as i32 + 1) / (1.0 - r) };
        let kernel = CoeffSeries::new(0, coeffs, tail);
        out.push(prefix.multiply_truncated(&kernel, 0, n).compress(COMPRESS_REL));
        let factor = InnerFunction::blaschke(&[a]).expect("validated zero").expand(order);
        prefix = prefix.multiply_truncated(&factor, 0, n);
    }
    out
}

/// Materialize every basis vector as a coefficient series.
pub fn materialize(spec: &BasisSpec) -> Result<Vec<CoeffSeries>> {
    spec.validate()?;
    let one = C64::new(1.0, 0.0);
    let order = spec.expansion_order;
    Ok(match &spec.kind {
        BasisKind::MonomialH2 => (0..spec.size as i64).map(|k| CoeffSeries::monomial(k, one)).collect(),
        BasisKind::ConjH02 => (0..spec.size as i64).map(|k| CoeffSeries::monomial(-k - 1, one)).collect(),
        BasisKind::Beurling(eta) => {
            let e = eta.expand(order).compress(COMPRESS_REL);
            (0..spec.size as i64).map(|k| e.shift(k)).collect()
        }
        BasisKind::ConjBeurling(theta) => {
            let e = theta.expand(order).compress(COMPRESS_REL).transform(TransformKind::Bar);
            (0..spec.size as i64).map(|k| e.shift(-k - 1)).collect()
        }
        BasisKind::ModelTm(theta) => takenaka_malmquist(theta, spec.size, order),
        BasisKind::ConjModel(theta) => takenaka_malmquist(theta, spec.size, order)
            .into_iter()
            .map(|e| e.transform(TransformKind::VAnti))
            .collect(),
        BasisKind::Pair(a, b) => {
            let mut v = materialize(a)?;
            v.extend(materialize(b)?);
            v
        }
    })
}

/// Gram matrix `G[j][k] = ⟨vₖ, vⱼ⟩` and a uniform bound on its entry errors.
pub fn gram(vectors: &[CoeffSeries]) -> (DMatrix<C64>, f64) {
    let n = vectors.len();
    let cells: Vec<(C64, f64)> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = (idx % n, idx / n);
            vectors[k].inner_product(&vectors[j])
        })
        .collect();
    let err = cells.iter().map(|c| c.1).fold(0.0, f64::max);
    (DMatrix::from_iterator(n, n, cells.into_iter().map(|c| c.0)), err)
}

/// Basis dump: a header of coefficient indices, then one row per vector with
/// `re,im` pairs.
pub fn basis_csv(vectors: &[CoeffSeries]) -> String {
    let nonzero: Vec<&CoeffSeries> = vectors.iter().filter(|v| !v.is_zero()).collect();
    let lo = nonzero.iter().map(|v| v.lo()).min().unwrap_or(0);
    let hi = nonzero.iter().map(|v| v.hi()).max().unwrap_or(-1);
    let mut out = String::new();
    let header: Vec<String> = (lo..=hi).map(|n| format!("re{n},im{n}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for v in vectors {
        let row: Vec<String> = (lo..=hi).map(|n| format!("{:e},{:e}", v.get(n).re, v.get(n).im)).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// `Σ_{l ≤ min(j,k)} θ̂(j-l) conj θ̂(k-l)`, the entries of `T_θ T_θ̄` on the
/// monomial window, for rows `0..rows` and columns `0..cols`.
fn toeplitz_gram(theta_hat: &[C64], rows: usize, cols: usize) -> DMatrix<C64> {
    let coef = |n: usize| theta_hat.get(n).copied().unwrap_or_default();
    let cells: Vec<C64> = (0..rows * cols)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = (idx % rows, idx / rows);
            (0..=j.min(k)).map(|l| coef(j - l) * coef(k - l).conj()).sum()
        })
        .collect();
    DMatrix::from_vec(rows, cols, cells)
}

/// `I - T_θT_θ̄` restricted to the monomial window `[0, n]`, as a
/// `(n+1)×(n+1)` matrix. Only coefficients `θ̂(0..=n)` enter, so the entries
/// are exact up to rounding.
pub fn model_projection_matrix(theta: &InnerFunction, n: usize) -> OperatorMatrix {
    model_projection_block(theta, n + 1, n + 1)
}

/// Rows `0..rows`, columns `0..cols` of `I - T_θT_θ̄`.
pub fn model_projection_block(theta: &InnerFunction, rows: usize, cols: usize) -> OperatorMatrix {
    let m = rows.max(cols);
    let th = theta.expand(m.saturating_sub(1));
    let hat: Vec<C64> = (0..m as i64).map(|n| th.get(n)).collect();
    let mut p = -toeplitz_gram(&hat, rows, cols);
    for i in 0..rows.min(cols) {
        p[(i, i)] += C64::new(1.0, 0.0);
    }
    let err = f64::EPSILON * m as f64 * 4.0;
    let mut out = OperatorMatrix::new(p, BasisSpec::monomial(cols), BasisSpec::monomial(rows), err);
    out.heuristic = !theta.is_finite_blaschke();
    out
}

/// The projection onto `conj(zK_θ)` on the window `z̄¹, …, z̄^{n+1}` (row `j`
/// is the coefficient of `z̄^{j+1}`), computed as `I - dT_θ̄ dT_θ` from dual
/// Toeplitz matrices.
pub fn conj_model_projection_matrix(theta: &InnerFunction, n: usize) -> OperatorMatrix {
    let m = n + 1;
    let th = theta.expand(n);
    // dT_ψ on conj(H₀²): entry (j, k) = ψ̂(k - j).
    let dt_theta = DMatrix::from_fn(m, m, |j, k| if k >= j { th.get((k - j) as i64) } else { C64::default() });
    let dt_theta_bar = dt_theta.adjoint();
    let mut p = -matmul(&dt_theta_bar, &dt_theta);
    for i in 0..m {
        p[(i, i)] += C64::new(1.0, 0.0);
    }
    let err = f64::EPSILON * m as f64 * 4.0;
    let mut out = OperatorMatrix::new(p, BasisSpec::conj_h02(m), BasisSpec::conj_h02(m), err);
    out.heuristic = !theta.is_finite_blaschke();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn identity_distance(g: &DMatrix<C64>) -> f64 {
        (g - DMatrix::<C64>::identity(g.nrows(), g.ncols())).norm()
    }

    #[test]
    fn model_basis_of_z_power_is_monomial() {
        let v = materialize(&BasisSpec::model(&InnerFunction::power_of_z(3), 50)).unwrap();
        for (k, e) in v.iter().enumerate() {
            assert!(e.same_coefficients(&CoeffSeries::monomial(k as i64, c(1.0, 0.0))));
        }
    }

    #[test]
    fn single_factor_model_vector_has_unit_norm() {
        let th = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap();
        let v = materialize(&BasisSpec::model(&th, 200)).unwrap();
        assert_eq!(v.len(), 1);
        // Σ 0.75 · 0.25ⁿ = 1
        assert!((v[0].l2() - 1.0).abs() < 1e-14);
        assert!((v[0].get(3) - c(0.75f64.sqrt() * 0.125, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn beurling_of_z_is_shifted_monomials() {
        let v = materialize(&BasisSpec::beurling(&InnerFunction::power_of_z(1), 3, 10)).unwrap();
        for (k, e) in v.iter().enumerate() {
            assert!(e.same_coefficients(&CoeffSeries::monomial(k as i64 + 1, c(1.0, 0.0))));
        }
    }

    #[test]
    fn bases_are_orthonormal() {
        let th = InnerFunction::blaschke(&[c(0.5, 0.2), c(-0.7, 0.1), c(0.0, 0.8), c(0.5, 0.2)]).unwrap();
        let specs = [
            BasisSpec::model(&th, 400),
            BasisSpec::conj_model(&th, 400),
            BasisSpec::beurling(&th, 30, 400),
            BasisSpec::conj_beurling(&th, 30, 400),
            BasisSpec::pair(BasisSpec::conj_h02(20), BasisSpec::beurling(&th, 20, 400)),
            BasisSpec::pair(BasisSpec::conj_beurling(&th, 20, 400), BasisSpec::monomial(20)),
        ];
        for spec in specs {
            let (g, _) = gram(&materialize(&spec).unwrap());
            assert!(identity_distance(&g) < 1e-10, "{}", spec.label());
        }
    }

    #[test]
    fn model_vectors_are_orthogonal_to_beurling_vectors() {
        let th = InnerFunction::blaschke(&[c(0.6, -0.3), c(0.1, 0.4)]).unwrap();
        let e = materialize(&BasisSpec::model(&th, 400)).unwrap();
        let b = materialize(&BasisSpec::beurling(&th, 40, 400)).unwrap();
        for x in &e {
            for y in &b {
                assert!(x.inner_product(y).0.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn model_basis_rejects_atoms_and_oversize() {
        let th = InnerFunction::single_atom(0.0, 1.0).unwrap();
        assert!(matches!(materialize(&BasisSpec::model(&th, 10)), Err(Error::NotFiniteBlaschke)));
        let mut spec = BasisSpec::model(&InnerFunction::power_of_z(2), 10);
        spec.size = 3;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn projection_of_z_squared() {
        let p = model_projection_matrix(&InnerFunction::power_of_z(2), 5);
        let mut want = DMatrix::<C64>::zeros(6, 6);
        want[(0, 0)] = c(1.0, 0.0);
        want[(1, 1)] = c(1.0, 0.0);
        assert_eq!(p.entries, want);
    }

    #[test]
    fn projection_of_constant_is_zero() {
        let p = model_projection_matrix(&InnerFunction::unit(), 7);
        assert_eq!(p.entries.norm(), 0.0);
    }

    #[test]
    fn projection_of_single_factor_is_rank_one() {
        let th = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap();
        let p = model_projection_matrix(&th, 200);
        let e = &materialize(&BasisSpec::model(&th, 400)).unwrap()[0];
        for j in 0..=100 {
            for k in 0..=100 {
                let want = e.get(j as i64) * e.get(k as i64).conj();
                assert!((p.entries[(j, k)] - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn conj_projection_keeps_leading_indices() {
        let p = conj_model_projection_matrix(&InnerFunction::power_of_z(1), 3);
        assert!((p.entries[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((p.entries.norm() - 1.0).abs() < 1e-15);
        let p = conj_model_projection_matrix(&InnerFunction::power_of_z(2), 5);
        let diag: Vec<f64> = (0..6).map(|i| p.entries[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn conj_projection_is_v_conjugate_of_model_projection() {
        let th = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap();
        let p = model_projection_matrix(&th, 200);
        let q = conj_model_projection_matrix(&th, 200);
        assert!((q.entries.clone() - p.entries.map(|z| z.conj())).norm() < 1e-10);
    }

    #[test]
    fn projections_are_idempotent_and_self_adjoint() {
        let th = InnerFunction::blaschke(&[c(0.3, 0.5), c(-0.6, 0.0), c(0.2, -0.2)]).unwrap();
        let n = 80;
        let p = model_projection_matrix(&th, n).entries;
        // Trusted sub-window: P² agrees with P where the inner sum is complete.
        let full = model_projection_matrix(&th, 4 * n).entries;
        let sq = &full * &full;
        let w = n / 2;
        assert!((sq.view((0, 0), (w, w)) - full.view((0, 0), (w, w))).norm() < 1e-10);
        assert!((&p - p.adjoint()).norm() < 1e-13);
    }

    #[test]
    fn beurling_vectors_are_annihilated() {
        let th = InnerFunction::blaschke(&[c(0.4, 0.4), c(-0.5, 0.1)]).unwrap();
        let n = 120;
        let p = model_projection_matrix(&th, n).entries;
        let b = materialize(&BasisSpec::beurling(&th, n / 2 + 1, n)).unwrap();
        for v in b {
            let x = nalgebra::DVector::from_iterator(n + 1, (0..=n as i64).map(|i| v.get(i)));
            let window_exact = (&p * x).rows(0, n / 2).norm();
            assert!(window_exact < 1e-10);
        }
    }

    #[test]
    fn basis_csv_has_one_row_per_vector() {
        let v = materialize(&BasisSpec::model(&InnerFunction::power_of_z(2), 5)).unwrap();
        let csv = basis_csv(&v);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "re0,im0,re1,im1");
    }
}
