use nalgebra::DMatrix;

use crate::error::Result;
use crate::fourier::CoeffSeries;
use crate::spaces::{materialize, BasisKind, BasisSpec};
use crate::C64;

use super::OperatorMatrix;

/// The matrix of `h ↦ ⟨h, v⟩·u`.
///
/// Column `k` is `⟨dₖ, v⟩` times the codomain coordinates of `u`. On a
/// Beurling domain `ηH²` the pairing is taken at the level of `f = η̄h`, so
/// `dₖ = ηzᵏ` pairs as `zᵏ` and the coordinates of `v` are its monomial
/// coefficients.
pub fn rank_one(u: &CoeffSeries, v: &CoeffSeries, domain: &BasisSpec, codomain: &BasisSpec) -> Result<OperatorMatrix> {
    let cod = materialize(codomain)?;
    let mut err: f64 = 0.0;
    let left: Vec<C64> = cod
        .iter()
        .map(|c| {
            let (x, e) = u.inner_product(c);
            err = err.max(e);
            x
        })
        .collect();
    let right: Vec<C64> = match &domain.kind {
        BasisKind::Beurling(_) => (0..domain.size as i64).map(|k| v.get(k).conj()).collect(),
        _ => materialize(domain)?
            .iter()
            .map(|d| {
                let (x, e) = d.inner_product(v);
                err = err.max(e);
                x
            })
            .collect(),
    };
    let scale = left.iter().map(|z| z.norm()).fold(0.0, f64::max) + right.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let entries = DMatrix::from_fn(left.len(), right.len(), |j, k| left[j] * right[k]);
    let mut m = OperatorMatrix::new(entries, domain.clone(), codomain.clone(), err * scale + err * err + v.tail_bound() * scale);
    m.heuristic = u.is_heuristic() || v.is_heuristic() || domain.is_heuristic() || codomain.is_heuristic();
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Singular values of the trusted block, descending.
    pub singular_values: Vec<f64>,
    /// Count above `tol_rank × σ_max`.
    pub numerical_rank: usize,
}

pub fn spectral(m: &OperatorMatrix, tol_rank: f64) -> Spectrum {
    let block = m.trusted();
    if block.nrows() == 0 || block.ncols() == 0 {
        return Spectrum { singular_values: Vec::new(), numerical_rank: 0 };
    }
    let mut sv: Vec<f64> = block.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let numerical_rank = if top == 0.0 { 0 } else { sv.iter().filter(|&&s| s > tol_rank * top).count() };
    Spectrum { singular_values: sv, numerical_rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn elementary_matrix() {
        let e0 = CoeffSeries::one();
        let m = rank_one(&e0, &e0, &BasisSpec::monomial(3), &BasisSpec::monomial(3)).unwrap();
        let mut want = DMatrix::zeros(3, 3);
        want[(0, 0)] = c(1.0, 0.0);
        assert_eq!(m.entries, want);
    }

    #[test]
    fn outer_product_has_rank_one_and_swaps_under_adjoint() {
        let u = CoeffSeries::from_terms(&[(0, c(1.0, 2.0)), (2, c(-0.5, 0.0))]);
        let v = CoeffSeries::from_terms(&[(1, c(0.0, 1.0)), (3, c(2.0, 0.5))]);
        let b = BasisSpec::monomial(5);
        let uv = rank_one(&u, &v, &b, &b).unwrap();
        assert_eq!(spectral(&uv, 1e-8).numerical_rank, 1);
        let vu = rank_one(&v, &u, &b, &b).unwrap();
        assert!((uv.adjoint().entries - vu.entries).norm() < 1e-15);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = OperatorMatrix::new(DMatrix::zeros(4, 3), BasisSpec::monomial(3), BasisSpec::monomial(4), 0.0);
        assert_eq!(spectral(&m, 1e-8).numerical_rank, 0);
    }

    #[test]
    fn singular_values_descend() {
        let m = OperatorMatrix::new(
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0)])),
            BasisSpec::monomial(3),
            BasisSpec::monomial(3),
            0.0,
        );
        let s = spectral(&m, 1e-8);
        assert_eq!(s.singular_values, vec![3.0, 2.0, 1.0]);
        assert_eq!(s.numerical_rank, 3);
    }
}
