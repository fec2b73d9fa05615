//! Toeplitz, Hankel and dual Toeplitz matrices read off Fourier coefficients,
//! and the three shifts.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::fourier::CoeffSeries;
use crate::inner::InnerFunction;
use crate::spaces::{materialize, BasisSpec};
use crate::C64;

use super::OperatorMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelVariant {
    /// `H_φ f = 𝒥(I-P)(φf)`, codomain `H²`.
    Flipped,
    /// `Ĥ_φ f = (I-P)(φf)`, codomain `conj(H₀²)` with row `j ↔ z̄^{j+1}`.
    Hat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShiftKind {
    /// Multiplication by `z` on `H²`.
    Forward,
    /// `S_θ`, the compression of the shift to `K_θ`.
    Compressed(InnerFunction),
    /// `𝒮_(η)`, the shift on `ηH²`.
    Beurling(InnerFunction),
}

fn finish(mut m: OperatorMatrix, phi: &CoeffSeries) -> OperatorMatrix {
    m.heuristic = phi.is_heuristic();
    m
}

/// `T_φ`: entry `(j, k) = φ̂(j - k)`.
pub fn toeplitz(phi: &CoeffSeries, rows: usize, cols: usize) -> OperatorMatrix {
    let entries = DMatrix::from_fn(rows, cols, |j, k| phi.get(j as i64 - k as i64));
    finish(OperatorMatrix::new(entries, BasisSpec::monomial(cols), BasisSpec::monomial(rows), phi.tail_bound()), phi)
}

/// Both variants have entry `(j, k) = φ̂(-j-k-1)`; they differ in the
/// codomain label.
pub fn hankel(phi: &CoeffSeries, n: usize, variant: HankelVariant) -> OperatorMatrix {
    hankel_rect(phi, n, n, variant)
}

pub(crate) fn hankel_rect(phi: &CoeffSeries, rows: usize, cols: usize, variant: HankelVariant) -> OperatorMatrix {
    let entries = DMatrix::from_fn(rows, cols, |j, k| phi.get(-(j as i64) - k as i64 - 1));
    let codomain = match variant {
        HankelVariant::Flipped => BasisSpec::monomial(rows),
        HankelVariant::Hat => BasisSpec::conj_h02(rows),
    };
    finish(OperatorMatrix::new(entries, BasisSpec::monomial(cols), codomain, phi.tail_bound()), phi)
}

/// `dT_φ f = Q(φf)` on `conj(H₀²)`: entry `(j, k) = φ̂(k - j)`.
pub fn dual_toeplitz(phi: &CoeffSeries, n: usize) -> OperatorMatrix {
    let entries = DMatrix::from_fn(n, n, |j, k| phi.get(k as i64 - j as i64));
    finish(OperatorMatrix::new(entries, BasisSpec::conj_h02(n), BasisSpec::conj_h02(n), phi.tail_bound()), phi)
}

/// Shift matrices. The forward and Beurling shifts map the last window
/// vector outside the window, so their last column is left untrusted. The
/// compressed shift ignores `size` and uses the full model basis.
pub fn shifts(which: &ShiftKind, size: usize, expansion_order: usize) -> Result<OperatorMatrix> {
    let sub = |n: usize| DMatrix::from_fn(n, n, |j, k| if j == k + 1 { C64::new(1.0, 0.0) } else { C64::default() });
    match which {
        ShiftKind::Forward => {
            let mut m = OperatorMatrix::new(sub(size), BasisSpec::monomial(size), BasisSpec::monomial(size), 0.0);
            m.trusted_cols = 0..size.saturating_sub(1);
            Ok(m)
        }
        ShiftKind::Beurling(eta) => {
            let spec = BasisSpec::beurling(eta, size, expansion_order);
            let mut m = OperatorMatrix::new(sub(size), spec.clone(), spec, 0.0);
            m.trusted_cols = 0..size.saturating_sub(1);
            Ok(m)
        }
        ShiftKind::Compressed(theta) => {
            let spec = BasisSpec::model(theta, expansion_order);
            let e = materialize(&spec)?;
            let d = e.len();
            let mut err: f64 = 0.0;
            let mut entries = DMatrix::zeros(d, d);
            for k in 0..d {
                let ze = e[k].shift(1);
                for j in 0..d {
                    let (v, ev) = ze.inner_product(&e[j]);
                    entries[(j, k)] = v;
                    err = err.max(ev);
                }
            }
            Ok(OperatorMatrix::new(entries, spec.clone(), spec, err))
        }
    }
}
