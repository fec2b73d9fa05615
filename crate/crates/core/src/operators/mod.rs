//! Operator matrices between labelled bases.

mod assemble;
mod classic;
mod spectral;

use std::fmt::Write as _;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::BasisSpec;
use crate::C64;

pub use assemble::{assemble, restricted_matrix};
pub use classic::{dual_toeplitz, hankel, shifts, toeplitz, HankelVariant, ShiftKind};
pub use spectral::{rank_one, spectral, Spectrum};

/// Every tag maps to one defining formula; see [`assemble`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Toeplitz,
    HankelFlipped,
    HankelHat,
    DualToeplitz,
    Tto,
    Tho,
    LittleTho,
    Btho,
    Rto,
    Rho,
    Tau,
    HSmall,
    Stto,
    Btto,
    Srho,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 15] = [
        Self::Toeplitz,
        Self::HankelFlipped,
        Self::HankelHat,
        Self::DualToeplitz,
        Self::Tto,
        Self::Tho,
        Self::LittleTho,
        Self::Btho,
        Self::Rto,
        Self::Rho,
        Self::Tau,
        Self::HSmall,
        Self::Stto,
        Self::Btto,
        Self::Srho,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Toeplitz => "toeplitz",
            Self::HankelFlipped => "hankel_flipped",
            Self::HankelHat => "hankel_hat",
            Self::DualToeplitz => "dual_toeplitz",
            Self::Tto => "tto",
            Self::Tho => "tho",
            Self::LittleTho => "little_tho",
            Self::Btho => "btho",
            Self::Rto => "rto",
            Self::Rho => "rho",
            Self::Tau => "tau",
            Self::HSmall => "h_small",
            Self::Stto => "stto",
            Self::Btto => "btto",
            Self::Srho => "srho",
        }
    }
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown operator kind `{s}`")))
    }
}

/// Window and internal expansion order for assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyConfig {
    /// Reported window `N`; infinite-dimensional bases are cut to `N + 1` vectors.
    pub window: usize,
    /// Series are expanded to `expansion_factor · (N + 1)` coefficients.
    pub expansion_factor: usize,
}

impl AssemblyConfig {
    pub fn new(window: usize) -> Self {
        Self { window, expansion_factor: 4 }
    }

    pub fn size(&self) -> usize {
        self.window + 1
    }

    pub fn order(&self) -> usize {
        self.expansion_factor * (self.window + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<C64>,
    pub domain: BasisSpec,
    pub codomain: BasisSpec,
    /// Uniform bound on `|stored - exact|` over the trusted block.
    pub entry_error: f64,
    pub trusted_rows: Range<usize>,
    pub trusted_cols: Range<usize>,
    /// Set when some input came from an uncertified expansion.
    pub heuristic: bool,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<C64>, domain: BasisSpec, codomain: BasisSpec, entry_error: f64) -> Self {
        let (r, c) = entries.shape();
        Self { entries, domain, codomain, entry_error, trusted_rows: 0..r, trusted_cols: 0..c, heuristic: false }
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    /// `self ∘ inner`; the codomain of `inner` must equal the domain of `self`.
    pub fn compose(&self, inner: &OperatorMatrix) -> Result<OperatorMatrix> {
        if inner.codomain != self.domain {
            return Err(Error::BasisMismatch(format!(
                "cannot compose {} after {}",
                self.domain.label(),
                inner.codomain.label()
            )));
        }
        let entries = matmul(&self.entries, &inner.entries);
        let row_l1 = (0..self.rows()).map(|i| self.entries.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        let col_l1 = (0..inner.cols()).map(|j| inner.entries.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        let err = self.entry_error * col_l1 + inner.entry_error * row_l1 + self.cols() as f64 * self.entry_error * inner.entry_error;
        Ok(OperatorMatrix {
            entries,
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            entry_error: err,
            trusted_rows: self.trusted_rows.clone(),
            trusted_cols: inner.trusted_cols.clone(),
            heuristic: self.heuristic || inner.heuristic,
        })
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entry_error: self.entry_error,
            trusted_rows: self.trusted_cols.clone(),
            trusted_cols: self.trusted_rows.clone(),
            heuristic: self.heuristic,
        }
    }

    /// Copy of the trusted sub-block.
    pub fn trusted(&self) -> DMatrix<C64> {
        self.entries
            .view((self.trusted_rows.start, self.trusted_cols.start), (self.trusted_rows.len(), self.trusted_cols.len()))
            .into_owned()
    }

    /// Frobenius norm of the trusted sub-block.
    pub fn trusted_norm(&self) -> f64 {
        self.trusted().norm()
    }

    /// Row-major CSV, one matrix row per line, `re,im` per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| {
                    let z = self.entries[(i, j)];
                    format!("{:e},{:e}", z.re, z.im)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// JSON sidecar describing the CSV: bases, sizes, error and trusted windows.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "domain": self.domain.label(),
            "codomain": self.codomain.label(),
            "domain_basis": self.domain,
            "codomain_basis": self.codomain,
            "entry_error": self.entry_error,
            "trusted_rows": [self.trusted_rows.start, self.trusted_rows.end],
            "trusted_cols": [self.trusted_cols.start, self.trusted_cols.end],
            "heuristic": self.heuristic,
        })
    }
}

/// Complex matrix product through four real products, so the blocked real
/// kernel does the work. Summation order depends only on the shapes.
pub fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, C64::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_matches_generic_product() {
        let a = DMatrix::from_fn(7, 5, |i, j| C64::new(i as f64 - 0.5 * j as f64, (i * j) as f64 * 0.1));
        let b = DMatrix::from_fn(5, 3, |i, j| C64::new(0.3 * j as f64, i as f64 - 1.0));
        assert!((matmul(&a, &b) - &a * &b).norm() < 1e-12);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in OperatorKind::ALL {
            assert_eq!(k.as_str().parse::<OperatorKind>().unwrap(), k);
        }
        assert!("nope".parse::<OperatorKind>().is_err());
    }

    #[test]
    fn compose_checks_bases() {
        let a = OperatorMatrix::new(DMatrix::identity(2, 2), BasisSpec::monomial(2), BasisSpec::monomial(2), 0.0);
        let b = OperatorMatrix::new(DMatrix::identity(2, 2), BasisSpec::conj_h02(2), BasisSpec::conj_h02(2), 0.0);
        assert!(matches!(a.compose(&b), Err(Error::BasisMismatch(_))));
        assert_eq!(a.compose(&a).unwrap().entries, DMatrix::identity(2, 2));
    }

    #[test]
    fn csv_and_sidecar_shapes() {
        let m = OperatorMatrix::new(
            DMatrix::from_row_slice(1, 2, &[C64::new(1.0, -2.0), C64::new(0.5, 0.0)]),
            BasisSpec::monomial(2),
            BasisSpec::monomial(1),
            1e-12,
        );
        assert_eq!(m.to_csv(), "1e0,-2e0,5e-1,0e0\n");
        let s = m.sidecar();
        assert_eq!(s["rows"], 1);
        assert_eq!(s["trusted_cols"], serde_json::json!([0, 2]));
    }
}
