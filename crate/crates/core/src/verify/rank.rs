use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::operators::{assemble, matmul, spectral, toeplitz, AssemblyConfig, OperatorKind, OperatorMatrix};
use crate::spaces::BasisSpec;
use crate::symbol::Symbol;
use crate::C64;

use super::report::{CheckReport, CheckStatus, Expect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RankTrend {
    Plateau,
    Growing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankStudy {
    pub kind: OperatorKind,
    pub windows: Vec<usize>,
    pub ranks: Vec<usize>,
    /// Leading singular values per window, descending.
    pub singular_values: Vec<Vec<f64>>,
    pub verdict: RankTrend,
    pub strictly_increasing: bool,
    pub status: CheckStatus,
    pub note: String,
}

/// How many singular values per window go into reports and CSV.
pub const TOP_SINGULAR_VALUES: usize = 10;

/// `T_{φη} − T_θT_{θ̄φη}` (Toeplitz kind) or `H_{φη} − T_θH_{θ*φη}` (Hankel kind)
/// on the monomial window `[0, N]`. `T_θ` is lower triangular, so the products
/// need only window coefficients and the matrix equals the `N`-window of the
/// operator composed with `h ↦ η̄h`.
fn monomial_route(kind: OperatorKind, phi: &Symbol, eta: &InnerFunction, theta: &InnerFunction, window: usize, factor: usize) -> Result<DMatrix<C64>> {
    let n = window + 1;
    let order = factor * n;
    let phieta = phi.times_inner(eta, 1);
    let th = theta.expand(order);
    let t_theta = toeplitz(&th, n, n).entries;
    let hankel = |s: &crate::fourier::CoeffSeries| DMatrix::from_fn(n, n, |j, k| s.get(-(j as i64) - k as i64 - 1));
    Ok(match kind {
        OperatorKind::Rto => {
            let a = phieta.series(order)?;
            let b = phieta.times_inner(theta, -1).series(order)?;
            toeplitz(&a, n, n).entries - matmul(&t_theta, &toeplitz(&b, n, n).entries)
        }
        OperatorKind::Rho => {
            let a = phieta.series(order)?;
            let b = phieta.times_inner(&theta.star(), 1).series(order)?;
            hankel(&a) - matmul(&t_theta, &hankel(&b))
        }
        _ => return Err(Error::NotFiniteBlaschke),
    })
}

/// Numerical rank of the restricted Toeplitz or Hankel operator over a sequence
/// of windows. For finite Blaschke `θ` the operator is assembled in the model
/// basis and its rank is at most `deg θ`; otherwise the monomial window is
/// used and the study is heuristic.
pub fn rank_study(
    kind: OperatorKind,
    phi: &Symbol,
    eta: &InnerFunction,
    theta: &InnerFunction,
    windows: &[usize],
    tol_rank: f64,
    expansion_factor: usize,
) -> Result<RankStudy> {
    if windows.is_empty() || windows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("windows must be non-empty and strictly ascending".into()));
    }
    let mut ranks = Vec::with_capacity(windows.len());
    let mut singular_values = Vec::with_capacity(windows.len());
    let mut heuristic = phi.is_heuristic() || !eta.is_finite_blaschke();
    let finite = theta.is_finite_blaschke();
    for &w in windows {
        let m = if finite {
            assemble(kind, phi, eta, theta, &AssemblyConfig { window: w, expansion_factor })?
        } else {
            heuristic = true;
            let entries = monomial_route(kind, phi, eta, theta, w, expansion_factor)?;
            OperatorMatrix::new(entries, BasisSpec::monomial(w + 1), BasisSpec::monomial(w + 1), 0.0)
        };
        let s = spectral(&m, tol_rank);
        ranks.push(s.numerical_rank);
        singular_values.push(s.singular_values.into_iter().take(TOP_SINGULAR_VALUES).collect());
    }
    let upper = &ranks[(ranks.len() - 1) / 2..];
    let verdict = if upper.iter().all(|&r| r == upper[0]) { RankTrend::Plateau } else { RankTrend::Growing };
    let strictly_increasing = ranks.windows(2).all(|w| w[0] < w[1]);
    let note = if finite {
        format!("finite Blaschke θ: rank ≤ dim K_θ = {} at every window, trivially", theta.degree())
    } else {
        "singular inner θ: monomial-window ranks, heuristic".to_string()
    };
    Ok(RankStudy {
        kind,
        windows: windows.to_vec(),
        ranks,
        singular_values,
        verdict,
        strictly_increasing,
        status: if heuristic { CheckStatus::Heuristic } else { CheckStatus::Certified },
        note,
    })
}

impl RankStudy {
    /// Rows `N,rank,s1,…,sk`, singular values in `{:e}` format.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,rank");
        for i in 1..=TOP_SINGULAR_VALUES {
            let _ = write!(out, ",s{i}");
        }
        out.push('\n');
        for ((w, r), sv) in self.windows.iter().zip(&self.ranks).zip(&self.singular_values) {
            let _ = write!(out, "{w},{r}");
            for i in 0..TOP_SINGULAR_VALUES {
                match sv.get(i) {
                    Some(s) => {
                        let _ = write!(out, ",{s:e}");
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn verdict_line(&self) -> String {
        let ranks: Vec<String> = self.ranks.iter().map(|r| r.to_string()).collect();
        format!(
            "{} {:?} ranks=[{}] strictly_increasing={} ({})",
            self.kind,
            self.verdict,
            ranks.join(","),
            self.strictly_increasing,
            self.note
        )
    }

    /// A report whose residual is the rank spread over the upper half of the
    /// windows (plateau) or the smallest consecutive rank increment (growth).
    pub fn to_report(&self, check_id: &str, expect: Expect, digest_parts: &[&str]) -> CheckReport {
        let upper = &self.ranks[(self.ranks.len() - 1) / 2..];
        let residual = match expect {
            Expect::Growing => self.ranks.windows(2).map(|w| w[1] as f64 - w[0] as f64).fold(f64::INFINITY, f64::min),
            _ => (upper.iter().max().unwrap() - upper.iter().min().unwrap()) as f64,
        };
        let residual = if residual.is_finite() { residual } else { 0.0 };
        let last = *self.windows.last().unwrap() as i64;
        CheckReport::new(check_id, "rank of 𝒯_φ finite ⇔ θ finite Blaschke or φ ∈ η̄θ(H∞+ℛ)", expect, residual, 0.5)
            .heuristic(self.status == CheckStatus::Heuristic)
            .window(&[[0, last]])
            .components(self.windows.iter().zip(&self.ranks).map(|(w, r)| (format!("rank@{w}"), *r as f64)).collect())
            .note(self.verdict_line())
            .digest(digest_parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn degree_one_blaschke_has_rank_at_most_one() {
        let theta = InnerFunction::blaschke(&[c(0.5, 0.0)]).unwrap();
        let phi = Symbol::from_terms(&[(-2, c(0.3, 0.1)), (0, c(1.0, 0.0)), (1, c(0.2, -0.4))]);
        let s = rank_study(OperatorKind::Rto, &phi, &InnerFunction::power_of_z(1), &theta, &[10, 20, 40], 1e-8, 4).unwrap();
        assert!(s.ranks.iter().all(|&r| r <= 1));
        assert_eq!(s.verdict, RankTrend::Plateau);
        assert_eq!(s.status, CheckStatus::Certified);
        assert!(s.note.contains("trivially"));
    }

    #[test]
    fn monomial_route_matches_assembly_for_blaschke_theta() {
        // For finite θ both routes describe the same operator, so the singular
        // values agree.
        let theta = InnerFunction::blaschke(&[c(0.4, 0.3), c(-0.5, 0.1)]).unwrap();
        let eta = InnerFunction::blaschke(&[c(0.2, 0.0)]).unwrap();
        let phi = Symbol::from_terms(&[(-2, c(0.3, 0.1)), (0, c(1.0, 0.0)), (1, c(0.2, -0.4))]);
        for kind in [OperatorKind::Rto, OperatorKind::Rho] {
            let mono = monomial_route(kind, &phi, &eta, &theta, 30, 4).unwrap();
            let asm = assemble(kind, &phi, &eta, &theta, &AssemblyConfig::new(30)).unwrap().entries;
            let mut b: Vec<f64> = asm.singular_values().iter().copied().collect();
            b.sort_by(|x, y| y.total_cmp(x));
            let mut a_all: Vec<f64> = mono.singular_values().iter().copied().collect();
            a_all.sort_by(|x, y| y.total_cmp(x));
            for i in 0..2 {
                assert!((a_all[i] - b[i]).abs() < 1e-10, "{kind}: {a_all:?} vs {b:?}");
            }
            assert!(a_all[2] < 1e-12);
        }
    }

    #[test]
    fn csv_has_header_and_one_row_per_window() {
        let theta = InnerFunction::power_of_z(2);
        let phi = Symbol::from_terms(&[(-1, c(1.0, 0.0))]);
        let s = rank_study(OperatorKind::Rho, &phi, &InnerFunction::unit(), &theta, &[4, 8], 1e-8, 4).unwrap();
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("N,rank,s1,"));
    }

    #[test]
    fn windows_must_ascend() {
        let theta = InnerFunction::power_of_z(2);
        let phi = Symbol::constant(c(1.0, 0.0));
        assert!(rank_study(OperatorKind::Rto, &phi, &theta, &theta, &[8, 4], 1e-8, 4).is_err());
    }
}
