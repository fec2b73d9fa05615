//! Identity, vanishing and rank checks with machine-readable reports.
//!
//! Each identity is evaluated from two sides computed through separate code
//! paths: one side from [`assemble`](crate::operators::assemble), the other
//! from Toeplitz/Hankel matrices, shift matrices and rank-one outer products
//! built directly from Fourier coefficients.

mod checks;
mod classify;
pub mod corpus;
mod decompositions;
pub mod random;
mod rank;
mod report;
mod suite;

use serde::{Deserialize, Serialize};

use crate::operators::AssemblyConfig;

pub use checks::{
    check_intertwining, check_backward_shift, check_projection_identity, check_rho_defect, check_rto_defect, check_vanishing,
    probe_intertwining,
};
pub use classify::{classify_symbol, expected_vanishing, vanishing_class, SymbolClass};
pub use decompositions::check_decompositions;
pub use rank::{rank_study, RankStudy, RankTrend};
pub use report::{inputs_digest, verdict_for, CheckReport, CheckStatus, Component, Expect, Verdict, SEPARATION_FACTOR};
pub use suite::{run_suite, Suite};

/// Window, expansion order and tolerances shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub window: usize,
    pub expansion_factor: usize,
    /// Frobenius threshold for identities and vanishing.
    pub tol_identity: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub tol_rank: f64,
}

impl VerifyConfig {
    pub fn new(window: usize) -> Self {
        Self { window, expansion_factor: 4, tol_identity: 1e-8, tol_rank: 1e-8 }
    }

    pub fn assembly(&self) -> AssemblyConfig {
        AssemblyConfig { window: self.window, expansion_factor: self.expansion_factor }
    }

    /// Assembly with one extra domain column, so shifted columns stay inside
    /// the computed block.
    pub(crate) fn assembly_plus_one(&self) -> AssemblyConfig {
        AssemblyConfig { window: self.window + 1, expansion_factor: self.expansion_factor }
    }

    pub(crate) fn describe(&self) -> String {
        format!(
            "N={};factor={};tol_identity={:e};tol_rank={:e}",
            self.window, self.expansion_factor, self.tol_identity, self.tol_rank
        )
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self::new(200)
    }
}
