//! Finite matrix realizations of Toeplitz, Hankel, restricted and truncated
//! operators on the Hardy space `H²` of the unit circle.
//!
//! Boundary functions are carried as windows of Laurent coefficients with a
//! bound on the omitted mass ([`CoeffSeries`]). Inner functions, orthonormal
//! bases for `θH²`, `K_θ` and their conjugate companions, and every operator
//! built from them are assembled as dense complex matrices between labelled
//! bases. The [`verify`] module checks operator identities, vanishing
//! criteria and intertwining relations on these matrices and reports
//! residuals against fixed tolerances.

pub mod error;
pub mod fourier;
pub mod inner;
pub mod operators;
pub mod spaces;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use fourier::{CoeffSeries, RationalSymbol, TransformKind, Projection};
pub use inner::{Atom, InnerFunction};
pub use operators::{OperatorKind, OperatorMatrix, AssemblyConfig};
pub use spaces::{BasisKind, BasisSpec};
pub use symbol::Symbol;
pub use verify::{CheckReport, CheckStatus, Verdict};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
