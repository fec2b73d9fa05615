use thiserror::Error;

/// Errors raised while building symbols, bases and operator matrices.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator root {0} lies on the unit circle; no annulus of convergence contains the circle")]
    NoCircleAnnulus(String),
    #[error("pole {0} lies within tolerance of the unit circle; membership is ambiguous")]
    PoleOnCircle(String),
    #[error("inner function is not a finite Blaschke product (it carries singular atoms)")]
    NotFiniteBlaschke,
    #[error("evaluation point {0} coincides with a singular atom")]
    AtomSingularity(String),
    #[error("trusted window is empty: {0}")]
    WindowTooSmall(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
