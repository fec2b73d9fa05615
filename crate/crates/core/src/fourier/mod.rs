//! Coefficient-level arithmetic for boundary functions on the unit circle.

pub mod poly;
mod rational;
mod sampling;
mod series;

pub use rational::{RationalSymbol, CIRCLE_TOL, ROOT_MATCH_TOL};
pub use sampling::sample_expand;
pub use series::{CoeffSeries, Projection, TransformKind};

/// Laurent expansion of a rational symbol on `[-n, n]`.
pub fn rational_to_series(r: &RationalSymbol, n: usize) -> crate::Result<CoeffSeries> {
    r.to_series(n)
}
