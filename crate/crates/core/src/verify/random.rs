//! Seeded random test instances.
//!
//! Coefficients are uniform in the square `[-1, 1]²`; Blaschke zeros are
//! uniform by area in the disk of radius `ZERO_RADIUS`.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fourier::CoeffSeries;
use crate::inner::InnerFunction;
use crate::C64;

pub const ZERO_RADIUS: f64 = 0.8;

/// An independent generator for each `(seed, stream)` pair.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn coefficient(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Laurent polynomial supported on `[-a, b]` with `a, b ≤ max_degree`.
pub fn laurent(rng: &mut impl Rng, max_degree: usize) -> CoeffSeries {
    let lo = -(rng.gen_range(0..=max_degree) as i64);
    let hi = rng.gen_range(0..=max_degree) as i64;
    let coeffs = (lo..=hi).map(|_| coefficient(rng)).collect();
    CoeffSeries::new(lo, coeffs, 0.0)
}

/// Analytic polynomial of degree at most `max_degree`.
pub fn analytic(rng: &mut impl Rng, max_degree: usize) -> CoeffSeries {
    let hi = rng.gen_range(0..=max_degree);
    let coeffs = (0..=hi).map(|_| coefficient(rng)).collect();
    CoeffSeries::new(0, coeffs, 0.0)
}

pub fn disk_point(rng: &mut impl Rng, radius: f64) -> C64 {
    let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
    C64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
}

/// Blaschke product with degree uniform in `min_degree..=max_degree`.
pub fn blaschke(rng: &mut impl Rng, min_degree: usize, max_degree: usize) -> InnerFunction {
    let d = rng.gen_range(min_degree..=max_degree);
    let zeros: Vec<C64> = (0..d).map(|_| disk_point(rng, ZERO_RADIUS)).collect();
    InnerFunction::blaschke(&zeros).expect("zeros lie inside the disk")
}
