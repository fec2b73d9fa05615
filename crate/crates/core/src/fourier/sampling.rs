use std::f64::consts::PI;

use rustfft::FftPlanner;

use super::series::CoeffSeries;
use crate::C64;

fn dft_window(evaluator: &dyn Fn(C64) -> C64, m: u32, half: i64) -> Vec<C64> {
    let size = 1usize << m;
    // Half-step offset grid ξₖ = exp(2πi(k + ½)/M) never hits z = 1.
    let mut buf: Vec<C64> = (0..size)
        .map(|k| evaluator(C64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / size as f64)))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(size).process(&mut buf);
    (-half..=half)
        .map(|n| {
            let idx = n.rem_euclid(size as i64) as usize;
            // Undo the half-step offset: ξₖ^{-n} = e^{-2πink/M} · e^{-πin/M}.
            buf[idx] * C64::from_polar(1.0, -PI * n as f64 / size as f64) / size as f64
        })
        .collect()
}

/// Discrete Fourier expansion of a boundary function from `2^m` uniform
/// samples on the half-step grid `exp(2πi(k+½)/2^m)`.
///
/// The stored window is `[-2^{m-2}, 2^{m-2}]`. The tail bound is a
/// heuristic: the `ℓ¹` distance between the `m` and `m+1` expansions on that
/// window. The result is always flagged heuristic.
pub fn sample_expand(evaluator: &dyn Fn(C64) -> C64, m: u32) -> CoeffSeries {
    assert!((2..=26).contains(&m), "sample exponent out of range");
    let half = 1i64 << (m - 2);
    let coarse = dft_window(evaluator, m, half);
    let fine = dft_window(evaluator, m + 1, half);
    let aliasing: f64 = coarse.iter().zip(&fine).map(|(a, b)| (a - b).norm()).sum();
    CoeffSeries::new(-half, coarse, aliasing).with_heuristic(true)
}
