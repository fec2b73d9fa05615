//! Dense complex polynomials (coefficients low → high) and their roots.

use crate::C64;

pub fn eval(p: &[C64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

pub fn derivative(p: &[C64]) -> Vec<C64> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn trim(p: &mut Vec<C64>) {
    while p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
}

/// `Π (z - r)` over `roots`.
pub fn from_roots(roots: &[C64]) -> Vec<C64> {
    roots.iter().fold(vec![C64::new(1.0, 0.0)], |acc, r| mul(&acc, &[-r, C64::new(1.0, 0.0)]))
}

/// All complex roots with multiplicity, by Aberth–Ehrlich iteration followed
/// by Newton polishing. Exact zero roots are factored out first.
pub fn roots(p: &[C64]) -> Vec<C64> {
    let mut p = p.to_vec();
    trim(&mut p);
    let mut out = Vec::new();
    let lead_zeros = p.iter().take_while(|c| c.norm() == 0.0).count();
    if lead_zeros == p.len() {
        return out;
    }
    out.extend(std::iter::repeat_n(C64::new(0.0, 0.0), lead_zeros));
    let p: Vec<C64> = p[lead_zeros..].to_vec();
    let n = p.len() - 1;
    if n == 0 {
        return out;
    }
    let lead = p[n];
    let monic: Vec<C64> = p.iter().map(|c| c / lead).collect();
    if n == 1 {
        out.push(-monic[0]);
        return out;
    }
    if n == 2 {
        let (b, c) = (monic[1], monic[0]);
        let disc = (b * b - 4.0 * c).sqrt();
        // Pick the sign that avoids cancellation.
        let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
        if q.norm() == 0.0 {
            out.extend([C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        } else {
            out.extend([q, c / q]);
        }
        return out;
    }
    let dp = derivative(&monic);
    // Initial guesses on a circle whose radius is the Cauchy-type bound.
    let radius = monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max).clamp(1e-3, 1e6);
    let r0 = (radius + 1.0).min(2.0 * radius.max(0.5));
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(r0 * 0.9, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pv = eval(&monic, z[i]);
            let dv = eval(&dp, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dv = eval(&dp, *zi);
            if dv.norm() == 0.0 {
                break;
            }
            let step = eval(&monic, *zi) / dv;
            if !step.is_finite() {
                break;
            }
            let cand = *zi - step;
            if eval(&monic, cand).norm() <= eval(&monic, *zi).norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    out.extend(z);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    #[test]
    fn roots_recover_known_factors() {
        let want = vec![c(0.5, 0.0), c(-0.3, 0.2), c(2.0, -1.0), c(0.0, 0.0), c(1.5, 1.5)];
        let p = from_roots(&want);
        let got = sorted(roots(&p));
        for (g, w) in got.iter().zip(sorted(want)) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn quadratic_and_linear() {
        assert_eq!(roots(&[c(-2.0, 0.0), c(1.0, 0.0)]), vec![c(2.0, 0.0)]);
        let r = sorted(roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14 && (r[1] - c(0.0, 1.0)).norm() < 1e-14);
    }
}
