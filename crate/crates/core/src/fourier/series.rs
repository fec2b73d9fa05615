use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Index maps on Fourier coefficients induced by the flip, star, breve,
/// conjugation and `V` transforms of boundary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TransformKind {
    /// `(Jf)(ξ) = ξ̄ f(ξ̄)`: coefficient `n` moves to `-n-1`.
    FlipJ,
    /// `f*(ξ) = conj f(ξ̄)`: coefficients conjugated in place.
    Star,
    /// `f̆(ξ) = f(ξ̄)`: coefficient `n` moves to `-n`.
    Breve,
    /// Pointwise conjugate: `conj f̂(-n)` at index `n`.
    Bar,
    /// `(Vf)(z) = z̄ conj f(z)`: conjugate-linear, `n` moves to `-n-1`.
    VAnti,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Projection {
    /// Riesz projection onto `H²` (indices `n ≥ 0`).
    PAnalytic,
    /// `I - P` (indices `n < 0`).
    QCoanalytic,
}

/// A finite window of Laurent coefficients `f̂(lo), …, f̂(lo+len-1)` together
/// with a bound on the `ℓ¹` mass of every coefficient that is not stored.
///
/// The coefficient vector is kept canonical: exact zeros at either end are
/// trimmed, and the zero series has `lo = 0` and no coefficients. A
/// `tail_bound` of zero asserts that the series is exactly the stored Laurent
/// polynomial.
///
/// `heuristic` marks series whose tail is an estimate rather than a bound
/// (sampled expansions, singular inner factors). It propagates through every
/// operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffSeries {
    lo: i64,
    coeffs: Vec<C64>,
    tail_bound: f64,
    heuristic: bool,
}

impl Default for CoeffSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl CoeffSeries {
    pub fn new(lo: i64, coeffs: Vec<C64>, tail_bound: f64) -> Self {
        assert!(tail_bound >= 0.0 && !tail_bound.is_nan(), "tail bound must be nonnegative");
        let mut s = Self { lo, coeffs, tail_bound, heuristic: false };
        s.canonicalize();
        s
    }

    pub fn zero() -> Self {
        Self { lo: 0, coeffs: Vec::new(), tail_bound: 0.0, heuristic: false }
    }

    pub fn one() -> Self {
        Self::monomial(0, C64::new(1.0, 0.0))
    }

    /// `c·zⁿ`.
    pub fn monomial(n: i64, c: C64) -> Self {
        Self::new(n, vec![c], 0.0)
    }

    /// Laurent polynomial from `(index, coefficient)` pairs; repeated indices add.
    pub fn from_terms(terms: &[(i64, C64)]) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for &(n, c) in terms {
            coeffs[(n - lo) as usize] += c;
        }
        Self::new(lo, coeffs, 0.0)
    }

    pub fn with_heuristic(mut self, heuristic: bool) -> Self {
        self.heuristic = heuristic;
        self
    }

    pub fn with_tail_bound(mut self, tail_bound: f64) -> Self {
        assert!(tail_bound >= 0.0);
        self.tail_bound = tail_bound;
        self
    }

    fn canonicalize(&mut self) {
        let zero = C64::new(0.0, 0.0);
        let first = self.coeffs.iter().position(|c| *c != zero);
        match first {
            None => {
                self.coeffs.clear();
                self.lo = 0;
            }
            Some(f) => {
                let last = self.coeffs.iter().rposition(|c| *c != zero).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..f);
                self.lo += f as i64;
            }
        }
    }

    /// Index of the first stored coefficient.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Index of the last stored coefficient (`lo - 1` for the zero series).
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_heuristic(&self) -> bool {
        self.heuristic
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored coefficient at index `n` (zero outside the window).
    pub fn get(&self, n: i64) -> C64 {
        if n < self.lo || n > self.hi() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(n - self.lo) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lo + i as i64, *c))
    }

    /// `ℓ¹` norm of the stored coefficients.
    pub fn l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `ℓ²` norm of the stored coefficients.
    pub fn l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Coefficients on `[lo, hi]` as a dense vector (zeros outside the stored window).
    pub fn window(&self, lo: i64, hi: i64) -> Vec<C64> {
        (lo..=hi).map(|n| self.get(n)).collect()
    }

    /// Multiplication by `zᵏ`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        if !s.coeffs.is_empty() {
            s.lo += k;
        }
        s
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut s = Self::new(self.lo, self.coeffs.iter().map(|x| x * c).collect(), self.tail_bound * c.norm());
        s.heuristic = self.heuristic;
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, C64::new(-1.0, 0.0))
    }

    fn combine(&self, other: &Self, sign: C64) -> Self {
        if self.is_zero() && other.is_zero() {
            let mut z = Self::zero();
            z.tail_bound = self.tail_bound + other.tail_bound;
            z.heuristic = self.heuristic || other.heuristic;
            return z;
        }
        let (lo, hi) = if self.is_zero() {
            (other.lo, other.hi())
        } else if other.is_zero() {
            (self.lo, self.hi())
        } else {
            (self.lo.min(other.lo), self.hi().max(other.hi()))
        };
        let coeffs = (lo..=hi).map(|n| self.get(n) + sign * other.get(n)).collect();
        let mut s = Self::new(lo, coeffs, self.tail_bound + other.tail_bound);
        s.heuristic = self.heuristic || other.heuristic;
        s
    }

    /// Restrict to the index window `[lo, hi]`; the `ℓ¹` mass of every dropped
    /// coefficient is moved into the tail bound.
    pub fn truncate(&self, lo: i64, hi: i64) -> Self {
        let mut dropped = 0.0;
        let mut kept = Vec::new();
        let mut kept_lo = lo;
        let mut started = false;
        for (n, c) in self.iter() {
            if n < lo || n > hi {
                dropped += c.norm();
            } else {
                if !started {
                    kept_lo = n;
                    started = true;
                }
                kept.push(c);
            }
        }
        let mut s = Self::new(kept_lo, kept, self.tail_bound + dropped);
        s.heuristic = self.heuristic;
        s
    }

    /// Drop fringe coefficients whose cumulative `ℓ¹` mass stays below
    /// `rel · max(1, ‖f‖₁)`, moving that mass into the tail bound.
    pub fn compress(&self, rel: f64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let budget = rel * self.l1().max(1.0);
        let mut spent = 0.0;
        let mut first = 0usize;
        let mut last = self.coeffs.len() - 1;
        // Peel whichever end is currently smaller.
        while first < last {
            let a = self.coeffs[first].norm();
            let b = self.coeffs[last].norm();
            let (m, from_front) = if a <= b { (a, true) } else { (b, false) };
            if spent + m > budget {
                break;
            }
            spent += m;
            if from_front {
                first += 1;
            } else {
                last -= 1;
            }
        }
        let mut s = Self::new(
            self.lo + first as i64,
            self.coeffs[first..=last].to_vec(),
            self.tail_bound + spent,
        );
        s.heuristic = self.heuristic;
        s
    }

    /// Exact convolution of the stored windows.
    ///
    /// The tail bound follows `ℓ¹` submultiplicativity:
    /// `‖a‖₁·t_b + ‖b‖₁·t_a + t_a·t_b`.
    pub fn multiply(&self, other: &Self) -> Self {
        let tail = self.l1() * other.tail_bound
            + other.l1() * self.tail_bound
            + self.tail_bound * other.tail_bound;
        let heuristic = self.heuristic || other.heuristic;
        if self.is_zero() || other.is_zero() {
            let mut z = Self::zero();
            z.tail_bound = tail;
            z.heuristic = heuristic;
            return z;
        }
        let (a, b) = (&self.coeffs, &other.coeffs);
        let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
        // Sum each output in order of the first factor's index, so the result
        // only depends on which operand is which through that ordering.
        for (i, x) in a.iter().enumerate() {
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let mut s = Self::new(self.lo + other.lo, out, tail);
        s.heuristic = heuristic;
        s
    }

    /// Product truncated to `[lo, hi]` with the dropped mass added to the tail.
    pub fn multiply_truncated(&self, other: &Self, lo: i64, hi: i64) -> Self {
        self.multiply(other).truncate(lo, hi)
    }

    pub fn transform(&self, kind: TransformKind) -> Self {
        let mut rev: Vec<C64> = self.coeffs.iter().rev().copied().collect();
        let (lo, coeffs) = match kind {
            TransformKind::FlipJ => (-self.hi() - 1, rev),
            TransformKind::Breve => (-self.hi(), rev),
            TransformKind::Star => (self.lo, self.coeffs.iter().map(|c| c.conj()).collect()),
            TransformKind::Bar => {
                rev.iter_mut().for_each(|c| *c = c.conj());
                (-self.hi(), rev)
            }
            TransformKind::VAnti => {
                rev.iter_mut().for_each(|c| *c = c.conj());
                (-self.hi() - 1, rev)
            }
        };
        let mut s = Self::new(lo, coeffs, self.tail_bound);
        s.heuristic = self.heuristic;
        s
    }

    pub fn project(&self, part: Projection) -> Self {
        let mut s = match part {
            Projection::PAnalytic => Self::new(
                self.lo.max(0),
                self.iter().filter(|(n, _)| *n >= 0).map(|(_, c)| c).collect(),
                self.tail_bound,
            ),
            Projection::QCoanalytic => Self::new(
                self.lo,
                self.iter().filter(|(n, _)| *n < 0).map(|(_, c)| c).collect(),
                self.tail_bound,
            ),
        };
        s.heuristic = self.heuristic;
        s
    }

    /// `⟨a, b⟩ = Σ â(n)·conj b̂(n)` over the shared window, with the crude
    /// bound `t_a·(‖b‖₁ + t_b) + t_b·‖a‖₁` on the contribution of the tails.
    pub fn inner_product(&self, other: &Self) -> (C64, f64) {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        let mut acc = C64::new(0.0, 0.0);
        if lo <= hi && !self.is_zero() && !other.is_zero() {
            let a = &self.coeffs[(lo - self.lo) as usize..=(hi - self.lo) as usize];
            let b = &other.coeffs[(lo - other.lo) as usize..=(hi - other.lo) as usize];
            for (x, y) in a.iter().zip(b) {
                acc += x * y.conj();
            }
        }
        let err = self.tail_bound * (other.l1() + other.tail_bound) + other.tail_bound * self.l1();
        (acc, err)
    }

    /// Exact equality of canonical coefficient maps (tails ignored).
    pub fn same_coefficients(&self, other: &Self) -> bool {
        self.lo == other.lo && self.coeffs == other.coeffs
    }

    /// Largest coefficient deviation over the union of both windows.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).map(|n| (self.get(n) - other.get(n)).norm()).fold(0.0, f64::max)
    }

    /// Text record: a `tail_bound <real>` header followed by one
    /// `index re im` line per stored coefficient, in index order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tail_bound {:e}", self.tail_bound).unwrap();
        for (n, c) in self.iter() {
            writeln!(out, "{} {:e} {:e}", n, c.re, c.im).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Invalid("empty series record".into()))?;
        let tail = header
            .strip_prefix("tail_bound")
            .and_then(|t| t.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Invalid(format!("bad series header `{header}`")))?;
        let mut terms = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                [n, re, im] => n
                    .parse::<i64>()
                    .ok()
                    .zip(re.parse::<f64>().ok())
                    .zip(im.parse::<f64>().ok())
                    .map(|((n, re), im)| (n, C64::new(re, im))),
                _ => None,
            };
            terms.push(parsed.ok_or_else(|| Error::Invalid(format!("bad series line `{line}`")))?);
        }
        if tail < 0.0 {
            return Err(Error::Invalid("negative tail bound".into()));
        }
        Ok(Self::from_terms(&terms).with_tail_bound(tail))
    }
}
