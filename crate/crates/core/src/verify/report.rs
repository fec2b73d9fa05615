use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    /// Every input expansion carries a certified tail bound.
    Certified,
    /// Some input used an uncertified expansion (singular atoms).
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Residual inside the band `(threshold, 10·threshold)`.
    Inconclusive,
}

/// What the residual is expected to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// Residual at most the threshold.
    Vanish,
    /// Residual at least ten times the threshold.
    Separate,
    /// Rank constant over the upper half of the windows (residual = rank spread).
    Plateau,
    /// Rank strictly increasing (residual = smallest rank increment).
    Growing,
}

/// Ratio between the separation level and the vanishing threshold.
pub const SEPARATION_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// The identity or criterion being checked, as a formula.
    pub anchor: String,
    /// NaN when the check could not be evaluated; written as JSON `null`.
    #[serde(deserialize_with = "nullable_f64")]
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub verdict: Verdict,
    pub expect: Expect,
    /// Inclusive index ranges of the trusted block.
    pub trusted_window: Vec<[i64; 2]>,
    pub inputs_digest: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub components: Vec<Component>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

pub fn verdict_for(expect: Expect, residual: f64, threshold: f64) -> Verdict {
    if !residual.is_finite() {
        return Verdict::Fail;
    }
    match expect {
        Expect::Vanish | Expect::Separate => {
            let (low, high) = (residual <= threshold, residual >= SEPARATION_FACTOR * threshold);
            match (expect, low, high) {
                (Expect::Vanish, true, _) | (Expect::Separate, _, true) => Verdict::Pass,
                (Expect::Vanish, _, true) | (Expect::Separate, true, _) => Verdict::Fail,
                _ => Verdict::Inconclusive,
            }
        }
        Expect::Plateau => {
            if residual <= threshold {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Expect::Growing => {
            if residual > threshold {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    }
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>, anchor: impl Into<String>, expect: Expect, residual: f64, threshold: f64) -> Self {
        let verdict = verdict_for(expect, residual, threshold);
        Self {
            check_id: check_id.into(),
            anchor: anchor.into(),
            residual,
            threshold,
            passed: verdict == Verdict::Pass,
            verdict,
            expect,
            trusted_window: Vec::new(),
            inputs_digest: String::new(),
            status: CheckStatus::Certified,
            seed: None,
            components: Vec::new(),
            note: None,
        }
    }

    /// A report for a check that could not be evaluated.
    pub fn errored(check_id: impl Into<String>, anchor: impl Into<String>, message: String) -> Self {
        let mut r = Self::new(check_id, anchor, Expect::Vanish, f64::NAN, 0.0);
        r.note = Some(message);
        r
    }

    pub fn heuristic(mut self, heuristic: bool) -> Self {
        self.status = if heuristic { CheckStatus::Heuristic } else { CheckStatus::Certified };
        self
    }

    pub fn window(mut self, ranges: &[[i64; 2]]) -> Self {
        self.trusted_window = ranges.to_vec();
        self
    }

    pub fn digest(mut self, parts: &[&str]) -> Self {
        self.inputs_digest = inputs_digest(parts);
        self
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn components(mut self, components: Vec<(String, f64)>) -> Self {
        self.components = components.into_iter().map(|(name, residual)| Component { name, residual }).collect();
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_id(mut self, check_id: impl Into<String>) -> Self {
        self.check_id = check_id.into();
        self
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        let tag = match (self.verdict, self.status) {
            (Verdict::Pass, _) => "PASS",
            (_, CheckStatus::Heuristic) => "WARN",
            (Verdict::Inconclusive, _) => "INCONCLUSIVE",
            (Verdict::Fail, _) => "FAIL",
        };
        let status = match self.status {
            CheckStatus::Certified => "certified",
            CheckStatus::Heuristic => "heuristic",
        };
        format!(
            "{tag:<12} {:<44} residual={:.3e} threshold={:.1e} expect={:?} {status}",
            self.check_id, self.residual, self.threshold, self.expect
        )
    }
}

/// SHA-256 hex digest of the canonical input description.
pub fn inputs_digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errored_reports_round_trip_through_json() {
        let r = CheckReport::errored("x", "a", "boom".into());
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"residual\":null"));
        let back: CheckReport = serde_json::from_str(&json).unwrap();
        assert!(back.residual.is_nan());
        assert_eq!(back.verdict, Verdict::Fail);
    }

    #[test]
    fn vanish_and_separate_bands() {
        assert_eq!(verdict_for(Expect::Vanish, 1e-9, 1e-8), Verdict::Pass);
        assert_eq!(verdict_for(Expect::Vanish, 5e-8, 1e-8), Verdict::Inconclusive);
        assert_eq!(verdict_for(Expect::Vanish, 1e-6, 1e-8), Verdict::Fail);
        assert_eq!(verdict_for(Expect::Separate, 1e-6, 1e-8), Verdict::Pass);
        assert_eq!(verdict_for(Expect::Separate, 5e-8, 1e-8), Verdict::Inconclusive);
        assert_eq!(verdict_for(Expect::Separate, 1e-9, 1e-8), Verdict::Fail);
        assert_eq!(verdict_for(Expect::Vanish, f64::NAN, 1e-8), Verdict::Fail);
    }

    #[test]
    fn passed_tracks_verdict() {
        let r = CheckReport::new("x", "a", Expect::Vanish, 0.0, 1e-8);
        assert!(r.passed);
        let r = CheckReport::new("x", "a", Expect::Vanish, 1.0, 1e-8);
        assert!(!r.passed);
    }

    #[test]
    fn digest_is_stable_hex() {
        let d = inputs_digest(&["rto", "phi"]);
        assert_eq!(d.len(), 64);
        assert_eq!(d, inputs_digest(&["rto", "phi"]));
        assert_ne!(d, inputs_digest(&["rtophi"]));
    }
}
