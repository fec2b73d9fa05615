use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;

pub const SEED_ENV: &str = "HARDYOPS_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Settings after merging defaults, the config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub window: usize,
    pub internal_expansion_factor: usize,
    pub tol_identity: f64,
    pub tol_rank: f64,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    /// Unset means each command's natural format: JSON reports, CSV studies.
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            window: 200,
            internal_expansion_factor: 4,
            tol_identity: 1e-8,
            tol_rank: 1e-8,
            seed: 0,
            output_dir: None,
            format: None,
        }
    }
}

/// The flat config file: every key optional, unknown keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    window: Option<usize>,
    internal_expansion_factor: Option<usize>,
    tol_identity: Option<f64>,
    tol_rank: Option<f64>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Flat TOML file with RunConfig keys; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Window N: infinite bases are cut to N + 1 vectors.
    #[arg(short = 'N', long = "window")]
    pub window: Option<usize>,
    /// Internal expansion order as a multiple of N + 1.
    #[arg(long)]
    pub expansion_factor: Option<usize>,
    #[arg(long)]
    pub tol_identity: Option<f64>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    /// Seed for random instances; falls back to the config file, then HARDYOPS_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for output files; without it machine output goes to stdout.
    #[arg(short = 'o', long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let env_seed = match std::env::var(SEED_ENV) {
            Ok(v) => Some(v.trim().parse::<u64>().map_err(|e| CliError::Input(format!("invalid {SEED_ENV} '{v}': {e}")))?),
            Err(_) => None,
        };
        let d = RunConfig::default();
        let cfg = RunConfig {
            window: self.window.or(file.window).unwrap_or(d.window),
            internal_expansion_factor: self.expansion_factor.or(file.internal_expansion_factor).unwrap_or(d.internal_expansion_factor),
            tol_identity: self.tol_identity.or(file.tol_identity).unwrap_or(d.tol_identity),
            tol_rank: self.tol_rank.or(file.tol_rank).unwrap_or(d.tol_rank),
            seed: self.seed.or(file.seed).or(env_seed).unwrap_or(d.seed),
            output_dir: self.output_dir.clone().or(file.output_dir),
            format: self.format.or(file.format),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let in_range = |t: f64| t > 0.0 && t < 1e-2;
        if self.window < 4 {
            return Err(CliError::Input(format!("window N = {} is below 4", self.window)));
        }
        if self.internal_expansion_factor < 2 {
            return Err(CliError::Input("expansion factor must be at least 2".into()));
        }
        if !in_range(self.tol_identity) || !in_range(self.tol_rank) {
            return Err(CliError::Input("tolerances must lie in (0, 1e-2)".into()));
        }
        Ok(())
    }

    pub fn verify(&self) -> hardyops::verify::VerifyConfig {
        hardyops::verify::VerifyConfig {
            window: self.window,
            expansion_factor: self.internal_expansion_factor,
            tol_identity: self.tol_identity,
            tol_rank: self.tol_rank,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("hardyops-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "window = 40\ntol_rank = 1e-6\nformat = \"csv\"\n").unwrap();
        let args = ConfigArgs { config: Some(path.clone()), window: Some(60), ..Default::default() };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.window, 60);
        assert_eq!(cfg.tol_rank, 1e-6);
        assert_eq!(cfg.format, Some(Format::Csv));
        std::fs::write(&path, "windw = 40\n").unwrap();
        assert!(matches!(args.resolve(), Err(CliError::Input(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        let bad = [
            RunConfig { window: 3, ..Default::default() },
            RunConfig { internal_expansion_factor: 1, ..Default::default() },
            RunConfig { tol_identity: 0.0, ..Default::default() },
            RunConfig { tol_rank: 0.5, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }
}
