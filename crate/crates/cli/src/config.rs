//! Experiment configuration: one JSON document drives every subcommand.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use tmlab_core::SchemeKind;

/// Exit codes promised by the CLI contract.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const RESOLUTION: i32 = 3;
    pub const GATE: i32 = 4;
}

/// Scheme selector as spelled in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    Power,
    Case1,
    Case2,
}

impl SchemeChoice {
    pub fn kind(self) -> SchemeKind {
        match self {
            SchemeChoice::Power => SchemeKind::PowerBasis,
            SchemeChoice::Case1 => SchemeKind::Case1,
            SchemeChoice::Case2 => SchemeKind::Case2,
        }
    }
}

/// Full experiment configuration.
///
/// Core fields apply to every subcommand; the optional block carries
/// subcommand-specific knobs (ignored elsewhere). The whole document
/// round-trips losslessly through JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: SchemeChoice,
    pub j_max: u32,
    pub grid_log2_size: u32,
    pub p_values: Vec<f64>,
    pub n_trials: u32,
    pub master_seed: u64,
    /// Corpus manifest path; `None` uses the built-in default corpus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus_manifest: Option<PathBuf>,
    pub output_dir: PathBuf,

    /// `basis-eval`, `gram`: how many basis functions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_count: Option<u32>,
    /// `basis-eval`: number of boundary sample points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_points: Option<u32>,
    /// `counterexample`: ascending degree ladder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
    /// `lemma-bounds`: samples per dyadic cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_cell: Option<u32>,
    /// `khintchine`: largest coefficient sequence length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_max_len: Option<u32>,
    /// `khintchine`: number of random sequences per exponent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_alpha: Option<u32>,
    /// `nonsep`: number of complete levels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
    /// `gram`: fail (exit 4) when max |G - I| exceeds this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram_gate: Option<f64>,
    /// `norms`: also write per-member signal and tree files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_artifacts: Option<bool>,
}

/// Error carrying the promised exit code and a one-line message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError {
            code: exit_code::CONFIG,
            message: msg.into(),
        }
    }

    pub fn resolution(msg: impl Into<String>) -> Self {
        CliError {
            code: exit_code::RESOLUTION,
            message: msg.into(),
        }
    }

    pub fn gate(msg: impl Into<String>) -> Self {
        CliError {
            code: exit_code::GATE,
            message: msg.into(),
        }
    }

    pub fn from_core(err: tmlab_core::Error, context: &str) -> Self {
        let code = match err {
            tmlab_core::Error::Resolution | tmlab_core::Error::InvalidGrid => {
                exit_code::RESOLUTION
            }
            _ => exit_code::CONFIG,
        };
        CliError {
            code,
            message: format!("{context}: {err}"),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("cannot parse config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Structural checks shared by every subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid_log2_size < self.j_max + 6 {
            return Err(CliError::resolution(format!(
                "grid_log2_size {} too coarse for j_max {}: need at least {}",
                self.grid_log2_size,
                self.j_max,
                self.j_max + 6
            )));
        }
        if self.p_values.is_empty() {
            return Err(CliError::config("p_values must not be empty"));
        }
        for &p in &self.p_values {
            if !(p.is_finite() && p > 1.0) {
                return Err(CliError::config(format!(
                    "exponent {p} outside the supported range (1, inf)"
                )));
            }
        }
        if let Some(degrees) = &self.degrees {
            if degrees.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::config("degrees must be strictly ascending"));
            }
        }
        Ok(())
    }
}
