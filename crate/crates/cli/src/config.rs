//! Experiment configuration for `datafarm run`.
//!
//! ```json
//! {
//!   "factors": "factors.json",
//!   "n": 4000,
//!   "seed": 7,
//!   "runner": "navsim",
//!   "chunk_size": 100,
//!   "criterion": { "metric": "fuel_consumed", "epsilon": 0.005, "floor": 1e-9 },
//!   "output_dir": "out"
//! }
//! ```
//!
//! `runner` is a built-in name (`navsim`) or `{ "command": [program, args…] }`
//! for the subprocess protocol. Relative paths resolve against the config
//! file's directory. `design` may name an existing design CSV instead of
//! generating one from `n` and `seed`.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RunnerConfig {
    Builtin(String),
    Command { command: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionConfig {
    pub metric: String,
    pub epsilon: f64,
    #[serde(default = "default_floor")]
    pub floor: f64,
}

fn default_floor() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub factors: PathBuf,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub design: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    pub runner: RunnerConfig,
    pub chunk_size: usize,
    #[serde(default)]
    pub criterion: Option<CriterionConfig>,
    pub output_dir: PathBuf,
    /// Lognormal fuel noise for the `navsim` runner.
    #[serde(default)]
    pub noise_sigma: f64,
}

impl ExperimentConfig {
    /// Parses, resolves relative paths against `base` and validates.
    pub fn from_json(text: &str, base: &Path) -> Result<ExperimentConfig, String> {
        let mut c: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| format!("invalid experiment config: {e}"))?;
        let resolve = |p: &Path| {
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };
        c.factors = resolve(&c.factors);
        c.design = c.design.as_deref().map(resolve);
        c.output_dir = resolve(&c.output_dir);
        c.validate()?;
        Ok(c)
    }

    pub fn from_path(path: &Path) -> Result<ExperimentConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base)
    }

    fn validate(&self) -> Result<(), String> {
        if self.chunk_size == 0 {
            return Err("chunk_size must be >= 1".into());
        }
        if !self.factors.is_file() {
            return Err(format!("factor file {} not found", self.factors.display()));
        }
        match (&self.design, self.n) {
            (Some(d), _) if !d.is_file() => return Err(format!("design file {} not found", d.display())),
            (None, None) => return Err("config needs either `n` or `design`".into()),
            (None, Some(0)) => return Err("n must be >= 1".into()),
            _ => {}
        }
        if let Some(c) = &self.criterion {
            if !(c.epsilon > 0.0 && c.epsilon.is_finite()) {
                return Err(format!("criterion epsilon must be > 0, got {}", c.epsilon));
            }
        }
        match &self.runner {
            RunnerConfig::Builtin(name) if name != "navsim" => {
                Err(format!("unknown built-in runner `{name}` (available: navsim)"))
            }
            RunnerConfig::Command { command } if command.is_empty() => Err("runner command is empty".into()),
            _ => Ok(()),
        }
    }
}
