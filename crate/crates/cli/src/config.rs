//! Experiment configuration files.
//!
//! A config is TOML (or JSON when the file ends in `.json`). Top-level keys:
//!
//! | key          | type            | meaning                                             |
//! |--------------|-----------------|-----------------------------------------------------|
//! | `experiment` | string          | experiment tag, see [`ExperimentTag`]               |
//! | `mode`       | string          | variant within the experiment (optional)            |
//! | `seed`       | integer         | master seed (u64)                                   |
//! | `reps`       | integer         | replications per horizon, at least 100              |
//! | `t_grid`     | array of floats | horizons, strictly increasing                       |
//! | `log_t_grid` | array of floats | alternative to `t_grid`: horizons `e^v`             |
//! | `cutoff`     | float           | stick-breaking stop rule `T L_N < cutoff`           |
//! | `eps`        | float           | series truncation for limit-law samplers            |
//! | `workers`    | integer         | worker threads (optional, default all cores)        |
//! | `out`        | string          | output directory (optional)                         |
//! | `[model]`    | table           | the Lévy model, see [`ModelSpec`]                   |
//!
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use majorant_core::levy::{JumpDist, LevyModel};
use serde::Deserialize;

use crate::error::ConfigError;

pub const MIN_REPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentTag {
    SbProps,
    VerifyIdentity,
    VerifyClt,
    VerifyStable,
    VerifyHeavy,
    TailIndex,
    CompareLength,
    ThetaScan,
    HullSuite,
}

impl ExperimentTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentTag::SbProps => "sb-props",
            ExperimentTag::VerifyIdentity => "verify-identity",
            ExperimentTag::VerifyClt => "verify-clt",
            ExperimentTag::VerifyStable => "verify-stable",
            ExperimentTag::VerifyHeavy => "verify-heavy",
            ExperimentTag::TailIndex => "tail-index",
            ExperimentTag::CompareLength => "compare-length",
            ExperimentTag::ThetaScan => "theta-scan",
            ExperimentTag::HullSuite => "hull-suite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum JumpSpec {
    TwoPoint { p_up: f64, up: f64, down: f64 },
    Gaussian { mean: f64, sd: f64 },
    Pareto { tail_index: f64, scale: f64, p_up: f64 },
    PointMass { x: f64 },
    LogCorrectedPareto,
}

impl From<JumpSpec> for JumpDist {
    fn from(j: JumpSpec) -> Self {
        match j {
            JumpSpec::TwoPoint { p_up, up, down } => JumpDist::TwoPoint { p_up, up, down },
            JumpSpec::Gaussian { mean, sd } => JumpDist::Gaussian { mean, sd },
            JumpSpec::Pareto { tail_index, scale, p_up } => JumpDist::Pareto { tail_index, scale, p_up },
            JumpSpec::PointMass { x } => JumpDist::PointMass { x },
            JumpSpec::LogCorrectedPareto => JumpDist::LogCorrectedPareto,
        }
    }
}

/// `kind = "brownian" | "compound-poisson" | "stable"`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Brownian {
        sigma: f64,
        #[serde(default)]
        mu: f64,
    },
    CompoundPoisson {
        rate: f64,
        jump: JumpSpec,
        #[serde(default)]
        mu: f64,
    },
    Stable {
        alpha: f64,
        #[serde(default)]
        beta: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        mu: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl From<ModelSpec> for LevyModel {
    fn from(m: ModelSpec) -> Self {
        match m {
            ModelSpec::Brownian { sigma, mu } => LevyModel::BrownianDrift { sigma, mu },
            ModelSpec::CompoundPoisson { rate, jump, mu } => {
                LevyModel::CompoundPoissonDrift { rate, jump: jump.into(), mu }
            }
            ModelSpec::Stable { alpha, beta, scale, mu } => LevyModel::StableProcess { alpha, beta, scale, mu },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentTag,
    #[serde(default)]
    pub mode: Option<String>,
    pub seed: u64,
    pub reps: usize,
    #[serde(default)]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub log_t_grid: Vec<f64>,
    #[serde(default)]
    pub cutoff: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub model: Option<ModelSpec>,
}

impl ExperimentConfig {
    /// Parses TOML, or JSON when `path` ends in `.json`.
    pub fn from_str_for(path: &Path, text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
        };
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<(Self, String), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e.to_string()))?;
        Ok((Self::from_str_for(path, &text)?, text))
    }

    /// Structural checks that do not depend on the experiment.
    pub fn check(&self) -> Result<(), ConfigError> {
        if self.reps < MIN_REPS {
            return Err(ConfigError::TooFewReps(self.reps));
        }
        if !self.t_grid.is_empty() && !self.log_t_grid.is_empty() {
            return Err(ConfigError::Invalid("give either t_grid or log_t_grid, not both".into()));
        }
        let grid = self.horizons();
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ConfigError::Invalid("T grid must be strictly increasing".into()));
        }
        if grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(ConfigError::Invalid("T grid entries must be positive and finite".into()));
        }
        if self.workers == Some(0) {
            return Err(ConfigError::Invalid("workers must be at least 1".into()));
        }
        if let Some(model) = self.model {
            LevyModel::from(model).validate().map_err(ConfigError::Model)?;
        }
        Ok(())
    }

    pub fn horizons(&self) -> Vec<f64> {
        if self.log_t_grid.is_empty() {
            self.t_grid.clone()
        } else {
            self.log_t_grid.iter().map(|v| v.exp()).collect()
        }
    }

    pub fn levy_model(&self) -> Result<LevyModel, ConfigError> {
        self.model.map(LevyModel::from).ok_or(ConfigError::MissingModel(self.experiment.as_str()))
    }

    pub fn mode_or<'a>(&'a self, default: &'a str) -> &'a str {
        self.mode.as_deref().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::from_str_for(Path::new("x.toml"), text)
    }

    #[test]
    fn toml_round_trip() {
        let c = parse(
            r#"
experiment = "verify-identity"
seed = 7
reps = 1000
t_grid = [50.0]
[model]
kind = "compound-poisson"
rate = 1.0
mu = 0.2
jump = { kind = "gaussian", mean = 0.0, sd = 1.0 }
"#,
        )
        .unwrap();
        assert_eq!(c.experiment, ExperimentTag::VerifyIdentity);
        assert_eq!(
            c.levy_model().unwrap(),
            LevyModel::CompoundPoissonDrift { rate: 1.0, jump: JumpDist::Gaussian { mean: 0.0, sd: 1.0 }, mu: 0.2 }
        );
    }

    #[test]
    fn json_accepted() {
        let c = ExperimentConfig::from_str_for(
            Path::new("x.json"),
            r#"{"experiment":"sb-props","seed":1,"reps":100,"log_t_grid":[2,4]}"#,
        )
        .unwrap();
        assert!((c.horizons()[1] - 4f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(parse("experiment = \"nope\"\nseed = 1\nreps = 100"), Err(ConfigError::Parse(_))));
        assert!(matches!(
            parse("experiment = \"sb-props\"\nseed = 1\nreps = 10"),
            Err(ConfigError::TooFewReps(10))
        ));
        assert!(matches!(
            parse("experiment = \"sb-props\"\nseed = 1\nreps = 100\nt_grid = [2.0, 1.0]"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(parse("experiment = \"sb-props\"\nseed = 1\nreps = 100\ncolour = 3"), Err(ConfigError::Parse(_))));
        assert!(matches!(
            parse("experiment = \"sb-props\"\nseed = 1\nreps = 100\n[model]\nkind = \"brownian\"\nsigma = -1.0"),
            Err(ConfigError::Model(_))
        ));
    }
}
