use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, String),
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("replication count {0} is below the minimum of 100")]
    TooFewReps(usize),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid model: {0}")]
    Model(majorant_core::Error),
    #[error("experiment {0} needs a [model] table")]
    MissingModel(&'static str),
    #[error("model does not fit experiment {experiment}: {reason}")]
    Regime { experiment: &'static str, reason: String },
    #[error("unknown mode {mode:?} for experiment {experiment}")]
    UnknownMode { experiment: &'static str, mode: String },
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("sampling failed: {0}")]
    Core(#[from] majorant_core::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
    #[error("report is missing {0}")]
    ReportContent(String),
    #[error("malformed report: {0}")]
    ReportFormat(String),
}
