//! Experiment runner for the majorant toolkit: parses configs, replicates seeded Monte
//! Carlo draws in parallel and writes CSV/JSON reports and plot data.

pub mod config;
pub mod error;
mod experiments;
pub mod plot;
pub mod report;
pub mod runner;

use std::path::PathBuf;

use sha2::{Digest, Sha256};

pub use config::ExperimentConfig;
pub use error::{ConfigError, RunError};
pub use report::RunReport;

/// Command-line overrides for a config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Validates the config against its experiment, runs it and, when an output directory
/// is known, writes the report there.
pub fn run(config: &ExperimentConfig, source: &str, options: &RunOptions) -> Result<RunReport, RunError> {
    let plan = experiments::plan(config)?;
    let seed = options.seed.unwrap_or(config.seed);
    let workers = options.workers.or(config.workers);
    if workers == Some(0) {
        return Err(ConfigError::Invalid("workers must be at least 1".into()).into());
    }
    let tag = config.experiment.as_str();
    let replicator = runner::Replicator::new(seed, tag, workers)?;
    let outcome = experiments::execute(&plan, &replicator)?;
    let report = RunReport {
        schema_version: report::SCHEMA_VERSION,
        experiment: tag.to_string(),
        mode: config.mode.clone(),
        rows: outcome.rows,
        pairs: outcome.pairs,
        samples: outcome.samples,
        provenance: report::Provenance {
            seed,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: format!("{:x}", Sha256::digest(source.as_bytes())),
            workers: replicator.workers(),
        },
    };
    if let Some(dir) = options.out.as_ref().or(config.out.as_ref()) {
        report.write(dir)?;
    }
    Ok(report)
}
