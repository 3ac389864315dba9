//! Experiment implementations. Each one checks that the config fits its regime before
//! drawing anything, then returns rows and sample sets.

mod clt;
mod compare;
mod heavy;
mod hull_suite;
mod identity;
mod sb_props;
mod stable;
mod tail;
mod theta;

use std::collections::BTreeMap;

use majorant_core::levy::LevyModel;

use crate::config::{ExperimentConfig, ExperimentTag};
use crate::error::{ConfigError, RunError};
use crate::report::Row;
use crate::runner::Replicator;

#[derive(Debug, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub samples: BTreeMap<String, Vec<f64>>,
    pub pairs: Vec<(String, String)>,
}

impl Outcome {
    fn add_pair(&mut self, a: String, x: Vec<f64>, b: String, y: Vec<f64>) {
        self.pairs.push((a.clone(), b.clone()));
        self.samples.insert(a, x);
        self.samples.insert(b, y);
    }
}

/// A validated plan: everything that can be rejected is rejected here.
pub enum Plan {
    SbProps(sb_props::Plan),
    Identity(identity::Plan),
    Clt(clt::Plan),
    Stable(stable::Plan),
    Heavy(heavy::Plan),
    Tail(tail::Plan),
    Compare(compare::Plan),
    Theta(theta::Plan),
    HullSuite(hull_suite::Plan),
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    Ok(match config.experiment {
        ExperimentTag::SbProps => Plan::SbProps(sb_props::plan(config)?),
        ExperimentTag::VerifyIdentity => Plan::Identity(identity::plan(config)?),
        ExperimentTag::VerifyClt => Plan::Clt(clt::plan(config)?),
        ExperimentTag::VerifyStable => Plan::Stable(stable::plan(config)?),
        ExperimentTag::VerifyHeavy => Plan::Heavy(heavy::plan(config)?),
        ExperimentTag::TailIndex => Plan::Tail(tail::plan(config)?),
        ExperimentTag::CompareLength => Plan::Compare(compare::plan(config)?),
        ExperimentTag::ThetaScan => Plan::Theta(theta::plan(config)?),
        ExperimentTag::HullSuite => Plan::HullSuite(hull_suite::plan(config)?),
    })
}

pub fn execute(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    match plan {
        Plan::SbProps(p) => sb_props::run(p, rep),
        Plan::Identity(p) => identity::run(p, rep),
        Plan::Clt(p) => clt::run(p, rep),
        Plan::Stable(p) => stable::run(p, rep),
        Plan::Heavy(p) => heavy::run(p, rep),
        Plan::Tail(p) => tail::run(p, rep),
        Plan::Compare(p) => compare::run(p, rep),
        Plan::Theta(p) => theta::run(p, rep),
        Plan::HullSuite(p) => hull_suite::run(p, rep),
    }
}

fn regime(config: &ExperimentConfig, reason: impl Into<String>) -> ConfigError {
    ConfigError::Regime { experiment: config.experiment.as_str(), reason: reason.into() }
}

fn unknown_mode(config: &ExperimentConfig) -> ConfigError {
    ConfigError::UnknownMode {
        experiment: config.experiment.as_str(),
        mode: config.mode.clone().unwrap_or_default(),
    }
}

fn require_grid(config: &ExperimentConfig) -> Result<Vec<f64>, ConfigError> {
    let grid = config.horizons();
    if grid.is_empty() {
        return Err(ConfigError::Invalid("this experiment needs a T grid".into()));
    }
    Ok(grid)
}

/// Zero mean and finite positive variance; returns the variance.
fn zero_mean_finite_variance(config: &ExperimentConfig, model: &LevyModel) -> Result<f64, ConfigError> {
    if model.mean() != Some(0.0) {
        return Err(regime(config, "needs a zero-mean model"));
    }
    let var = model.variance();
    if !(var.is_finite() && var > 0.0) {
        return Err(regime(config, "needs finite positive variance"));
    }
    Ok(var)
}

/// Skewness of the stable law the model is attracted to.
fn limit_beta(model: &LevyModel) -> f64 {
    match *model {
        LevyModel::StableProcess { beta, .. } => beta,
        LevyModel::CompoundPoissonDrift { jump: majorant_core::levy::JumpDist::Pareto { p_up, .. }, .. } => {
            2.0 * p_up - 1.0
        }
        _ => 0.0,
    }
}

fn column(draws: &[Vec<f64>], k: usize) -> Vec<f64> {
    draws.iter().map(|d| d[k]).collect()
}

fn t_label(t: f64) -> String {
    format!("T={t}")
}

/// Interquartile range over 1.349, the standard deviation for normal data.
fn robust_scale(samples: &[f64]) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let q = |p: f64| {
        let pos = p * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    };
    (q(0.75) - q(0.25)) / 1.349
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}
