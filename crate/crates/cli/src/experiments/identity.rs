//! The stick-breaking sampler against the hull of an exactly simulated path.

use majorant_core::hull::{concave_majorant, shape_stats};
use majorant_core::levy::{sample_path, LevyModel, Resolution};
use majorant_core::sbrep::{sample_quintuple, DEFAULT_CUTOFF};
use majorant_core::stats::ks_two_sample;

use super::{column, regime, require_grid, t_label, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::RowSink;
use crate::runner::Replicator;

const TAG: &str = "verify-identity";
const LEVEL: f64 = 0.01;
const STATS: [&str; 4] = ["upsilon", "final", "sup", "gamma"];

pub struct Plan {
    model: LevyModel,
    grid: Vec<f64>,
    reps: usize,
    cutoff: f64,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    let model = config.levy_model()?;
    if !matches!(model, LevyModel::CompoundPoissonDrift { .. }) {
        return Err(regime(config, "exact paths need a compound Poisson model"));
    }
    if config.mode.is_some() {
        return Err(super::unknown_mode(config));
    }
    let cutoff = config.cutoff.unwrap_or(DEFAULT_CUTOFF);
    if !(cutoff > 0.0 && cutoff <= 1.0) {
        return Err(ConfigError::Invalid("cutoff must lie in (0, 1]".into()));
    }
    Ok(Plan { model, grid: require_grid(config)?, reps: config.reps, cutoff })
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    for &t in &plan.grid {
        let label = t_label(t);
        let path_draws = rep.run(&format!("path/{label}"), plan.reps, |rng, _| {
            let path = sample_path(&plan.model, t, Resolution::ExactJumps, rng)?;
            let s = shape_stats(&concave_majorant(&path)?, t)?;
            Ok(vec![s.upsilon, s.final_value, s.sup, s.gamma])
        })?;
        let sb_draws = rep.run(&format!("sbrep/{label}"), plan.reps, |rng, _| {
            let q = sample_quintuple(&plan.model, t, plan.cutoff, rng)?;
            Ok(vec![q.upsilon, q.final_value, q.sup, q.gamma])
        })?;
        for (k, name) in STATS.iter().enumerate() {
            let x = column(&path_draws, k);
            let y = column(&sb_draws, k);
            sink.ks(Some(t), format!("ks_{name}"), &ks_two_sample(&x, &y)?, LEVEL);
            out.add_pair(format!("{name}/path/{label}"), x, format!("{name}/sbrep/{label}"), y);
        }
    }
    out.rows = sink.rows;
    Ok(out)
}
