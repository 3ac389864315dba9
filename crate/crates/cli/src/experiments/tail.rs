//! Tail of the squared-increment series `Q` in the zero-mean stable limit.

use majorant_core::limitlaws::{perpetuity_tail_constant, sample_limit_stable, sample_perpetuity_step, DEFAULT_EPS};
use majorant_core::stats::{hill, ks_two_sample, tail_slope};

use super::{limit_beta, regime, unknown_mode, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::{RowSink, Verdict};
use crate::runner::Replicator;

const TAG: &str = "tail-index";
const LEVEL: f64 = 0.01;
const SLOPE_TOL: f64 = 0.1;
pub const WINDOW: (f64, f64) = (0.99, 0.9999);

pub struct Plan {
    alpha: f64,
    beta: f64,
    reps: usize,
    eps: f64,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    if config.mode_or("series") != "series" {
        return Err(unknown_mode(config));
    }
    let model = config.levy_model()?;
    let alpha = model.attraction_index().map_err(|e| regime(config, e.to_string()))?;
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(regime(config, "needs stable index in (1, 2)"));
    }
    Ok(Plan { alpha, beta: limit_beta(&model), reps: config.reps, eps: config.eps.unwrap_or(DEFAULT_EPS) })
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    let q = rep.run("series", plan.reps, |rng, _| Ok(sample_limit_stable(plan.alpha, plan.beta, rng, plan.eps)?.coords[0]))?;
    let rebuilt = rep.run("perpetuity", plan.reps, |rng, _| sample_perpetuity_step(plan.alpha, plan.beta, rng, plan.eps))?;

    let target = -plan.alpha / 2.0;
    let fit = tail_slope(&q, WINDOW.0, WINDOW.1)?;
    sink.push(
        None,
        "tail_slope",
        fit.slope,
        Some(fit.slope_se),
        None,
        format!("within {SLOPE_TOL} of {target}"),
        Verdict::from_bool((fit.slope - target).abs() <= SLOPE_TOL),
    );
    let k = ((1.0 - WINDOW.0) * q.len() as f64) as usize;
    sink.info(None, "hill_index", -hill(&q, k)?, None);
    sink.info(None, "tail_constant_ratio", perpetuity_tail_constant(plan.alpha)?, None);
    sink.ks(None, "ks_perpetuity", &ks_two_sample(&q, &rebuilt)?, LEVEL);
    out.add_pair("q/series".into(), q, "q/perpetuity".into(), rebuilt);
    out.rows = sink.rows;
    Ok(out)
}
