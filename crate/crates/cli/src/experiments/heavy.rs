//! Stable index below 1: the length scales like the path itself.

use majorant_core::levy::LevyModel;
use majorant_core::limitlaws::{sample_limit_small_index, DEFAULT_EPS};
use majorant_core::sbrep::{normalize_small_index, sample_quintuple, DEFAULT_CUTOFF};
use majorant_core::stats::ks_two_sample;

use super::{column, limit_beta, regime, require_grid, t_label, unknown_mode, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::{RowSink, Verdict};
use crate::runner::Replicator;

const TAG: &str = "verify-heavy";
const LEVEL: f64 = 0.01;
const SANDWICH_TOL: f64 = 1e-9;

pub struct Plan {
    model: LevyModel,
    alpha: f64,
    grid: Vec<f64>,
    reps: usize,
    cutoff: f64,
    eps: f64,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    if config.mode_or("small-index") != "small-index" {
        return Err(unknown_mode(config));
    }
    let model = config.levy_model()?;
    let alpha = model.attraction_index().map_err(|e| regime(config, e.to_string()))?;
    if !(alpha < 1.0) {
        return Err(regime(config, "needs stable index below 1"));
    }
    Ok(Plan {
        model,
        alpha,
        grid: require_grid(config)?,
        reps: config.reps,
        cutoff: config.cutoff.unwrap_or(DEFAULT_CUTOFF),
        eps: config.eps.unwrap_or(DEFAULT_EPS),
    })
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    for &t in &plan.grid {
        let label = t_label(t);
        let sb = rep.run(&format!("sbrep/{label}"), plan.reps, |rng, _| {
            let q = sample_quintuple(&plan.model, t, plan.cutoff, rng)?;
            // 2 sup - final ≤ Υ ≤ T + 2 sup - final, on the raw scale
            let floor = 2.0 * q.sup - q.final_value;
            let slack = SANDWICH_TOL * (t + floor.abs());
            let held = floor <= q.upsilon + slack && q.upsilon <= t + floor + slack;
            let mut c = normalize_small_index(&q, &plan.model)?.coords;
            c.push(if held { 0.0 } else { 1.0 });
            Ok(c)
        })?;
        let lim = rep.run(&format!("limit/{label}"), plan.reps, |rng, _| {
            Ok(sample_limit_small_index(plan.alpha, limit_beta(&plan.model), rng, plan.eps)?.coords)
        })?;
        let broken: f64 = column(&sb, 8).iter().sum();
        sink.push(Some(t), "sandwich_violations", broken, None, None, "=0", Verdict::from_bool(broken == 0.0));
        for (k, name) in [(0, "length"), (1, "sup"), (2, "final"), (3, "gamma"), (5, "inf")] {
            let x = column(&sb, k);
            let y = column(&lim, k);
            let ks = ks_two_sample(&x, &y)?;
            if k == 0 {
                sink.ks(Some(t), "ks_length", &ks, LEVEL);
            } else {
                sink.push(Some(t), format!("ks_{name}"), ks.statistic, Some(ks.statistic), Some(ks.p_value), "", Verdict::Info);
            }
            out.add_pair(format!("{name}/sbrep/{label}"), x, format!("{name}/limit/{label}"), y);
        }
    }
    out.rows = sink.rows;
    Ok(out)
}
