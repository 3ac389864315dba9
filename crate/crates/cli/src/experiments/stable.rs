//! Stable limits for zero mean (index in (1, 2)) and for nonzero mean.

use majorant_core::levy::LevyModel;
use majorant_core::limitlaws::{sample_limit_stable, sample_limit_drift, DEFAULT_EPS};
use majorant_core::sbrep::{normalize_stable, normalize_drift, sample_quintuple, DriftCase, DEFAULT_CUTOFF};
use majorant_core::stats::{ks_two_sample, ols, Ecdf};

use super::{column, limit_beta, regime, require_grid, t_label, unknown_mode, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::{RowSink, Verdict};
use crate::runner::Replicator;

const TAG: &str = "verify-stable";
const LEVEL: f64 = 0.01;
const SLOPE_TOL: f64 = 0.05;
const GAP_Q99: f64 = 0.05;

pub enum Mode {
    ZeroMean { alpha: f64, beta: f64 },
    Drift { alpha: f64, case: DriftCase, mu: f64, limit_scale: f64 },
}

pub struct Plan {
    mode: Mode,
    model: LevyModel,
    grid: Vec<f64>,
    reps: usize,
    cutoff: f64,
    eps: f64,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    let model = config.levy_model()?;
    let alpha = model.attraction_index().map_err(|e| regime(config, e.to_string()))?;
    let mode = match config.mode_or("zero-mean") {
        "zero-mean" => {
            if !(alpha > 1.0 && alpha < 2.0) || model.mean() != Some(0.0) {
                return Err(regime(config, "needs zero mean and stable index in (1, 2)"));
            }
            Mode::ZeroMean { alpha, beta: limit_beta(&model) }
        }
        "drift" => {
            let mu = match model.mean() {
                Some(m) if m != 0.0 => m,
                _ => return Err(regime(config, "needs a finite nonzero mean")),
            };
            if !(alpha > 1.0 && alpha <= 2.0) {
                return Err(regime(config, "needs stable index in (1, 2]"));
            }
            let case = if mu > 0.0 { DriftCase::A } else { DriftCase::B };
            Mode::Drift { alpha, case, mu, limit_scale: limit_scale(&model) }
        }
        _ => return Err(unknown_mode(config)),
    };
    Ok(Plan {
        mode,
        model,
        grid: require_grid(config)?,
        reps: config.reps,
        cutoff: config.cutoff.unwrap_or(DEFAULT_CUTOFF),
        eps: config.eps.unwrap_or(DEFAULT_EPS),
    })
}

/// Scale of the stable limit of `(X_T - μT)/a_T` relative to the standard law.
fn limit_scale(model: &LevyModel) -> f64 {
    match *model {
        LevyModel::StableProcess { .. } => 1.0,
        _ if model.variance().is_finite() => (0.5 * model.variance()).sqrt(),
        _ => 1.0,
    }
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    for &t in &plan.grid {
        let label = t_label(t);
        match plan.mode {
            Mode::ZeroMean { alpha, beta } => {
                let sb = rep.run(&format!("sbrep/{label}"), plan.reps, |rng, _| {
                    Ok(normalize_stable(&sample_quintuple(&plan.model, t, plan.cutoff, rng)?, &plan.model)?.coords)
                })?;
                let lim = rep.run(&format!("limit/{label}"), plan.reps, |rng, _| {
                    Ok(sample_limit_stable(alpha, beta, rng, plan.eps)?.coords)
                })?;
                for (k, name) in ["length", "sup", "final", "gamma"].iter().enumerate() {
                    let x = column(&sb, k);
                    let y = column(&lim, k);
                    sink.ks(Some(t), format!("ks_{name}"), &ks_two_sample(&x, &y)?, LEVEL);
                    out.add_pair(format!("{name}/sbrep/{label}"), x, format!("{name}/limit/{label}"), y);
                }
            }
            Mode::Drift { alpha, case, mu, limit_scale } => {
                let sb = rep.run(&format!("sbrep/{label}"), plan.reps, |rng, _| {
                    Ok(normalize_drift(&sample_quintuple(&plan.model, t, plan.cutoff, rng)?, &plan.model, case)?.coords)
                })?;
                let lim = rep.run(&format!("limit/{label}"), plan.reps, |rng, _| {
                    Ok(sample_limit_drift(alpha, limit_beta(&plan.model), limit_scale, mu, case, rng)?.coords)
                })?;
                let c = mu / (1.0 + mu * mu).sqrt();
                let (length, end_k) = (column(&sb, 0), 2);
                let end = column(&sb, end_k);
                let fit = ols(&end, &length);
                sink.push(
                    Some(t),
                    "slope_length_on_final",
                    fit.slope,
                    Some(fit.slope_se),
                    None,
                    format!("within {SLOPE_TOL} of {c}"),
                    Verdict::from_bool((fit.slope / c - 1.0).abs() <= SLOPE_TOL),
                );
                let ratios: Vec<f64> = length.iter().zip(&end).map(|(l, e)| l / e).collect();
                sink.info(Some(t), "median_length_over_final", Ecdf::new(&ratios)?.quantile(0.5), None);
                if case == DriftCase::A {
                    let gaps: Vec<f64> = sb.iter().map(|d| (d[1] - d[2]).abs()).collect();
                    let q99 = Ecdf::new(&gaps)?.quantile(0.99);
                    sink.push(Some(t), "sup_final_gap_q99", q99, None, None, format!("<{GAP_Q99}"), Verdict::from_bool(q99 < GAP_Q99));
                }
                let y = column(&lim, end_k);
                sink.ks(Some(t), "ks_final", &ks_two_sample(&end, &y)?, LEVEL);
                out.add_pair(format!("final/sbrep/{label}"), end, format!("final/limit/{label}"), y);
            }
        }
    }
    out.rows = sink.rows;
    Ok(out)
}
