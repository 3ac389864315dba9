//! Finite-variance central limit behaviour of the length.

use majorant_core::levy::LevyModel;
use majorant_core::sbrep::{normalize_finite_variance, sample_quintuple, Centering, DEFAULT_CUTOFF};
use majorant_core::stats::{ks_one_sample, normal_cdf, pearson, variance_std_error, Accumulator};

use super::{column, require_grid, strictly_decreasing, t_label, unknown_mode, zero_mean_finite_variance, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::{RowSink, Verdict};
use crate::runner::Replicator;

const TAG: &str = "verify-clt";
const FINAL_D: f64 = 0.1;
const VARIANCE_TOL: f64 = 0.15;
const CORR_LIMIT: f64 = 0.1;
const IDENTITY_TOL: f64 = 1e-9;

pub enum Mode {
    /// Deterministically centred length against `N(0, 3σ⁴/4)` along the grid.
    Trend,
    /// Asymptotic independence and the identity linking the two centrings, at the
    /// largest horizon.
    Structure,
}

pub struct Plan {
    mode: Mode,
    model: LevyModel,
    var: f64,
    grid: Vec<f64>,
    reps: usize,
    cutoff: f64,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    let mode = match config.mode_or("trend") {
        "trend" => Mode::Trend,
        "structure" => Mode::Structure,
        _ => return Err(unknown_mode(config)),
    };
    let model = config.levy_model()?;
    let var = zero_mean_finite_variance(config, &model)?;
    let grid = require_grid(config)?;
    if grid[0] <= std::f64::consts::E {
        return Err(ConfigError::Invalid("verify-clt needs T > e".into()));
    }
    Ok(Plan { mode, model, var, grid, reps: config.reps, cutoff: config.cutoff.unwrap_or(DEFAULT_CUTOFF) })
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    match plan.mode {
        Mode::Trend => trend(plan, rep),
        Mode::Structure => structure(plan, rep),
    }
}

fn trend(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    let sd = (0.75f64).sqrt() * plan.var;
    let mut distances = Vec::new();
    let mut last_var = (0.0, 0.0);
    for &t in &plan.grid {
        let label = t_label(t);
        let draws = rep.run(&format!("length/{label}"), plan.reps, |rng, _| {
            let q = sample_quintuple(&plan.model, t, plan.cutoff, rng)?;
            Ok(normalize_finite_variance(&q, &plan.model, Centering::Deterministic)?.coords[0])
        })?;
        let ks = ks_one_sample(&draws, |x| normal_cdf(x / sd))?;
        let acc: Accumulator = draws.iter().copied().collect();
        sink.push(Some(t), "ks_vs_normal", ks.statistic, Some(ks.statistic), Some(ks.p_value), "", Verdict::Info);
        sink.info(Some(t), "mean", acc.mean(), Some(acc.std_error()));
        sink.info(Some(t), "variance", acc.variance(), Some(variance_std_error(&draws)));
        distances.push(ks.statistic);
        last_var = (acc.variance(), variance_std_error(&draws));
        out.samples.insert(format!("length/{label}"), draws);
    }
    let last = *distances.last().unwrap();
    let target = 0.75 * plan.var * plan.var;
    sink.push(
        None,
        "ks_d_strictly_decreasing",
        distances.windows(2).filter(|w| w[1] < w[0]).count() as f64,
        None,
        None,
        format!("all {} steps decrease", distances.len() - 1),
        Verdict::from_bool(strictly_decreasing(&distances)),
    );
    sink.push(plan.grid.last().copied(), "ks_d_final", last, Some(last), None, format!("D<{FINAL_D}"), Verdict::from_bool(last < FINAL_D));
    let rel = (last_var.0 / target - 1.0).abs();
    sink.push(
        plan.grid.last().copied(),
        "variance_final",
        last_var.0,
        Some(last_var.1),
        None,
        format!("within {VARIANCE_TOL} of {target}"),
        Verdict::from_bool(rel <= VARIANCE_TOL),
    );
    out.rows = sink.rows;
    Ok(out)
}

fn structure(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    let t = *plan.grid.last().unwrap();
    let draws = rep.run(&format!("coords/{}", t_label(t)), plan.reps, |rng, _| {
        let q = sample_quintuple(&plan.model, t, plan.cutoff, rng)?;
        let mut c = normalize_finite_variance(&q, &plan.model, Centering::StochasticH)?.coords;
        c.push(normalize_finite_variance(&q, &plan.model, Centering::Deterministic)?.coords[0]);
        Ok(c)
    })?;
    let fluct = column(&draws, 0);
    for (k, name) in [(2, "sup"), (3, "final"), (4, "gamma")] {
        let r = pearson(&fluct, &column(&draws, k));
        sink.push(Some(t), format!("corr_length_{name}"), r, None, None, format!("|r|<{CORR_LIMIT}"), Verdict::from_bool(r.abs() < CORR_LIMIT));
    }
    let deterministic = column(&draws, 5);
    let rebuilt: Vec<f64> = draws.iter().map(|c| c[0] + 0.5 * plan.var * c[1]).collect();
    let worst = deterministic
        .iter()
        .zip(&rebuilt)
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .fold(0.0, f64::max);
    sink.push(Some(t), "centring_identity_max_dev", worst, None, None, format!("<={IDENTITY_TOL}"), Verdict::from_bool(worst <= IDENTITY_TOL));
    let r = pearson(&deterministic, &rebuilt);
    sink.push(Some(t), "centring_identity_corr", r, None, None, "|r-1|<=1e-12", Verdict::from_bool((r - 1.0).abs() <= 1e-12));
    out.samples.insert("length_fluctuation".into(), fluct);
    out.rows = sink.rows;
    Ok(out)
}
