//! Fluctuation scales of the hut, majorant and tent lengths.

use majorant_core::levy::LevyModel;
use majorant_core::sbrep::{sample_quintuple, DEFAULT_CUTOFF};

use super::{column, require_grid, robust_scale, strictly_increasing, t_label, unknown_mode, zero_mean_finite_variance, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::{RowSink, Verdict};
use crate::runner::Replicator;

const TAG: &str = "compare-length";

pub struct Plan {
    model: LevyModel,
    grid: Vec<f64>,
    reps: usize,
    cutoff: f64,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    if config.mode_or("finite-variance") != "finite-variance" {
        return Err(unknown_mode(config));
    }
    let model = config.levy_model()?;
    zero_mean_finite_variance(config, &model)?;
    let grid = require_grid(config)?;
    if grid.len() < 2 || grid[0] <= 1.0 {
        return Err(ConfigError::Invalid("compare-length needs at least two horizons above 1".into()));
    }
    Ok(Plan { model, grid, reps: config.reps, cutoff: config.cutoff.unwrap_or(DEFAULT_CUTOFF) })
}

/// The predicted growth of each scale: 1, √log T and √T.
pub fn predicted(kind: &str, t: f64) -> f64 {
    match kind {
        "hut" => 1.0,
        "majorant" => t.ln().sqrt(),
        _ => t.sqrt(),
    }
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    let mut over_hut = Vec::new();
    let mut over_majorant = Vec::new();
    for &t in &plan.grid {
        let label = t_label(t);
        let draws = rep.run(&format!("lengths/{label}"), plan.reps, |rng, _| {
            let q = sample_quintuple(&plan.model, t, plan.cutoff, rng)?;
            Ok(vec![q.hut_length(), q.upsilon, q.tent_length()])
        })?;
        let scales: Vec<f64> = (0..3).map(|k| robust_scale(&column(&draws, k))).collect();
        for (k, kind) in ["hut", "majorant", "tent"].iter().enumerate() {
            sink.info(Some(t), format!("scale_{kind}"), scales[k], None);
            sink.info(Some(t), format!("scale_{kind}_normalized"), scales[k] / predicted(kind, t), None);
        }
        over_hut.push(scales[1] / scales[0]);
        over_majorant.push(scales[2] / scales[1]);
        for (k, kind) in ["hut", "majorant", "tent"].iter().enumerate() {
            out.samples.insert(format!("{kind}/{label}"), column(&draws, k));
        }
    }
    for (name, ratios) in [("majorant_over_hut", &over_hut), ("tent_over_majorant", &over_majorant)] {
        for (&t, &r) in plan.grid.iter().zip(ratios.iter()) {
            sink.info(Some(t), name, r, None);
        }
        sink.push(
            None,
            format!("{name}_increasing"),
            ratios.windows(2).filter(|w| w[1] > w[0]).count() as f64,
            None,
            None,
            format!("all {} steps increase", ratios.len() - 1),
            Verdict::from_bool(strictly_increasing(ratios)),
        );
    }
    out.rows = sink.rows;
    Ok(out)
}
