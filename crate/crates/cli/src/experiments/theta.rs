//! The centring correction `Θ(T)` by its two integral forms.

use majorant_core::levy::LevyModel;

use super::{regime, require_grid, strictly_decreasing, unknown_mode, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::{RowSink, Verdict};
use crate::runner::Replicator;

const TAG: &str = "theta-scan";
const FORM_TOL: f64 = 1e-8;

pub struct Plan {
    model: LevyModel,
    grid: Vec<f64>,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    if config.mode.is_some() {
        return Err(unknown_mode(config));
    }
    let model = config.levy_model()?;
    let grid = require_grid(config)?;
    if grid[0] <= 1.0 {
        return Err(ConfigError::Invalid("theta-scan needs T > 1".into()));
    }
    model.theta_forms(grid[0]).map_err(|e| regime(config, e.to_string()))?;
    Ok(Plan { model, grid })
}

pub fn run(plan: &Plan, _rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut ratios = Vec::new();
    for &t in &plan.grid {
        let (direct, layered) = plan.model.theta_forms(t)?;
        let gap = (direct - layered).abs();
        let tol = FORM_TOL * direct.abs();
        sink.push(Some(t), "theta", direct, Some(gap), None, format!("forms agree to {FORM_TOL}"), Verdict::from_bool(gap <= tol));
        sink.info(Some(t), "theta_layered", layered, None);
        let ratio = direct / t.ln();
        sink.info(Some(t), "theta_over_log_t", ratio, None);
        ratios.push(ratio);
    }
    sink.push(
        None,
        "theta_over_log_t_decreasing",
        ratios.windows(2).filter(|w| w[1] < w[0]).count() as f64,
        None,
        None,
        format!("all {} steps decrease", ratios.len() - 1),
        Verdict::from_bool(strictly_decreasing(&ratios)),
    );
    Ok(Outcome { rows: sink.rows, ..Outcome::default() })
}
