//! Stick-breaking counts and the compensation formula.

use majorant_core::stats::{variance_std_error, Accumulator};
use majorant_core::stickbreak::{sample_sticks, TestFunction};

use super::{require_grid, t_label, unknown_mode, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::RowSink;
use crate::runner::Replicator;

const TAG: &str = "sb-props";
const K_SE: f64 = 3.0;

pub enum Mode {
    /// `τ(T)` mean and variance against `log T`, and `E[τ + 1 - |𝔊_T|] = 1`.
    Tau,
    /// `E Σ f(t_n) = ∫_0^T f(t)/t dt` for three test functions.
    Compensation,
}

pub struct Plan {
    mode: Mode,
    grid: Vec<f64>,
    reps: usize,
    cutoff: f64,
}

pub fn catalog() -> [(&'static str, TestFunction); 3] {
    [
        ("sqrt_big", TestFunction::IndicatorPower { p: 0.5 }),
        ("log_big", TestFunction::IndicatorLog),
        ("interval_0.1_2", TestFunction::Interval { lo: 0.1, hi: 2.0 }),
    ]
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    let mode = match config.mode_or("tau") {
        "tau" => Mode::Tau,
        "compensation" => Mode::Compensation,
        _ => return Err(unknown_mode(config)),
    };
    let grid = require_grid(config)?;
    if grid[0] <= 1.0 {
        return Err(ConfigError::Invalid("sb-props needs T > 1".into()));
    }
    let cutoff = config.cutoff.unwrap_or(1.0);
    if !(cutoff > 0.0 && cutoff <= 1.0) {
        return Err(ConfigError::Invalid("counting sticks needs a cutoff in (0, 1]".into()));
    }
    Ok(Plan { mode, grid, reps: config.reps, cutoff })
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let mut out = Outcome::default();
    for &t in &plan.grid {
        let label = t_label(t);
        match plan.mode {
            Mode::Tau => {
                let draws = rep.run(&format!("tau/{label}"), plan.reps, |rng, _| {
                    let sticks = sample_sticks(t, plan.cutoff, rng)?;
                    Ok((sticks.tau()? as f64, sticks.big_stick_count()? as f64))
                })?;
                let tau: Vec<f64> = draws.iter().map(|d| d.0).collect();
                let excess: Accumulator = draws.iter().map(|d| d.0 + 1.0 - d.1).collect();
                let acc: Accumulator = tau.iter().copied().collect();
                let log_t = t.ln();
                sink.within_se(Some(t), "tau_mean", acc.mean(), acc.std_error(), log_t, K_SE);
                sink.within_se(Some(t), "tau_var", acc.variance(), variance_std_error(&tau), log_t, K_SE);
                sink.within_se(Some(t), "tau_plus_one_minus_big", excess.mean(), excess.std_error(), 1.0, K_SE);
                out.samples.insert(format!("tau/{label}"), tau);
            }
            Mode::Compensation => {
                for (name, f) in catalog() {
                    let cutoff = f.cutoff().min(plan.cutoff);
                    let draws = rep.run(&format!("{name}/{label}"), plan.reps, |rng, _| {
                        Ok(f.stick_sum(&sample_sticks(t, cutoff, rng)?))
                    })?;
                    let acc: Accumulator = draws.iter().copied().collect();
                    sink.within_se(Some(t), name, acc.mean(), acc.std_error(), f.target(t), K_SE);
                }
            }
        }
    }
    out.rows = sink.rows;
    Ok(out)
}
