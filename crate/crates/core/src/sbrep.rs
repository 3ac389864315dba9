//! Exact-in-law shape statistics of the concave majorant via stick-breaking.
//!
//! Given sticks `t_n = T ℓ_n` and independent increments `ξ_n ~ X_{t_n}`, the faces of
//! the concave majorant of `X` on `[0, T]` are the pairs `(t_n, ξ_n)` sorted by slope, so
//! the length, face count, final value, supremum and its time are series over `n`. The
//! sampler keeps the sticks with `T L_n ≥ cutoff` and replaces the rest by one increment
//! over the remaining length `T L_N`.
//!
//! The count `h_prime` is the number of sticks with `t_n ≥ 1`. It is not the number of
//! maximal faces of length at least 1 when faces can share a slope (compound Poisson with
//! drift), only close to it in `L¹`.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::levy::{increment_unchecked, LevyModel};
use crate::stickbreak::{sample_sticks, StickBreak};

pub const DEFAULT_CUTOFF: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuintupleSample {
    pub upsilon: f64,
    /// Number of sticks with `t_n ≥ 1`.
    pub h_prime: usize,
    pub final_value: f64,
    pub sup: f64,
    pub gamma: f64,
    /// Infimum of the convex minorant, `Σ ξ_n⁻` with sign. Same sticks and increments,
    /// so only its marginal law is exact.
    pub inf: f64,
    pub gamma_inf: f64,
    /// Bound on the expected absolute error that the aggregated remainder introduces
    /// in `upsilon`, `sup` and `gamma`.
    pub truncation_error_bound: f64,
    pub horizon: f64,
    pub cutoff: f64,
}

/// Sticks and increments behind one draw, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub sticks: StickBreak,
    /// `ξ_1, …, ξ_N`, aligned with the sticks.
    pub xis: Vec<f64>,
    /// Increment over the remaining length `T L_N`.
    pub remainder_xi: f64,
}

pub fn sample_quintuple<R: Rng + ?Sized>(
    model: &LevyModel,
    horizon: f64,
    cutoff: f64,
    rng: &mut R,
) -> Result<QuintupleSample> {
    sample_quintuple_traced(model, horizon, cutoff, rng).map(|(q, _)| q)
}

pub fn sample_quintuple_traced<R: Rng + ?Sized>(
    model: &LevyModel,
    horizon: f64,
    cutoff: f64,
    rng: &mut R,
) -> Result<(QuintupleSample, Trace)> {
    model.validate()?;
    if cutoff > 1.0 {
        return Err(Error::InsufficientTruncation(cutoff));
    }
    let sticks = sample_sticks(horizon, cutoff, rng)?;
    let rest = horizon * sticks.last_remainder();
    // left to right in time: the remainder [0, T L_N] first, then [T L_n, T L_{n-1}]
    let remainder_xi = increment_unchecked(model, rest, rng)?;
    let mut xis = alloc::vec![0.0; sticks.len()];
    for (slot, t) in xis.iter_mut().zip(sticks.scaled()).rev() {
        *slot = increment_unchecked(model, t, rng)?;
    }

    let mut q = QuintupleSample {
        upsilon: 0.0,
        h_prime: 0,
        final_value: 0.0,
        sup: 0.0,
        gamma: 0.0,
        inf: 0.0,
        gamma_inf: 0.0,
        truncation_error_bound: remainder_bound(model, rest),
        horizon,
        cutoff,
    };
    let mut below_or_level = 0.0;
    let mut above_or_level = 0.0;
    let faces = sticks.scaled().zip(xis.iter().copied()).chain(core::iter::once((rest, remainder_xi)));
    for (t, xi) in faces {
        q.add_face(t, xi);
        if xi <= 0.0 {
            below_or_level += t;
        }
        if xi >= 0.0 {
            above_or_level += t;
        }
    }
    q.h_prime = sticks.scaled().filter(|&t| t >= 1.0).count();
    q.gamma = crate::hull::split_time(q.gamma, below_or_level, horizon);
    q.gamma_inf = crate::hull::split_time(q.gamma_inf, above_or_level, horizon);
    Ok((q, Trace { sticks, xis, remainder_xi }))
}

impl QuintupleSample {
    fn add_face(&mut self, t: f64, xi: f64) {
        self.upsilon += t.hypot(xi);
        self.final_value += xi;
        if xi > 0.0 {
            self.sup += xi;
            self.gamma += t;
        } else if xi < 0.0 {
            self.inf += xi;
            self.gamma_inf += t;
        }
    }

    pub fn hut_length(&self) -> f64 {
        crate::hull::hut_length(self.horizon, self.sup, self.gamma, self.final_value)
    }

    pub fn tent_length(&self) -> f64 {
        crate::hull::tent_length(self.horizon, self.sup, self.final_value)
    }
}

/// `r + ∫_0^r E|X_s| / s ds`: bounds the expected change in length, supremum and its
/// time when the remainder of length `r` is split into its own sticks.
pub fn remainder_bound(model: &LevyModel, r: f64) -> f64 {
    let integral = match *model {
        LevyModel::BrownianDrift { sigma, mu } => {
            mu.abs() * r + 2.0 * sigma * (2.0 * r / core::f64::consts::PI).sqrt()
        }
        LevyModel::CompoundPoissonDrift { rate, jump, mu } => (mu.abs() + rate * jump.mean_abs()) * r,
        LevyModel::StableProcess { alpha, .. } => {
            // E|X_s| / s ~ s^{1/alpha - 1}, integrable for alpha > 1
            let at_one = model.abs_moment_bound(1.0) - model.drift().abs();
            model.drift().abs() * r + at_one * alpha * r.powf(1.0 / alpha)
        }
    };
    r + integral
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// Centre the length with the stick count `h_prime`.
    StochasticH,
    /// Centre the length with `log T`.
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Finite variance, zero mean: 5 coordinates.
    FiniteVariance,
    /// Length with deterministic centring: 1 coordinate.
    FiniteVarianceLength,
    /// Zero mean, stable index in (1, 2): 4 coordinates.
    StableZeroMean,
    /// Positive mean: 3 coordinates.
    PositiveDrift,
    /// Negative mean: 4 coordinates.
    NegativeDrift,
    /// Stable index below 1, majorant and minorant: 8 coordinates.
    SmallIndex,
}

impl Regime {
    pub fn arity(&self) -> usize {
        match self {
            Regime::FiniteVariance => 5,
            Regime::FiniteVarianceLength => 1,
            Regime::StableZeroMean => 4,
            Regime::PositiveDrift => 3,
            Regime::NegativeDrift => 4,
            Regime::SmallIndex => 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedStat {
    pub regime: Regime,
    pub coords: Vec<f64>,
    pub horizon: f64,
    pub model: LevyModel,
}

fn zero_mean_finite_variance(model: &LevyModel) -> Result<f64> {
    match model.mean() {
        Some(m) if m == 0.0 => {}
        _ => return Err(Error::WrongRegime("needs zero mean")),
    }
    let var = model.variance();
    if !(var.is_finite() && var > 0.0) {
        return Err(Error::WrongRegime("needs finite positive variance"));
    }
    Ok(var)
}

/// Finite-variance normalization.
///
/// `StochasticH` gives `((Υ - T - σ²H'/2 + Θ(T))/√log T, (H' - log T)/√log T, sup/√T,
/// final/√T, γ/T)`. `Deterministic` gives the single coordinate
/// `(Υ - T - σ² log T / 2 + Θ(T))/√log T`.
pub fn normalize_finite_variance(q: &QuintupleSample, model: &LevyModel, centering: Centering) -> Result<NormalizedStat> {
    let var = zero_mean_finite_variance(model)?;
    let t = q.horizon;
    if !(t > core::f64::consts::E) {
        return Err(Error::ParameterDomain { name: "T", value: t });
    }
    let log_t = t.ln();
    let root_log = log_t.sqrt();
    let theta = model.theta(t)?;
    let (regime, coords) = match centering {
        Centering::StochasticH => {
            let h = q.h_prime as f64;
            (
                Regime::FiniteVariance,
                alloc::vec![
                    (q.upsilon - t - 0.5 * var * h + theta) / root_log,
                    (h - log_t) / root_log,
                    q.sup / t.sqrt(),
                    q.final_value / t.sqrt(),
                    q.gamma / t,
                ],
            )
        }
        Centering::Deterministic => (
            Regime::FiniteVarianceLength,
            alloc::vec![(q.upsilon - t - 0.5 * var * log_t + theta) / root_log],
        ),
    };
    Ok(NormalizedStat { regime, coords, horizon: t, model: *model })
}

/// `((T/a_T²)(Υ - T), sup/a_T, final/a_T, γ/T)` for zero-mean models attracted to a
/// stable law of index in (1, 2).
pub fn normalize_stable(q: &QuintupleSample, model: &LevyModel) -> Result<NormalizedStat> {
    let index = model.attraction_index()?;
    if !(index > 1.0 && index < 2.0) || model.mean() != Some(0.0) {
        return Err(Error::WrongRegime("needs zero mean and stable index in (1, 2)"));
    }
    let norming = model.norming(q.horizon)?;
    Ok(NormalizedStat {
        regime: Regime::StableZeroMean,
        coords: stable_coords(q, norming),
        horizon: q.horizon,
        model: *model,
    })
}

/// The coordinates of [`normalize_stable`] for an explicit norming `a_T`.
pub fn stable_coords(q: &QuintupleSample, norming: f64) -> Vec<f64> {
    let t = q.horizon;
    alloc::vec![
        t / (norming * norming) * (q.upsilon - t),
        q.sup / norming,
        q.final_value / norming,
        q.gamma / t,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftCase {
    /// Positive mean.
    A,
    /// Negative mean.
    B,
}

/// Normalization for nonzero mean `μ` and stable index in (1, 2].
///
/// Case A: `((Υ - √(1+μ²)T)/a_T, (sup - μT)/a_T, (final - μT)/a_T)`.
/// Case B: `((Υ - √(1+μ²)T)/a_T, sup, (final - μT)/a_T, γ)`.
pub fn normalize_drift(q: &QuintupleSample, model: &LevyModel, case: DriftCase) -> Result<NormalizedStat> {
    let index = model.attraction_index()?;
    if !(index > 1.0 && index <= 2.0) {
        return Err(Error::WrongRegime("needs stable index in (1, 2]"));
    }
    let mu = model.mean().ok_or(Error::WrongRegime("needs a finite mean"))?;
    match case {
        DriftCase::A if mu > 0.0 => {}
        DriftCase::B if mu < 0.0 => {}
        _ => return Err(Error::CaseMismatch),
    }
    let t = q.horizon;
    let a = model.norming(t)?;
    let length = (q.upsilon - (1.0 + mu * mu).sqrt() * t) / a;
    let end = (q.final_value - mu * t) / a;
    let (regime, coords) = match case {
        DriftCase::A => (Regime::PositiveDrift, alloc::vec![length, (q.sup - mu * t) / a, end]),
        DriftCase::B => (Regime::NegativeDrift, alloc::vec![length, q.sup, end, q.gamma]),
    };
    Ok(NormalizedStat { regime, coords, horizon: t, model: *model })
}

/// `(Υ/a_T, sup/a_T, final/a_T, γ/T, Υ/a_T, inf/a_T, final/a_T, γ_inf/T)` for models
/// attracted to a stable law of index below 1. The minorant length is taken to be the
/// majorant length, which it equals in law.
pub fn normalize_small_index(q: &QuintupleSample, model: &LevyModel) -> Result<NormalizedStat> {
    let index = model.attraction_index()?;
    if !(index < 1.0) {
        return Err(Error::WrongRegime("needs stable index below 1"));
    }
    let t = q.horizon;
    let a = model.norming(t)?;
    Ok(NormalizedStat {
        regime: Regime::SmallIndex,
        coords: alloc::vec![
            q.upsilon / a,
            q.sup / a,
            q.final_value / a,
            q.gamma / t,
            q.upsilon / a,
            q.inf / a,
            q.final_value / a,
            q.gamma_inf / t,
        ],
        horizon: t,
        model: *model,
    })
}

/// `σ² - ∫_{|x| ≥ κ√t} x² ν(dx)`.
pub fn truncated_variance(model: &LevyModel, t: f64, kappa: f64) -> f64 {
    let var = model.variance();
    match *model {
        LevyModel::CompoundPoissonDrift { rate, jump, .. } => {
            var - rate * jump.tail_second_moment(kappa * t.sqrt())
        }
        _ => var,
    }
}

/// `Σ_T = (2√log T)⁻¹ Σ_{t_n ≥ 1} (ξ_n²/t_n - σ²_{t_n})`.
pub fn compute_sigma_t(model: &LevyModel, horizon: f64, sticks: &StickBreak, xis: &[f64], kappa: f64) -> Result<f64> {
    zero_mean_finite_variance(model)?;
    if !(kappa >= 1.0) {
        return Err(Error::ParameterDomain { name: "kappa", value: kappa });
    }
    if truncated_variance(model, 1.0, kappa) <= 0.0 {
        return Err(Error::BadKappa(kappa));
    }
    if xis.len() != sticks.len() || !(horizon > 1.0) {
        return Err(Error::WrongRegime("increments must match sticks and T must exceed 1"));
    }
    let mut total = 0.0;
    for &n in &sticks.big_sticks()? {
        let t = horizon * sticks.lengths()[n - 1];
        let xi = xis[n - 1];
        total += xi * xi / t - truncated_variance(model, t, kappa);
    }
    Ok(total / (2.0 * horizon.ln().sqrt()))
}
