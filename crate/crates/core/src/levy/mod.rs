//! Lévy process models: exact increments, path skeletons, norming and `Θ(T)`.

mod jump;
mod path;
mod stable;

pub use jump::{JumpDist, LOG_CORRECTED_EDGE};
pub use path::{sample_path, Exactness, PathSkeleton, Resolution};
pub use stable::StableLaw;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevyModel {
    BrownianDrift { sigma: f64, mu: f64 },
    CompoundPoissonDrift { rate: f64, jump: JumpDist, mu: f64 },
    /// `X_t = mu t + scale t^{1/alpha} S` with `S` standard stable (see [`StableLaw`]).
    StableProcess { alpha: f64, beta: f64, scale: f64, mu: f64 },
}

impl LevyModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LevyModel::BrownianDrift { sigma, mu } => {
                positive(sigma, "sigma")?;
                finite(mu, "mu")
            }
            LevyModel::CompoundPoissonDrift { rate, jump, mu } => {
                positive(rate, "rate")?;
                finite(mu, "mu")?;
                jump.validate()
            }
            LevyModel::StableProcess { alpha, beta, scale, mu } => {
                StableLaw::new(alpha, beta)?;
                positive(scale, "scale")?;
                finite(mu, "mu")
            }
        }
    }

    pub fn drift(&self) -> f64 {
        match *self {
            LevyModel::BrownianDrift { mu, .. }
            | LevyModel::CompoundPoissonDrift { mu, .. }
            | LevyModel::StableProcess { mu, .. } => mu,
        }
    }

    /// `E[X_1]`, `None` if it does not exist.
    pub fn mean(&self) -> Option<f64> {
        match *self {
            LevyModel::BrownianDrift { mu, .. } => Some(mu),
            LevyModel::CompoundPoissonDrift { rate, jump, mu } => jump.mean().map(|m| mu + rate * m),
            // the standard law is centred when alpha > 1
            LevyModel::StableProcess { alpha, mu, .. } => (alpha > 1.0).then_some(mu),
        }
    }

    /// `Var[X_1]`, infinite for heavy tails.
    pub fn variance(&self) -> f64 {
        match *self {
            LevyModel::BrownianDrift { sigma, .. } => sigma * sigma,
            LevyModel::CompoundPoissonDrift { rate, jump, .. } => rate * jump.second_moment(),
            LevyModel::StableProcess { alpha, scale, .. } => {
                if alpha == 2.0 {
                    2.0 * scale * scale
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Index of the stable law `X_T / a_T` is attracted to; 2 for finite variance.
    pub fn attraction_index(&self) -> Result<f64> {
        match *self {
            LevyModel::BrownianDrift { .. } => Ok(2.0),
            LevyModel::StableProcess { alpha, .. } => Ok(alpha),
            LevyModel::CompoundPoissonDrift { jump, .. } => match jump {
                JumpDist::Pareto { tail_index, .. } if tail_index == 2.0 || tail_index == 1.0 => {
                    Err(Error::Unsupported("Pareto tail index 1 or 2 needs a logarithmic norming"))
                }
                JumpDist::Pareto { tail_index, .. } if tail_index < 2.0 => Ok(tail_index),
                JumpDist::LogCorrectedPareto => {
                    Err(Error::Unsupported("log-corrected jumps need a slowly varying norming"))
                }
                _ => Ok(2.0),
            },
        }
    }

    /// `E|X_t|`, or an upper bound on it, used to bound omitted remainders.
    /// Infinite when the first moment does not exist.
    pub fn abs_moment_bound(&self, t: f64) -> f64 {
        match *self {
            LevyModel::BrownianDrift { sigma, mu } => {
                mu.abs() * t + sigma * (2.0 * t / core::f64::consts::PI).sqrt()
            }
            LevyModel::CompoundPoissonDrift { rate, jump, mu } => {
                mu.abs() * t + rate * t * jump.mean_abs()
            }
            LevyModel::StableProcess { alpha, beta, scale, mu } => {
                match StableLaw::new(alpha, beta).ok().and_then(|s| s.mean_abs()) {
                    Some(m) => mu.abs() * t + scale * m * t.powf(1.0 / alpha),
                    None => f64::INFINITY,
                }
            }
        }
    }

    /// `½ ∫ x² log⁺(min{T, x²}) ν(dx)`.
    ///
    /// Evaluates the definition and the layer-cake form
    /// `½ ∫_1^T t⁻¹ ∫_{|x| ≥ √t} x² ν(dx) dt`, and fails if they disagree beyond `1e-8`
    /// relative.
    pub fn theta(&self, horizon: f64) -> Result<f64> {
        let (definition, layered) = self.theta_forms(horizon)?;
        let scale = definition.abs().max(layered.abs());
        if (definition - layered).abs() > 1e-8 * scale {
            return Err(Error::Quadrature { definition, layered });
        }
        Ok(definition)
    }

    /// Both evaluations of `Θ(T)`: `(definition, layer-cake form)`.
    pub fn theta_forms(&self, horizon: f64) -> Result<(f64, f64)> {
        if !(horizon >= 1.0) || !horizon.is_finite() {
            return Err(Error::ParameterDomain { name: "T", value: horizon });
        }
        match *self {
            LevyModel::BrownianDrift { .. } => Ok((0.0, 0.0)),
            LevyModel::StableProcess { alpha, .. } => {
                if alpha == 2.0 {
                    Ok((0.0, 0.0))
                } else {
                    Err(Error::DivergentIntegral("stable Lévy measure has no second moment"))
                }
            }
            LevyModel::CompoundPoissonDrift { rate, jump, .. } => {
                if !jump.second_moment().is_finite() {
                    return Err(Error::DivergentIntegral("jump law has no second moment"));
                }
                let definition = 0.5 * rate * jump.log_weighted_second_moment(horizon);
                let log_t = horizon.ln();
                let kinks = jump.tail_kinks();
                let breaks = [2.0 * kinks[0].ln(), 2.0 * kinks[1].ln()];
                let layered = 0.5
                    * rate
                    * quad::integrate(
                        |u| jump.tail_second_moment((0.5 * u).exp()),
                        0.0,
                        log_t,
                        &breaks,
                        1e-300,
                        1e-13,
                    );
                Ok((definition, layered))
            }
        }
    }

    /// Norming `a_T` with `X_T / a_T` converging to a stable law (after centring).
    ///
    /// * finite variance: `√T`;
    /// * stable process: `scale · T^{1/α}`;
    /// * Pareto jumps with tail index `a < 2`: `x_m (rate · T / C_a)^{1/a}`, where
    ///   `C_a` is the two-sided tail constant of the standard stable law, so that
    ///   `T ν(|x| > a_T y)` matches `C_a y^{-a}`. The slowly varying factor is constant.
    pub fn norming(&self, horizon: f64) -> Result<f64> {
        self.validate()?;
        if !(horizon > 0.0) {
            return Err(Error::NonPositiveDuration(horizon));
        }
        match *self {
            LevyModel::StableProcess { alpha, scale, .. } => Ok(scale * horizon.powf(1.0 / alpha)),
            LevyModel::BrownianDrift { .. } => Ok(horizon.sqrt()),
            LevyModel::CompoundPoissonDrift { rate, jump, .. } => {
                let index = self.attraction_index()?;
                match jump {
                    JumpDist::Pareto { tail_index, scale, .. } if index < 2.0 => {
                        let c = StableLaw::new(tail_index, 0.0)?
                            .two_sided_tail_constant()
                            .unwrap_or(1.0);
                        Ok(scale * (rate * horizon / c).powf(1.0 / tail_index))
                    }
                    _ => Ok(horizon.sqrt()),
                }
            }
        }
    }
}

/// One draw of `X_t`.
pub fn sample_increment<R: Rng + ?Sized>(model: &LevyModel, t: f64, rng: &mut R) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveDuration(t));
    }
    model.validate()?;
    increment_unchecked(model, t, rng)
}

// `model` validated and `t > 0` by the caller.
pub(crate) fn increment_unchecked<R: Rng + ?Sized>(
    model: &LevyModel,
    t: f64,
    rng: &mut R,
) -> Result<f64> {
    match *model {
        LevyModel::BrownianDrift { sigma, mu } => {
            let z: f64 = StandardNormal.sample(rng);
            Ok(mu * t + sigma * t.sqrt() * z)
        }
        LevyModel::CompoundPoissonDrift { rate, jump, mu } => {
            let count = poisson(rate * t, rng)?;
            Ok(mu * t + jump.sample_sum(count, rng)?)
        }
        LevyModel::StableProcess { alpha, beta, scale, mu } => {
            let law = StableLaw::new(alpha, beta)?;
            Ok(mu * t + scale * t.powf(1.0 / alpha) * law.sample(rng))
        }
    }
}

pub(crate) fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let law = Poisson::new(mean).map_err(|_| Error::ParameterDomain { name: "rate", value: mean })?;
    Ok(law.sample(rng) as u64)
}

fn positive(value: f64, name: &'static str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterDomain { name, value })
    }
}

fn finite(value: f64, name: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterDomain { name, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::E;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cp(jump: JumpDist) -> LevyModel {
        LevyModel::CompoundPoissonDrift { rate: 1.0, jump, mu: 0.0 }
    }

    #[test]
    fn increments_reject_bad_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bm = LevyModel::BrownianDrift { sigma: 1.0, mu: 0.0 };
        assert_eq!(sample_increment(&bm, 0.0, &mut rng), Err(Error::NonPositiveDuration(0.0)));
        let bad = LevyModel::BrownianDrift { sigma: -1.0, mu: 0.0 };
        assert!(matches!(
            sample_increment(&bad, 1.0, &mut rng),
            Err(Error::ParameterDomain { name: "sigma", .. })
        ));
        let cauchy = LevyModel::StableProcess { alpha: 1.0, beta: 0.0, scale: 1.0, mu: 0.0 };
        assert!(cauchy.validate().is_err());
    }

    #[test]
    fn brownian_unit_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bm = LevyModel::BrownianDrift { sigma: 1.0, mu: 0.0 };
        let n = 1_000_000;
        let mean = (0..n).map(|_| sample_increment(&bm, 1.0, &mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.004, "mean {mean}");
    }

    #[test]
    fn poisson_point_mass_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = LevyModel::CompoundPoissonDrift { rate: 2.0, jump: JumpDist::PointMass { x: 1.0 }, mu: 0.0 };
        let n = 200_000;
        let draws: alloc::vec::Vec<f64> = (0..n).map(|_| sample_increment(&m, 3.0, &mut rng).unwrap()).collect();
        assert!(draws.iter().all(|x| x.fract() == 0.0 && *x >= 0.0));
        let mean = draws.iter().sum::<f64>() / n as f64;
        // sd of the mean: sqrt(6 / 2e5) ~ 0.0055
        assert!((mean - 6.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn stable_two_has_variance_two_scale_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = 1.7;
        let m = LevyModel::StableProcess { alpha: 2.0, beta: 0.0, scale: s, mu: 0.0 };
        let n = 200_000;
        let draws: alloc::vec::Vec<f64> = (0..n).map(|_| sample_increment(&m, 1.0, &mut rng).unwrap()).collect();
        let var = draws.iter().map(|x| x * x).sum::<f64>() / n as f64;
        assert!((var / (2.0 * s * s) - 1.0).abs() < 0.015, "var {var}");
        assert_eq!(m.variance(), 2.0 * s * s);
    }

    #[test]
    fn norming_examples() {
        let bm = LevyModel::BrownianDrift { sigma: 2.0, mu: 0.0 };
        assert_eq!(bm.norming(100.0).unwrap(), 10.0);
        let half = LevyModel::StableProcess { alpha: 0.5, beta: 0.0, scale: 1.0, mu: 0.0 };
        assert!((half.norming(16.0).unwrap() - 256.0).abs() < 1e-9);
        let two = LevyModel::StableProcess { alpha: 2.0, beta: 0.0, scale: 3.0, mu: 0.0 };
        assert!((two.norming(4.0).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn pareto_norming_matches_tail() {
        let jump = JumpDist::Pareto { tail_index: 1.5, scale: 2.0, p_up: 0.5 };
        let m = LevyModel::CompoundPoissonDrift { rate: 3.0, jump, mu: 0.0 };
        let t = 1e4;
        let a = m.norming(t).unwrap();
        let c = StableLaw::new(1.5, 0.0).unwrap().two_sided_tail_constant().unwrap();
        // T * rate * P(|J| > a y) = C y^{-1.5} at y = 1
        let lhs = t * 3.0 * (2.0 / a).powf(1.5);
        assert!((lhs - c).abs() < 1e-9 * c);
        let bad = LevyModel::CompoundPoissonDrift {
            rate: 1.0,
            jump: JumpDist::Pareto { tail_index: 2.0, scale: 1.0, p_up: 0.5 },
            mu: 0.0,
        };
        assert!(bad.norming(10.0).is_err());
    }

    #[test]
    fn theta_examples() {
        let bm = LevyModel::BrownianDrift { sigma: 1.0, mu: 0.0 };
        assert_eq!(bm.theta(1e6).unwrap(), 0.0);
        assert_eq!(cp(JumpDist::PointMass { x: 1.0 }).theta(10.0).unwrap(), 0.0);
        let e2 = E * E;
        let v = cp(JumpDist::PointMass { x: E }).theta(e2).unwrap();
        assert!((v - e2).abs() < 1e-12 * e2, "theta {v}");
        let stable = LevyModel::StableProcess { alpha: 1.5, beta: 0.0, scale: 1.0, mu: 0.0 };
        assert!(matches!(stable.theta(10.0), Err(Error::DivergentIntegral(_))));
        assert!(bm.theta(0.5).is_err());
    }

    #[test]
    fn theta_point_mass_closed_form() {
        // ½ x² log min(T, x²) for x² > 1
        for (x, t) in [(3.0, 4.0), (3.0, 100.0), (-2.0, 50.0)] {
            let want = 0.5 * x * x * f64::min(t, x * x).ln();
            let got = cp(JumpDist::PointMass { x }).theta(t).unwrap();
            assert!((got - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn theta_forms_agree() {
        let jumps = [
            JumpDist::PointMass { x: 2.5 },
            JumpDist::TwoPoint { p_up: 0.3, up: 4.0, down: -0.5 },
            JumpDist::Gaussian { mean: 0.0, sd: 1.0 },
            JumpDist::Gaussian { mean: 1.5, sd: 3.0 },
            JumpDist::Pareto { tail_index: 3.5, scale: 0.7, p_up: 0.5 },
            JumpDist::Pareto { tail_index: 2.5, scale: 2.0, p_up: 0.5 },
            JumpDist::LogCorrectedPareto,
        ];
        for jump in jumps {
            for t in [1.0, 2.0, 50.0, 1e4, 1e8] {
                let (d, l) = cp(jump).theta_forms(t).unwrap();
                assert!((d - l).abs() <= 1e-8 * d.abs().max(1e-300), "{jump:?} T={t}: {d} vs {l}");
            }
        }
    }

    #[test]
    fn log_corrected_theta_at_hundred_is_log_t() {
        let m = cp(JumpDist::LogCorrectedPareto);
        let t = 100.0f64;
        assert!((m.theta(t).unwrap() - t.ln()).abs() < 1e-12);
    }
}
