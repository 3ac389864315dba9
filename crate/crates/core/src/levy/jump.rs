//! Jump laws of compound Poisson models and the moments of the induced Lévy measure.

use core::f64::consts::{E, PI};

use rand::distr::OpenClosed01;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::quad;

/// `e^e`, the lower edge of the log-corrected law's support.
pub const LOG_CORRECTED_EDGE: f64 = 15.154_262_241_479_262;

/// Law of a single jump. The Lévy measure is `rate * jump(dx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpDist {
    TwoPoint { p_up: f64, up: f64, down: f64 },
    Gaussian { mean: f64, sd: f64 },
    /// Magnitude `scale * U^{-1/tail_index}`, positive with probability `p_up`.
    Pareto { tail_index: f64, scale: f64, p_up: f64 },
    PointMass { x: f64 },
    /// Density `|x|^{-3} (ln|x|)^{-1} (ln ln|x|)^{-2}` on `|x| > e^e`, unnormalized, so
    /// that `rate * density` is the Lévy measure. Only moments are available; it
    /// cannot be sampled.
    LogCorrectedPareto,
}

impl JumpDist {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpDist::TwoPoint { p_up, up, down } => {
                check(p_up, "p_up", (0.0..=1.0).contains(&p_up))?;
                check(up, "up", up > 0.0 && up.is_finite())?;
                check(down, "down", down < 0.0 && down.is_finite())
            }
            JumpDist::Gaussian { mean, sd } => {
                check(mean, "jump_mean", mean.is_finite())?;
                check(sd, "jump_sd", sd > 0.0 && sd.is_finite())
            }
            JumpDist::Pareto { tail_index, scale, p_up } => {
                check(tail_index, "tail_index", tail_index > 0.0 && tail_index.is_finite())?;
                check(scale, "jump_scale", scale > 0.0 && scale.is_finite())?;
                check(p_up, "p_up", (0.0..=1.0).contains(&p_up))
            }
            JumpDist::PointMass { x } => check(x, "jump_x", x != 0.0 && x.is_finite()),
            JumpDist::LogCorrectedPareto => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        Ok(match *self {
            JumpDist::TwoPoint { p_up, up, down } => {
                if rng.random::<f64>() < p_up {
                    up
                } else {
                    down
                }
            }
            JumpDist::Gaussian { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            JumpDist::Pareto { tail_index, scale, p_up } => {
                let u: f64 = rng.sample(OpenClosed01);
                let magnitude = scale * u.powf(-1.0 / tail_index);
                if rng.random::<f64>() < p_up {
                    magnitude
                } else {
                    -magnitude
                }
            }
            JumpDist::PointMass { x } => x,
            JumpDist::LogCorrectedPareto => {
                return Err(Error::Unsupported("sampling the log-corrected jump law"))
            }
        })
    }

    /// Sum of `count` independent jumps, using closed forms where the law allows.
    pub fn sample_sum<R: Rng + ?Sized>(&self, count: u64, rng: &mut R) -> Result<f64> {
        if count == 0 {
            return Ok(0.0);
        }
        let n = count as f64;
        Ok(match *self {
            JumpDist::PointMass { x } => n * x,
            JumpDist::TwoPoint { p_up, up, down } => {
                let ups = Binomial::new(count, p_up)
                    .map_err(|_| Error::ParameterDomain { name: "p_up", value: p_up })?
                    .sample(rng) as f64;
                ups * up + (n - ups) * down
            }
            JumpDist::Gaussian { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                n * mean + sd * n.sqrt() * z
            }
            _ => {
                let mut total = 0.0;
                for _ in 0..count {
                    total += self.sample(rng)?;
                }
                total
            }
        })
    }

    /// `E[J]`, `None` when it does not exist.
    pub fn mean(&self) -> Option<f64> {
        match *self {
            JumpDist::TwoPoint { p_up, up, down } => Some(p_up * up + (1.0 - p_up) * down),
            JumpDist::Gaussian { mean, .. } => Some(mean),
            JumpDist::Pareto { tail_index, scale, p_up } => {
                (tail_index > 1.0).then(|| (2.0 * p_up - 1.0) * tail_index * scale / (tail_index - 1.0))
            }
            JumpDist::PointMass { x } => Some(x),
            JumpDist::LogCorrectedPareto => None,
        }
    }

    /// `E|J|`, possibly infinite.
    pub fn mean_abs(&self) -> f64 {
        match *self {
            JumpDist::TwoPoint { p_up, up, down } => p_up * up - (1.0 - p_up) * down,
            JumpDist::Gaussian { mean, sd } => {
                let a = mean / sd;
                sd * (2.0 / PI).sqrt() * (-0.5 * a * a).exp() + mean * libm::erf(a / 2f64.sqrt())
            }
            JumpDist::Pareto { tail_index, scale, .. } => {
                if tail_index > 1.0 {
                    tail_index * scale / (tail_index - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            JumpDist::PointMass { x } => x.abs(),
            JumpDist::LogCorrectedPareto => f64::INFINITY,
        }
    }

    /// `∫ x² J(dx)` (per unit rate for the log-corrected measure).
    pub fn second_moment(&self) -> f64 {
        self.tail_second_moment(0.0)
    }

    /// `∫_{|x| ≥ r} x² J(dx)`.
    pub fn tail_second_moment(&self, r: f64) -> f64 {
        match *self {
            JumpDist::TwoPoint { p_up, up, down } => {
                let mut m = 0.0;
                if up >= r {
                    m += p_up * up * up;
                }
                if -down >= r {
                    m += (1.0 - p_up) * down * down;
                }
                m
            }
            JumpDist::Gaussian { mean, sd } => {
                if r <= 0.0 {
                    return mean * mean + sd * sd;
                }
                gaussian_one_sided(r, mean, sd) + gaussian_one_sided(r, -mean, sd)
            }
            JumpDist::Pareto { tail_index, scale, .. } => {
                if tail_index <= 2.0 {
                    return f64::INFINITY;
                }
                let c = r.max(scale);
                tail_index * scale.powf(tail_index) * c.powf(2.0 - tail_index) / (tail_index - 2.0)
            }
            JumpDist::PointMass { x } => {
                if x.abs() >= r {
                    x * x
                } else {
                    0.0
                }
            }
            JumpDist::LogCorrectedPareto => 2.0 / r.max(LOG_CORRECTED_EDGE).ln().ln(),
        }
    }

    /// `∫ x² log⁺(min{T, x²}) J(dx)` evaluated directly against the law.
    pub fn log_weighted_second_moment(&self, horizon: f64) -> f64 {
        let log_t = horizon.ln();
        let root_t = horizon.sqrt();
        let weight = |x: f64| x * x * (x * x).min(horizon).ln().max(0.0);
        match *self {
            JumpDist::TwoPoint { p_up, up, down } => p_up * weight(up) + (1.0 - p_up) * weight(down),
            JumpDist::PointMass { x } => weight(x),
            JumpDist::Gaussian { mean, sd } => {
                let density = |x: f64| {
                    let z = (x - mean) / sd;
                    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
                };
                let mut breaks = alloc::vec::Vec::new();
                for k in [-8.0, -4.0, -1.0, 0.0, 1.0, 4.0, 8.0] {
                    breaks.push(mean.abs() + k * sd);
                }
                let middle = quad::integrate(
                    |x| x * x * 2.0 * x.ln() * (density(x) + density(-x)),
                    1.0,
                    root_t,
                    &breaks,
                    1e-300,
                    1e-13,
                );
                middle + log_t * self.tail_second_moment(root_t.max(1.0))
            }
            JumpDist::Pareto { tail_index, scale, .. } => {
                if tail_index <= 2.0 {
                    return f64::INFINITY;
                }
                let lo = scale.max(1.0);
                // magnitude density a s^a x^{-a-1}; integrate in v = ln x
                let middle = quad::integrate(
                    |v| {
                        let x = v.exp();
                        tail_index * scale.powf(tail_index) * x.powf(2.0 - tail_index) * 2.0 * v
                    },
                    lo.ln(),
                    root_t.ln(),
                    &[],
                    1e-300,
                    1e-13,
                );
                middle + log_t * self.tail_second_moment(root_t.max(1.0))
            }
            JumpDist::LogCorrectedPareto => {
                // both sides: 2 * ∫ x² · 2 ln x · x^{-3} (ln x)^{-1} (ln ln x)^{-2} dx, with u = ln x
                let middle = quad::integrate(
                    |u| 4.0 / (u.ln() * u.ln()),
                    E,
                    root_t.ln(),
                    &[],
                    1e-300,
                    1e-13,
                );
                middle + log_t * self.tail_second_moment(root_t)
            }
        }
    }

    /// Points where `r ↦ tail_second_moment(r)` jumps or changes form.
    pub fn tail_kinks(&self) -> [f64; 2] {
        match *self {
            JumpDist::TwoPoint { up, down, .. } => [up, -down],
            JumpDist::PointMass { x } => [x.abs(), x.abs()],
            JumpDist::Pareto { scale, .. } => [scale, scale],
            JumpDist::LogCorrectedPareto => [LOG_CORRECTED_EDGE, LOG_CORRECTED_EDGE],
            JumpDist::Gaussian { mean, .. } => [mean.abs(), mean.abs()],
        }
    }
}

// ∫_{x ≥ r} x² φ((x - m)/s)/s dx
fn gaussian_one_sided(r: f64, m: f64, s: f64) -> f64 {
    let a = (r - m) / s;
    let phi = (-0.5 * a * a).exp() / (2.0 * PI).sqrt();
    let upper = 0.5 * libm::erfc(a / 2f64.sqrt());
    m * m * upper + 2.0 * m * s * phi + s * s * (a * phi + upper)
}

fn check(value: f64, name: &'static str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ParameterDomain { name, value })
    }
}
