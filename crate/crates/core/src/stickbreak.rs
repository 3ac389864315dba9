//! Uniform stick-breaking on `[0, 1]`, scaled to `[0, T]`.

use alloc::vec::Vec;

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::stats::Accumulator;

/// Sticks `ℓ_n = V_n L_{n-1}`, remainders `L_n = L_{n-1} - ℓ_n`, drawn until
/// `T L_N < cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct StickBreak {
    uniforms: Vec<f64>,
    lengths: Vec<f64>,
    // L_0 = 1, L_1, …, L_N
    remainders: Vec<f64>,
    horizon: f64,
    cutoff: f64,
}

pub fn sample_sticks<R: Rng + ?Sized>(horizon: f64, cutoff: f64, rng: &mut R) -> Result<StickBreak> {
    StickBreak::from_uniforms(horizon, cutoff, core::iter::repeat_with(|| rng.sample(Open01)))
}

impl StickBreak {
    /// Breaks sticks with the given uniforms until `T L_N < cutoff`.
    pub fn from_uniforms<I: IntoIterator<Item = f64>>(horizon: f64, cutoff: f64, uniforms: I) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::NonPositiveDuration(horizon));
        }
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::ParameterDomain { name: "cutoff", value: cutoff });
        }
        let mut sb = StickBreak {
            uniforms: Vec::new(),
            lengths: Vec::new(),
            remainders: alloc::vec![1.0],
            horizon,
            cutoff,
        };
        let mut rest = 1.0;
        let mut source = uniforms.into_iter();
        while horizon * rest >= cutoff {
            let v = source.next().ok_or(Error::Unsupported("uniform source exhausted"))?;
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::ParameterDomain { name: "uniform", value: v });
            }
            let piece = v * rest;
            rest -= piece;
            sb.uniforms.push(v);
            sb.lengths.push(piece);
            sb.remainders.push(rest);
        }
        Ok(sb)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Number of recorded sticks `N`.
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn uniforms(&self) -> &[f64] {
        &self.uniforms
    }

    /// `ℓ_1, …, ℓ_N`.
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// `L_0, …, L_N`.
    pub fn remainders(&self) -> &[f64] {
        &self.remainders
    }

    /// `L_N`.
    pub fn last_remainder(&self) -> f64 {
        *self.remainders.last().unwrap()
    }

    /// Scaled stick lengths `t_n = T ℓ_n`.
    pub fn scaled(&self) -> impl DoubleEndedIterator<Item = f64> + ExactSizeIterator + '_ {
        self.lengths.iter().map(move |l| self.horizon * l)
    }

    /// `|Σ ℓ_n + L_N - 1|`, with the sum compensated.
    pub fn mass_defect(&self) -> f64 {
        let mut sum = Neumaier::default();
        for &l in &self.lengths {
            sum.add(l);
        }
        sum.add(self.last_remainder());
        (sum.value() - 1.0).abs()
    }

    fn require_big_sticks(&self) -> Result<()> {
        if self.cutoff > 1.0 {
            Err(Error::InsufficientTruncation(self.cutoff))
        } else {
            Ok(())
        }
    }

    /// `τ(T) = |{n ≥ 1 : L_n ≥ 1/T}|`.
    pub fn tau(&self) -> Result<usize> {
        self.require_big_sticks()?;
        Ok(self.remainders[1..].iter().filter(|&&r| self.horizon * r >= 1.0).count())
    }

    /// One-based indices `n` with `T ℓ_n ≥ 1`.
    pub fn big_sticks(&self) -> Result<Vec<usize>> {
        self.require_big_sticks()?;
        Ok(self
            .scaled()
            .enumerate()
            .filter(|&(_, t)| t >= 1.0)
            .map(|(i, _)| i + 1)
            .collect())
    }

    pub fn big_stick_count(&self) -> Result<usize> {
        self.require_big_sticks()?;
        Ok(self.scaled().filter(|&t| t >= 1.0).count())
    }
}

/// Test functions with known integrals `∫_0^T f(t)/t dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    /// `f(t) = t`, summed over every stick including the omitted remainder.
    Identity,
    /// `f(t) = 1{t ≥ 1} t^p`.
    IndicatorPower { p: f64 },
    /// `f(t) = 1{t ≥ 1} ln t`.
    IndicatorLog,
    /// `f(t) = 1{lo ≤ t < hi}`, `0 < lo < hi`.
    Interval { lo: f64, hi: f64 },
}

impl TestFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TestFunction::Identity => t,
            TestFunction::IndicatorPower { p } => {
                if t >= 1.0 {
                    t.powf(p)
                } else {
                    0.0
                }
            }
            TestFunction::IndicatorLog => {
                if t >= 1.0 {
                    t.ln()
                } else {
                    0.0
                }
            }
            TestFunction::Interval { lo, hi } => {
                if t >= lo && t < hi {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `∫_0^T f(t)/t dt`.
    pub fn target(&self, horizon: f64) -> f64 {
        match *self {
            TestFunction::Identity => horizon,
            TestFunction::IndicatorPower { p } => {
                if horizon <= 1.0 {
                    0.0
                } else if p == 0.0 {
                    horizon.ln()
                } else {
                    (horizon.powf(p) - 1.0) / p
                }
            }
            TestFunction::IndicatorLog => {
                let l = horizon.ln().max(0.0);
                0.5 * l * l
            }
            TestFunction::Interval { lo, hi } => {
                let top = hi.min(horizon);
                if top > lo {
                    (top / lo).ln()
                } else {
                    0.0
                }
            }
        }
    }

    /// Largest cutoff that records every stick on which `f` is nonzero.
    pub fn cutoff(&self) -> f64 {
        match *self {
            TestFunction::Interval { lo, .. } => lo.min(1.0),
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TestFunction::Interval { lo, hi } if !(lo > 0.0 && hi > lo) => {
                Err(Error::ParameterDomain { name: "interval", value: lo })
            }
            TestFunction::IndicatorPower { p } if !p.is_finite() => {
                Err(Error::ParameterDomain { name: "p", value: p })
            }
            _ => Ok(()),
        }
    }

    /// `Σ_n f(t_n)` over the recorded sticks.
    pub fn stick_sum(&self, sb: &StickBreak) -> f64 {
        let mut total: f64 = sb.scaled().map(|t| self.eval(t)).sum();
        if let TestFunction::Identity = self {
            // the sticks hidden in the remainder add up to T L_N
            total += sb.horizon * sb.last_remainder();
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub reps: usize,
    pub target: f64,
}

impl Estimate {
    /// `|mean - target| ≤ max(k SE, floor)`.
    pub fn within(&self, k: f64, floor: f64) -> bool {
        (self.mean - self.target).abs() <= (k * self.se).max(floor)
    }
}

const MIN_REPS: usize = 100;

/// Monte Carlo estimate of `E Σ_n f(t_n)` against its compensator `∫_0^T f(t)/t dt`.
pub fn compensation_estimate<R: Rng + ?Sized>(
    f: TestFunction,
    horizon: f64,
    reps: usize,
    rng: &mut R,
) -> Result<Estimate> {
    f.validate()?;
    if reps < MIN_REPS {
        return Err(Error::TooFewReplications { got: reps, min: MIN_REPS });
    }
    let mut acc = Accumulator::default();
    for _ in 0..reps {
        let sb = sample_sticks(horizon, f.cutoff(), rng)?;
        acc.push(f.stick_sum(&sb));
    }
    Ok(Estimate { mean: acc.mean(), se: acc.std_error(), reps, target: f.target(horizon) })
}

/// Monte Carlo estimate of `E Σ_{n : t_n ≥ 1} t_n^{-q}`, whose exact value is
/// `(1 - T^{-q}) / q`.
pub fn big_stick_power_sum<R: Rng + ?Sized>(q: f64, horizon: f64, reps: usize, rng: &mut R) -> Result<Estimate> {
    if !(q > 0.0) {
        return Err(Error::ParameterDomain { name: "q", value: q });
    }
    compensation_estimate(TestFunction::IndicatorPower { p: -q }, horizon, reps, rng)
}

#[derive(Debug, Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
