//! Finite records of a path on `[0, T]`.

use alloc::vec::Vec;

use rand::distr::Open01;
use rand::Rng;

use super::{increment_unchecked, LevyModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    /// Every jump is recorded with its left limit; the path is linear in between.
    ExactJumps,
    GridApprox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    Grid(f64),
    ExactJumps,
}

/// A time-ordered path record starting at `(0, 0)` and ending at `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSkeleton {
    times: Vec<f64>,
    values: Vec<f64>,
    left_limits: Option<Vec<f64>>,
    exactness: Exactness,
    horizon: f64,
}

impl PathSkeleton {
    /// Grid record from times and values. Checks the ordering invariants.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::build(times, values, None, Exactness::GridApprox)
    }

    /// Record of a piecewise-linear path with jumps: `values[i]` is the value at
    /// `times[i]` and `left_limits[i]` the limit from the left. The path must be
    /// continuous at both ends.
    pub fn with_jumps(times: Vec<f64>, values: Vec<f64>, left_limits: Vec<f64>) -> Result<Self> {
        if left_limits.len() != values.len() {
            return Err(Error::MalformedPath("left limits and values differ in length"));
        }
        if left_limits.first() != Some(&0.0) || left_limits.last() != values.last() {
            return Err(Error::MalformedPath("path must be continuous at 0 and T"));
        }
        Self::build(times, values, Some(left_limits), Exactness::ExactJumps)
    }

    fn build(
        times: Vec<f64>,
        values: Vec<f64>,
        left_limits: Option<Vec<f64>>,
        exactness: Exactness,
    ) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(Error::MalformedPath("need at least two points and one value per time"));
        }
        if times[0] != 0.0 || values[0] != 0.0 {
            return Err(Error::MalformedPath("path must start at (0, 0)"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::MalformedPath("times must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedPath("non-finite value"));
        }
        let horizon = *times.last().unwrap();
        if !horizon.is_finite() {
            return Err(Error::MalformedPath("non-finite horizon"));
        }
        Ok(Self { times, values, left_limits, exactness, horizon })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_limits(&self) -> Option<&[f64]> {
        self.left_limits.as_deref()
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn final_value(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest value visible at each time, `max(X_t, X_{t-})`.
    pub fn upper_envelope(&self) -> Vec<f64> {
        self.envelope(f64::max)
    }

    /// Smallest value visible at each time, `min(X_t, X_{t-})`.
    pub fn lower_envelope(&self) -> Vec<f64> {
        self.envelope(f64::min)
    }

    fn envelope(&self, pick: fn(f64, f64) -> f64) -> Vec<f64> {
        match &self.left_limits {
            None => self.values.clone(),
            Some(left) => self.values.iter().zip(left).map(|(&v, &l)| pick(v, l)).collect(),
        }
    }

    /// The path reflected through the time axis.
    pub fn negated(&self) -> Self {
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|v| -v).collect(),
            left_limits: self.left_limits.as_ref().map(|l| l.iter().map(|v| -v).collect()),
            exactness: self.exactness,
            horizon: self.horizon,
        }
    }
}

/// Samples a path on `[0, horizon]`.
///
/// A grid step `h` gives times `0, h, 2h, …` with the last step ending exactly at
/// `horizon`; values are accumulated left to right from exact increments. Exact jump
/// records are only available for compound Poisson models.
pub fn sample_path<R: Rng + ?Sized>(
    model: &LevyModel,
    horizon: f64,
    resolution: Resolution,
    rng: &mut R,
) -> Result<PathSkeleton> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::NonPositiveDuration(horizon));
    }
    model.validate()?;
    match resolution {
        Resolution::Grid(step) => {
            if !(step > 0.0) || !step.is_finite() {
                return Err(Error::ParameterDomain { name: "grid step", value: step });
            }
            let steps = ((horizon / step) - 1e-9).ceil().max(1.0) as usize;
            let mut times = Vec::with_capacity(steps + 1);
            let mut values = Vec::with_capacity(steps + 1);
            times.push(0.0);
            values.push(0.0);
            let mut level = 0.0;
            for k in 1..=steps {
                let t = if k == steps { horizon } else { k as f64 * step };
                let dt = t - times[k - 1];
                level += increment_unchecked(model, dt, rng)?;
                times.push(t);
                values.push(level);
            }
            PathSkeleton::new(times, values)
        }
        Resolution::ExactJumps => {
            let LevyModel::CompoundPoissonDrift { rate, jump, mu } = *model else {
                return Err(Error::UnsupportedExactness);
            };
            let mut times = alloc::vec![0.0];
            let mut values = alloc::vec![0.0];
            let mut left = alloc::vec![0.0];
            let mut clock = 0.0;
            let mut jumps = 0.0;
            loop {
                let u: f64 = rng.sample(Open01);
                clock += -u.ln() / rate;
                if clock >= horizon {
                    break;
                }
                let pre = mu * clock + jumps;
                jumps += jump.sample(rng)?;
                times.push(clock);
                left.push(pre);
                values.push(mu * clock + jumps);
            }
            let end = mu * horizon + jumps;
            times.push(horizon);
            left.push(end);
            values.push(end);
            PathSkeleton::with_jumps(times, values, left)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::JumpDist;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_malformed() {
        assert!(PathSkeleton::new(alloc::vec![0.0], alloc::vec![0.0]).is_err());
        assert!(PathSkeleton::new(alloc::vec![0.0, 1.0, 1.0], alloc::vec![0.0, 1.0, 2.0]).is_err());
        assert!(PathSkeleton::new(alloc::vec![0.0, 2.0, 1.0], alloc::vec![0.0, 1.0, 2.0]).is_err());
        assert!(PathSkeleton::new(alloc::vec![0.5, 1.0], alloc::vec![0.0, 1.0]).is_err());
        assert!(PathSkeleton::new(alloc::vec![0.0, 1.0], alloc::vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn grid_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bm = LevyModel::BrownianDrift { sigma: 1.0, mu: 0.0 };
        let p = sample_path(&bm, 1.0, Resolution::Grid(0.25), &mut rng).unwrap();
        assert_eq!(p.times(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let p = sample_path(&bm, 1.0, Resolution::Grid(1.0), &mut rng).unwrap();
        assert_eq!(p.len(), 2);
        let p = sample_path(&bm, 1.0, Resolution::Grid(0.3), &mut rng).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p.horizon(), 1.0);
        assert_eq!(p.exactness(), Exactness::GridApprox);
    }

    #[test]
    fn exact_jumps_only_for_compound_poisson() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bm = LevyModel::BrownianDrift { sigma: 1.0, mu: 0.0 };
        assert_eq!(
            sample_path(&bm, 1.0, Resolution::ExactJumps, &mut rng),
            Err(Error::UnsupportedExactness)
        );
    }

    #[test]
    fn point_mass_path_counts_jumps() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = LevyModel::CompoundPoissonDrift { rate: 1.0, jump: JumpDist::PointMass { x: 1.0 }, mu: 0.0 };
        let mut total = 0.0;
        let reps = 20_000;
        for _ in 0..reps {
            let p = sample_path(&m, 10.0, Resolution::ExactJumps, &mut rng).unwrap();
            assert_eq!(p.exactness(), Exactness::ExactJumps);
            let jumps = p.len() - 2;
            assert_eq!(p.final_value(), jumps as f64);
            let left = p.left_limits().unwrap();
            for i in 1..p.len() - 1 {
                assert_eq!(p.values()[i] - left[i], 1.0);
            }
            total += p.final_value();
        }
        let mean = total / reps as f64;
        assert!((mean - 10.0).abs() < 0.1, "mean {mean}");
    }
}
