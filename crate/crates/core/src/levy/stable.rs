//! Strictly stable draws by the Chambers–Mallows–Stuck transform.
//!
//! The parametrization is the one continuous in `alpha` away from 1: characteristic
//! function `exp(-|u|^alpha (1 - i beta sign(u) tan(pi alpha / 2)))`. At `alpha = 2` the
//! law is `N(0, 2)`.

use core::f64::consts::{FRAC_PI_2, PI};

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};

/// A standard (unit scale, zero location) stable law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    alpha: f64,
    beta: f64,
    skew_shift: f64,
    skew_scale: f64,
}

impl StableLaw {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
            return Err(Error::ParameterDomain { name: "alpha", value: alpha });
        }
        if !(beta.abs() <= 1.0) {
            return Err(Error::ParameterDomain { name: "beta", value: beta });
        }
        let tau = beta * (PI * alpha / 2.0).tan();
        Ok(Self {
            alpha,
            beta,
            skew_shift: tau.atan() / alpha,
            skew_scale: (1.0 + tau * tau).powf(1.0 / (2.0 * alpha)),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// One draw. Consumes exactly two `f64` from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        let e: f64 = rng.sample(Open01);
        self.transform(PI * (u - 0.5), -e.ln())
    }

    /// The CMS map from an angle in `(-pi/2, pi/2)` and a unit exponential.
    pub fn transform(&self, angle: f64, exp: f64) -> f64 {
        let a = self.alpha;
        let shifted = a * (angle + self.skew_shift);
        let head = self.skew_scale * shifted.sin() / angle.cos().powf(1.0 / a);
        let tail = ((angle - shifted).cos() / exp).powf((1.0 - a) / a);
        head * tail
    }

    /// `E|S|`, finite only for `alpha > 1`.
    pub fn mean_abs(&self) -> Option<f64> {
        if self.alpha <= 1.0 {
            return None;
        }
        let a = self.alpha;
        let tau = self.beta * (PI * a / 2.0).tan();
        let value = 2.0 / PI
            * libm::tgamma(1.0 - 1.0 / a)
            * (1.0 + tau * tau).powf(1.0 / (2.0 * a))
            * (tau.atan() / a).cos();
        Some(value)
    }

    /// `C_alpha` with `P(|S| > x) ~ C_alpha x^{-alpha}` for `alpha < 2`.
    pub fn two_sided_tail_constant(&self) -> Option<f64> {
        if self.alpha >= 2.0 {
            return None;
        }
        let a = self.alpha;
        Some((1.0 - a) / (libm::tgamma(2.0 - a) * (FRAC_PI_2 * a).cos()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_alpha_one_and_bad_beta() {
        assert!(StableLaw::new(1.0, 0.0).is_err());
        assert!(StableLaw::new(2.5, 0.0).is_err());
        assert!(StableLaw::new(0.0, 0.0).is_err());
        assert!(StableLaw::new(1.5, 1.2).is_err());
        assert!(StableLaw::new(1.5, f64::NAN).is_err());
    }

    #[test]
    fn alpha_two_is_gaussian_with_variance_two() {
        let law = StableLaw::new(2.0, 0.0).unwrap();
        // sin(2v)/sqrt(cos v) * sqrt(w / cos v) = 2 sin(v) sqrt(w)
        for &(v, w) in &[(0.3, 1.7), (-1.2, 0.05), (1.4, 3.0)] {
            let x = law.transform(v, w);
            assert!((x - 2.0 * f64::sin(v) * w.sqrt()).abs() < 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        // SE of the variance for a normal is sqrt(2/n) * 2 ~ 0.0063
        assert!((var - 2.0).abs() < 0.03, "var = {var}");
    }

    #[test]
    fn totally_skewed_below_one_is_positive() {
        let law = StableLaw::new(0.5, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..10_000).all(|_| law.sample(&mut rng) > 0.0));
    }

    #[test]
    fn symmetric_mean_abs_matches_monte_carlo() {
        let law = StableLaw::new(1.5, 0.0).unwrap();
        let exact = law.mean_abs().unwrap();
        assert!((exact - 2.0 / PI * libm::tgamma(1.0 / 3.0)).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 400_000;
        let mc = (0..n).map(|_| law.sample(&mut rng).abs()).sum::<f64>() / n as f64;
        assert!((mc - exact).abs() / exact < 0.02, "mc {mc} exact {exact}");
    }

    #[test]
    fn tail_constant_for_half() {
        // alpha = 1/2: (1/2) / (Gamma(3/2) cos(pi/4)) = 1 / (sqrt(pi) / sqrt(2)) ... = sqrt(2/pi)
        let law = StableLaw::new(0.5, 0.0).unwrap();
        let c = law.two_sided_tail_constant().unwrap();
        assert!((c - (2.0 / PI).sqrt()).abs() < 1e-12);
    }
}
