//! ECDFs, Kolmogorov–Smirnov tests, confidence intervals and tail regression.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};


use crate::error::{Error, Result};

/// Running count, mean and centred sum of squares. Merging is exact in exact arithmetic,
/// so partial results from any split of the data can be combined.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Accumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        self.m2 / (self.count - 1) as f64
    }

    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for Accumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Accumulator::default();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

/// Standard error of the sample variance, from the fourth central moment.
pub fn variance_std_error(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2) / n).sqrt()
}

/// Empirical distribution function of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Unsupported("ECDF of an empty sample or one containing NaN"));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    /// `#{x_i ≤ x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample value `v` with `eval(v) ≥ p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let k = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[k - 1]
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub m: usize,
    pub p_value: f64,
}

/// Smallest sample size for which the asymptotic p-value is reported.
pub const KS_MIN_SAMPLE: usize = 35;

/// Two-sample Kolmogorov–Smirnov test with the asymptotic Kolmogorov p-value.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<KsResult> {
    let (n, m) = (x.len(), y.len());
    if n < KS_MIN_SAMPLE || m < KS_MIN_SAMPLE {
        return Err(Error::SampleSize { n, m, min: KS_MIN_SAMPLE });
    }
    let a = Ecdf::new(x)?;
    let b = Ecdf::new(y)?;
    let (a, b) = (a.sorted(), b.sorted());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < n && a[i] <= v {
            i += 1;
        }
        while j < m && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let (nf, mf) = (n as f64, m as f64);
    let lambda = d * (nf * mf / (nf + mf)).sqrt();
    Ok(KsResult { statistic: d, n, m, p_value: kolmogorov_survival(lambda) })
}

/// One-sample Kolmogorov–Smirnov test against a continuous distribution function.
pub fn ks_one_sample<F: Fn(f64) -> f64>(x: &[f64], cdf: F) -> Result<KsResult> {
    let n = x.len();
    if n < KS_MIN_SAMPLE {
        return Err(Error::SampleSize { n, m: 0, min: KS_MIN_SAMPLE });
    }
    let e = Ecdf::new(x)?;
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in e.sorted().iter().enumerate() {
        let f = cdf(v);
        d = d.max(f - i as f64 / nf).max((i + 1) as f64 / nf - f);
    }
    Ok(KsResult { statistic: d, n, m: 0, p_value: kolmogorov_survival(d * nf.sqrt()) })
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        // theta-function form, fast for small λ
        let mut cdf = 0.0;
        for k in 1..=20 {
            let j = (2 * k - 1) as f64;
            let term = (-(j * j) * PI * PI / (8.0 * lambda * lambda)).exp();
            cdf += term;
            if term < 1e-16 {
                break;
            }
        }
        cdf *= (2.0 * PI).sqrt() / lambda;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Inverse of the standard normal distribution function.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    // Acklam's rational approximation, then one Halley step.
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    let p_low = 0.02425;
    let x = if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// Normal-approximation confidence interval: `(mean, z · SE)`.
pub fn mean_ci(samples: &[f64], level: f64) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::TooFewReplications { got: samples.len(), min: 2 });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::ParameterDomain { name: "level", value: level });
    }
    let acc: Accumulator = samples.iter().copied().collect();
    let z = normal_quantile(0.5 + 0.5 * level);
    Ok((acc.mean(), z * acc.std_error()))
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
}

/// Least squares `y ≈ intercept + slope · x`.
pub fn ols(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_se = if n > 2.0 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    LineFit { slope, intercept, slope_se }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFitResult {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub q_lo: f64,
    pub q_hi: f64,
    pub points: usize,
}

const MIN_TAIL_POINTS: usize = 50;

/// Regression of `log P(X ≥ x)` on `log x` over order statistics with empirical
/// levels in `[q_lo, q_hi)`.
pub fn tail_slope(samples: &[f64], q_lo: f64, q_hi: f64) -> Result<TailFitResult> {
    if !(0.0 < q_lo && q_lo < q_hi && q_hi < 1.0) {
        return Err(Error::ParameterDomain { name: "quantile window", value: q_lo });
    }
    let e = Ecdf::new(samples)?;
    let n = e.len();
    let nf = n as f64;
    let lo = (q_lo * nf).ceil() as usize;
    let hi = ((q_hi * nf).ceil() as usize).min(n);
    let mut lx = Vec::new();
    let mut ls = Vec::new();
    for i in lo..hi {
        let v = e.sorted()[i];
        if v > 0.0 {
            lx.push(v.ln());
            ls.push(((n - i) as f64 / nf).ln());
        }
    }
    if lx.len() < MIN_TAIL_POINTS {
        return Err(Error::TailWindow(lx.len()));
    }
    let fit = ols(&lx, &ls);
    Ok(TailFitResult {
        slope: fit.slope,
        intercept: fit.intercept,
        slope_se: fit.slope_se,
        q_lo,
        q_hi,
        points: lx.len(),
    })
}

/// Hill estimate of the tail index from the `k` largest observations.
pub fn hill(samples: &[f64], k: usize) -> Result<f64> {
    let e = Ecdf::new(samples)?;
    let n = e.len();
    if k < 2 || k >= n {
        return Err(Error::TailWindow(k));
    }
    let s = e.sorted();
    let threshold = s[n - k - 1];
    if !(threshold > 0.0) {
        return Err(Error::TailWindow(k));
    }
    let mean_log: f64 = s[n - k..].iter().map(|x| (x / threshold).ln()).sum::<f64>() / k as f64;
    Ok(1.0 / mean_log)
}
