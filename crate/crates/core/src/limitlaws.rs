//! Samplers for the limit laws, by truncated stick-breaking series.
//!
//! Each series runs over one uniform stick-breaking sequence until `L_N < eps`. Where the
//! law allows, the part over the remaining mass `L_N` is folded in as a single term driven
//! by noise drawn before the series starts, so draws at `eps` and `eps / 2` from the same
//! stream share every term. The reported bound covers the change from halving `eps`: it
//! adds twice the folded term to the absolute terms found by running a copy of the stream
//! further ahead.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::levy::StableLaw;
use crate::sbrep::DriftCase;

pub const DEFAULT_EPS: f64 = 1e-10;

// the look-ahead copy runs until the remainder is below eps * LOOKAHEAD
const LOOKAHEAD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitLaw {
    FiniteVariance,
    StableZeroMean,
    SmallIndex,
    PositiveDrift,
    NegativeDrift,
    CompareA,
    CompareB,
    CompareC,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitSample {
    pub law: LimitLaw,
    pub coords: Vec<f64>,
    pub eps: f64,
    pub truncation_bound: f64,
}

/// Standard normal from exactly two uniforms.
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let v: f64 = rng.sample(Open01);
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

struct SeriesOutcome<const K: usize> {
    sums: [f64; K],
    bounds: [f64; K],
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterDomain { name: "eps", value: eps })
    }
}

fn series<const K: usize, R, F, G>(rng: &mut R, eps: f64, mut term: F, fold: G) -> SeriesOutcome<K>
where
    R: Rng + Clone,
    F: FnMut(f64, &mut R) -> [f64; K],
    G: Fn(f64) -> [f64; K],
{
    let mut sums = [0.0; K];
    let mut rest = 1.0;
    while rest >= eps {
        let v: f64 = rng.sample(Open01);
        let piece = v * rest;
        rest -= piece;
        for (s, x) in sums.iter_mut().zip(term(piece, rng)) {
            *s += x;
        }
    }
    let tail = fold(rest);
    for (s, x) in sums.iter_mut().zip(tail) {
        *s += x;
    }

    let mut bounds = tail.map(|x| 2.0 * x.abs());
    let mut probe = rng.clone();
    let mut left = rest;
    while left >= eps * LOOKAHEAD {
        let v: f64 = probe.sample(Open01);
        let piece = v * left;
        left -= piece;
        for (b, x) in bounds.iter_mut().zip(term(piece, &mut probe)) {
            *b += x.abs();
        }
    }
    SeriesOutcome { sums, bounds }
}

/// `(B̄_1, B_1, ρ)` of a standard Brownian motion on `[0, 1]` and a bound per coordinate.
fn brownian_extremes<R: Rng + Clone>(rng: &mut R, eps: f64) -> SeriesOutcome<3> {
    let z_rest = gaussian(rng);
    series(
        rng,
        eps,
        |l, r| {
            let x = l.sqrt() * gaussian(r);
            [x.max(0.0), x, if x > 0.0 { l } else { 0.0 }]
        },
        |l| {
            let x = l.sqrt() * z_rest;
            [x.max(0.0), x, if x > 0.0 { l } else { 0.0 }]
        },
    )
}

/// `(σ²Z_1/√2, Z_2, σB̄_1, σB_1, ρ)`.
pub fn sample_limit_finite_variance<R: Rng + Clone>(sigma: f64, rng: &mut R, eps: f64) -> Result<LimitSample> {
    check_eps(eps)?;
    if !(sigma > 0.0) {
        return Err(Error::ParameterDomain { name: "sigma", value: sigma });
    }
    let z1 = gaussian(rng);
    let z2 = gaussian(rng);
    let b = brownian_extremes(rng, eps);
    let bound = (sigma * b.bounds[0]).max(sigma * b.bounds[1]).max(b.bounds[2]);
    Ok(LimitSample {
        law: LimitLaw::FiniteVariance,
        coords: alloc::vec![
            sigma * sigma / core::f64::consts::SQRT_2 * z1,
            z2,
            sigma * b.sums[0],
            sigma * b.sums[1],
            b.sums[2].min(1.0),
        ],
        eps,
        truncation_bound: bound,
    })
}

fn stable_series<const K: usize, R, F>(law: StableLaw, rng: &mut R, eps: f64, shape: F) -> SeriesOutcome<K>
where
    R: Rng + Clone,
    F: Fn(f64, f64) -> [f64; K],
{
    let s_rest = law.sample(rng);
    series(rng, eps, |l, r| shape(l, law.sample(r)), |l| shape(l, s_rest))
}

/// `(½Σℓ^{2/α-1}S², Σℓ^{1/α}S⁺, Σℓ^{1/α}S, Σℓ 1{S>0})` for `α ∈ (1, 2)`.
pub fn sample_limit_stable<R: Rng + Clone>(alpha: f64, beta: f64, rng: &mut R, eps: f64) -> Result<LimitSample> {
    check_eps(eps)?;
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::ParameterDomain { name: "alpha", value: alpha });
    }
    let law = StableLaw::new(alpha, beta)?;
    let out = stable_series(law, rng, eps, |l, s| {
        let x = l.powf(1.0 / alpha) * s;
        [0.5 * l.powf(2.0 / alpha - 1.0) * s * s, x.max(0.0), x, if s > 0.0 { l } else { 0.0 }]
    });
    Ok(LimitSample {
        law: LimitLaw::StableZeroMean,
        coords: alloc::vec![out.sums[0], out.sums[1], out.sums[2], out.sums[3].min(1.0)],
        eps,
        truncation_bound: out.bounds.iter().fold(0.0, |a: f64, &b| a.max(b)),
    })
}

/// `Q = ½Σℓ^{2/α-1}S²` rebuilt as `A Q' + B` with `A = L_1^{2/α-1}`,
/// `B = ½ℓ_1^{2/α-1}S²` and `Q'` an independent copy.
pub fn sample_perpetuity_step<R: Rng + Clone>(alpha: f64, beta: f64, rng: &mut R, eps: f64) -> Result<f64> {
    let law = StableLaw::new(alpha, beta)?;
    let v: f64 = rng.sample(Open01);
    let s = law.sample(rng);
    let inner = sample_limit_stable(alpha, beta, rng, eps)?.coords[0];
    let power = 2.0 / alpha - 1.0;
    Ok((1.0 - v).powf(power) * inner + 0.5 * v.powf(power) * s * s)
}

/// `2^{1-α/2} / (2 - α)`, the ratio of the tail of `Q` to that of `S²`.
pub fn perpetuity_tail_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::ParameterDomain { name: "alpha", value: alpha });
    }
    Ok(2f64.powf(1.0 - alpha / 2.0) / (2.0 - alpha))
}

/// `Λ¹ = (2S̄ - S, S̄, S, γ⌢)` and `Λ² = (S - 2S̲, S̲, S, γ⌣)` for `α ∈ (0, 1)`, both
/// from one stick sequence and one sequence of stable draws.
pub fn sample_limit_small_index<R: Rng + Clone>(alpha: f64, beta: f64, rng: &mut R, eps: f64) -> Result<LimitSample> {
    check_eps(eps)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParameterDomain { name: "alpha", value: alpha });
    }
    let law = StableLaw::new(alpha, beta)?;
    let out = stable_series(law, rng, eps, |l, s| {
        let x = l.powf(1.0 / alpha) * s;
        [
            x.max(0.0),
            x.min(0.0),
            x,
            if s > 0.0 { l } else { 0.0 },
            if s < 0.0 { l } else { 0.0 },
        ]
    });
    let [sup, inf, end, up_time, down_time] = out.sums;
    let b = out.bounds;
    Ok(LimitSample {
        law: LimitLaw::SmallIndex,
        coords: alloc::vec![2.0 * sup - end, sup, end, up_time.min(1.0), end - 2.0 * inf, inf, end, down_time.min(1.0)],
        eps,
        truncation_bound: (2.0 * b[0] + b[2]).max(2.0 * b[1] + b[2]).max(b[3]).max(b[4]),
    })
}

/// Nonzero drift. Case A gives `S(μ/√(1+μ²), 1, 1)`; case B gives
/// `(μS/√(1+μ²), NaN, S, NaN)`, the NaN coordinates being the supremum over all time
/// and its location, which have no series and must come from simulation.
/// `S` is `scale` times a standard stable draw.
pub fn sample_limit_drift<R: Rng + ?Sized>(
    alpha: f64,
    beta: f64,
    scale: f64,
    mu: f64,
    case: DriftCase,
    rng: &mut R,
) -> Result<LimitSample> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::ParameterDomain { name: "alpha", value: alpha });
    }
    match case {
        DriftCase::A if mu > 0.0 => {}
        DriftCase::B if mu < 0.0 => {}
        _ => return Err(Error::CaseMismatch),
    }
    let s = scale * StableLaw::new(alpha, beta)?.sample(rng);
    let c = mu / (1.0 + mu * mu).sqrt();
    let (law, coords) = match case {
        DriftCase::A => (LimitLaw::PositiveDrift, alloc::vec![c * s, s, s]),
        DriftCase::B => (LimitLaw::NegativeDrift, alloc::vec![c * s, f64::NAN, s, f64::NAN]),
    };
    Ok(LimitSample { law, coords, eps: 0.0, truncation_bound: 0.0 })
}

/// Parameters of the hut / majorant / tent comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompareCase {
    /// Finite variance `sigma²`.
    A { sigma: f64 },
    /// Stable index in (1, 2).
    B { alpha: f64, beta: f64 },
    /// Stable index in (0, 1).
    C { alpha: f64, beta: f64 },
}

/// Joint limit of the centred and scaled (hut, majorant, tent) lengths.
pub fn sample_limit_compare<R: Rng + Clone>(case: CompareCase, rng: &mut R, eps: f64) -> Result<LimitSample> {
    check_eps(eps)?;
    match case {
        CompareCase::A { sigma } => {
            if !(sigma > 0.0) {
                return Err(Error::ParameterDomain { name: "sigma", value: sigma });
            }
            let s2 = sigma * sigma;
            let z = gaussian(rng);
            loop {
                let b = brownian_extremes(rng, eps);
                let [sup, end, rho] = b.sums;
                let rho = rho.min(1.0);
                if rho <= 0.0 || rho >= 1.0 {
                    continue;
                }
                let hut = 0.5 * s2 * (sup * sup / rho + (sup - end).powi(2) / (1.0 - rho));
                let tent = sigma * (2.0 * sup - end);
                return Ok(LimitSample {
                    law: LimitLaw::CompareA,
                    coords: alloc::vec![hut, 0.75f64.sqrt() * s2 * z, tent],
                    eps,
                    truncation_bound: sigma * (2.0 * b.bounds[0] + b.bounds[1]),
                });
            }
        }
        CompareCase::B { alpha, beta } => {
            if !(alpha > 1.0 && alpha < 2.0) {
                return Err(Error::ParameterDomain { name: "alpha", value: alpha });
            }
            let law = StableLaw::new(alpha, beta)?;
            let out = stable_series(law, rng, eps, |l, s| {
                let x = l.powf(1.0 / alpha) * s;
                [x.max(0.0), (-x).max(0.0), 0.5 * l.powf(2.0 / alpha - 1.0) * s * s, x.abs()]
            });
            let [up, down, squares, total] = out.sums;
            let b = out.bounds;
            let hut_bound = up * b[0] + down * b[1] + 0.5 * (b[0] * b[0] + b[1] * b[1]);
            Ok(LimitSample {
                law: LimitLaw::CompareB,
                coords: alloc::vec![0.5 * up * up + 0.5 * down * down, squares, total],
                eps,
                truncation_bound: hut_bound.max(b[2]).max(b[3]),
            })
        }
        CompareCase::C { alpha, beta } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::ParameterDomain { name: "alpha", value: alpha });
            }
            let law = StableLaw::new(alpha, beta)?;
            let out = stable_series(law, rng, eps, |l, s| [l.powf(1.0 / alpha) * s.abs()]);
            let v = out.sums[0];
            Ok(LimitSample {
                law: LimitLaw::CompareC,
                coords: alloc::vec![v, v, v],
                eps,
                truncation_bound: out.bounds[0],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tail_constants() {
        assert!((perpetuity_tail_constant(1.5).unwrap() - 2.0 * 2f64.powf(0.25)).abs() < 1e-12);
        assert!((perpetuity_tail_constant(1.2).unwrap() - 2f64.powf(0.4) / 0.8).abs() < 1e-12);
        assert!((perpetuity_tail_constant(1.99).unwrap() - 100.0 * 2f64.powf(0.005)).abs() < 1e-9);
        assert!(perpetuity_tail_constant(2.0).is_err());
        assert!(perpetuity_tail_constant(0.5).is_err());
    }

    #[test]
    fn finite_variance_orderings() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let s = sample_limit_finite_variance(1.0, &mut rng, 1e-6).unwrap();
            assert_eq!(s.coords.len(), 5);
            assert!(s.coords[2] >= s.coords[3].max(0.0));
            assert!((0.0..=1.0).contains(&s.coords[4]));
            assert!(s.truncation_bound.is_finite());
        }
    }

    #[test]
    fn stable_orderings() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let s = sample_limit_stable(1.5, 0.0, &mut rng, 1e-6).unwrap();
            assert!(s.coords[0] >= 0.0);
            assert!(s.coords[1] >= s.coords[2].max(0.0));
            assert!((0.0..=1.0).contains(&s.coords[3]));
        }
    }

    #[test]
    fn small_index_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for beta in [0.0, 1.0] {
            for _ in 0..1000 {
                let c = sample_limit_small_index(0.5, beta, &mut rng, 1e-6).unwrap().coords;
                assert_eq!(c[0], 2.0 * c[1] - c[2]);
                assert!(c[1] >= 0.0 && c[5] <= 0.0);
                assert!(c[1] >= c[2]);
                assert!((0.0..=1.0).contains(&c[3]) && (0.0..=1.0).contains(&c[7]));
                if beta == 1.0 {
                    assert_eq!(c[5], 0.0);
                }
            }
        }
    }

    #[test]
    fn drift_limit_is_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mu = 1.0;
        let c = mu / 2f64.sqrt();
        for _ in 0..100 {
            let a = sample_limit_drift(2.0, 0.0, 1.0, mu, DriftCase::A, &mut rng).unwrap().coords;
            assert_eq!(a[0], c * a[1]);
            assert_eq!(a[1], a[2]);
            let b = sample_limit_drift(1.5, 0.0, 1.0, -2.0, DriftCase::B, &mut rng).unwrap().coords;
            assert!((b[0] / b[2] - (-2.0 / 5f64.sqrt())).abs() < 1e-12);
            assert!(b[1].is_nan() && b[3].is_nan());
        }
        assert_eq!(
            sample_limit_drift(2.0, 0.0, 1.0, -1.0, DriftCase::A, &mut rng),
            Err(Error::CaseMismatch)
        );
    }

    #[test]
    fn compare_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let a = sample_limit_compare(CompareCase::A { sigma: 1.3 }, &mut rng, 1e-6).unwrap();
            assert!(a.coords[0] >= 0.0);
            let c = sample_limit_compare(CompareCase::C { alpha: 0.5, beta: 0.0 }, &mut rng, 1e-6).unwrap();
            assert!(c.coords[0] == c.coords[1] && c.coords[1] == c.coords[2]);
            let b = sample_limit_compare(CompareCase::B { alpha: 1.5, beta: 0.0 }, &mut rng, 1e-6).unwrap();
            assert!(b.coords[1] >= 0.0);
        }
    }

    #[test]
    fn halving_eps_stays_within_bound() {
        for seed in 0..300 {
            let mut one = ChaCha8Rng::seed_from_u64(seed);
            let mut two = one.clone();
            let coarse = sample_limit_stable(1.5, 0.0, &mut one, 1e-4).unwrap();
            let fine = sample_limit_stable(1.5, 0.0, &mut two, 5e-5).unwrap();
            for (a, b) in coarse.coords.iter().zip(&fine.coords) {
                assert!((a - b).abs() <= coarse.truncation_bound * (1.0 + 1e-12) + 1e-15);
            }
        }
    }
}
