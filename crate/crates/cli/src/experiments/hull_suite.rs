//! Invariants of the hull routines on random small paths, and an exhaustive oracle on
//! ten-point integer paths.

use majorant_core::hull::{concave_majorant, convex_minorant, evaluate, shape_stats, Face};
use majorant_core::levy::PathSkeleton;
use majorant_core::stream::RandomStream;
use rand::Rng;

use super::{unknown_mode, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{ConfigError, RunError};
use crate::report::{RowSink, Verdict};
use crate::runner::Replicator;

const TAG: &str = "hull-suite";
const TOL: f64 = 1e-9;
const ORACLE_POINTS: usize = 10;

pub struct Plan {
    reps: usize,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan, ConfigError> {
    if config.mode.is_some() {
        return Err(unknown_mode(config));
    }
    Ok(Plan { reps: config.reps })
}

#[derive(Debug, Default, Clone, Copy)]
struct Violations {
    domination: u32,
    conservation: u32,
    slopes: u32,
    sandwich: u32,
    duality: u32,
}

fn random_path(rng: &mut RandomStream) -> PathSkeleton {
    let n = rng.random_range(2..=30);
    let lattice = rng.random_bool(0.5);
    let mut times = vec![0.0];
    let mut values = vec![0.0];
    for _ in 1..n {
        let (dt, dx) = if lattice {
            (rng.random_range(1..=3) as f64, rng.random_range(-3..=3) as f64)
        } else {
            (rng.random_range(0.01..2.0), rng.random_range(-2.0..2.0))
        };
        times.push(times.last().unwrap() + dt);
        values.push(values.last().unwrap() + dx);
    }
    if rng.random_bool(0.3) {
        let mut left = values.clone();
        for i in 1..n - 1 {
            left[i] = values[i] + rng.random_range(-2.0..2.0);
        }
        PathSkeleton::with_jumps(times, values, left).expect("continuous at the ends")
    } else {
        PathSkeleton::new(times, values).expect("well-formed")
    }
}

fn check(path: &PathSkeleton) -> Result<Violations, majorant_core::Error> {
    let mut v = Violations::default();
    let horizon = path.horizon();
    let faces = concave_majorant(path)?;
    let upper = path.upper_envelope();
    let scale = 1.0 + upper.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    if path.times().iter().zip(&upper).any(|(&t, &x)| evaluate(&faces, t) < x - TOL * scale) {
        v.domination += 1;
    }
    let length: f64 = faces.iter().map(|f| f.length).sum();
    let height: f64 = faces.iter().map(|f| f.height).sum();
    if (length - horizon).abs() > TOL * horizon || (height - path.final_value()).abs() > TOL * scale {
        v.conservation += 1;
    }
    if faces.windows(2).any(|w| !(w[1].slope() < w[0].slope())) {
        v.slopes += 1;
    }
    let s = shape_stats(&faces, horizon)?;
    let floor = 2.0 * s.sup - s.final_value;
    let slack = TOL * (horizon + scale);
    let sandwiched = floor <= s.upsilon + slack
        && s.upsilon <= horizon + floor + slack
        && s.hut_length <= s.upsilon + slack
        && s.upsilon <= s.tent_length + slack;
    if !sandwiched {
        v.sandwich += 1;
    }
    let mirrored: Vec<Face> =
        concave_majorant(&path.negated())?.iter().map(|f| Face { length: f.length, height: -f.height }).collect();
    let minorant = convex_minorant(path)?;
    let same = mirrored.len() == minorant.len()
        && mirrored.iter().zip(&minorant).all(|(a, b)| {
            (a.length - b.length).abs() <= TOL * horizon && (a.height - b.height).abs() <= TOL * scale
        });
    if !same {
        v.duality += 1;
    }
    Ok(v)
}

// (b - a) x (c - a) on integer points; > 0 when b is strictly below the chord a → c
fn cross(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Corner indices of the concave majorant of integer points, found by trying every
/// subset of interior points as the vertex set.
fn brute_force_corners(pts: &[(i64, i64)]) -> Vec<usize> {
    let n = pts.len();
    let interior = n - 2;
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << interior) {
        let mut vs = vec![0];
        vs.extend((0..interior).filter(|i| mask & (1 << i) != 0).map(|i| i + 1));
        vs.push(n - 1);
        // strictly concave at every chosen interior vertex
        if vs.windows(3).any(|w| cross(pts[w[0]], pts[w[1]], pts[w[2]]) >= 0) {
            continue;
        }
        // every point on or below its segment
        let dominated = (0..n).all(|i| {
            let k = vs.windows(2).position(|w| pts[w[0]].0 <= pts[i].0 && pts[i].0 <= pts[w[1]].0).unwrap();
            cross(pts[vs[k]], pts[i], pts[vs[k + 1]]) >= 0
        });
        if dominated && best.as_ref().is_none_or(|b| vs.len() < b.len()) {
            best = Some(vs);
        }
    }
    best.expect("the majorant always has a vertex set")
}

fn oracle_case(rng: &mut RandomStream) -> Result<bool, majorant_core::Error> {
    let mut pts = vec![(0i64, 0i64)];
    for _ in 1..ORACLE_POINTS {
        let (t, x) = *pts.last().unwrap();
        pts.push((t + rng.random_range(1..=3), x + rng.random_range(-4..=4)));
    }
    let times: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
    let values: Vec<f64> = pts.iter().map(|p| p.1 as f64).collect();
    let faces = concave_majorant(&PathSkeleton::new(times.clone(), values)?)?;
    let mut corners = vec![0];
    let mut clock = 0.0;
    for f in &faces {
        clock += f.length;
        match times.iter().position(|&t| t == clock) {
            Some(i) => corners.push(i),
            None => return Ok(false),
        }
    }
    Ok(corners == brute_force_corners(&pts))
}

pub fn run(plan: &Plan, rep: &Replicator) -> Result<Outcome, RunError> {
    let mut sink = RowSink::new(TAG);
    let found = rep.run("random-paths", plan.reps, |rng, _| check(&random_path(rng)))?;
    let total = found.iter().fold(Violations::default(), |a, b| Violations {
        domination: a.domination + b.domination,
        conservation: a.conservation + b.conservation,
        slopes: a.slopes + b.slopes,
        sandwich: a.sandwich + b.sandwich,
        duality: a.duality + b.duality,
    });
    for (name, count) in [
        ("domination_violations", total.domination),
        ("conservation_violations", total.conservation),
        ("slope_order_violations", total.slopes),
        ("sandwich_violations", total.sandwich),
        ("duality_violations", total.duality),
    ] {
        sink.push(None, name, count as f64, None, None, format!("=0 over {} paths", plan.reps), Verdict::from_bool(count == 0));
    }
    let oracle_reps = (plan.reps / 5).max(100);
    let agree = rep.run("oracle", oracle_reps, |rng, _| oracle_case(rng))?;
    let mismatches = agree.iter().filter(|ok| !**ok).count();
    sink.push(
        None,
        "oracle_mismatches",
        mismatches as f64,
        None,
        None,
        format!("=0 over {oracle_reps} ten-point paths"),
        Verdict::from_bool(mismatches == 0),
    );
    Ok(Outcome { rows: sink.rows, ..Outcome::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_drops_collinear_points() {
        let pts = [(0, 0), (1, 1), (2, 2), (3, 0)];
        assert_eq!(brute_force_corners(&pts), vec![0, 2, 3]);
        let pts = [(0, 0), (1, -1), (2, 0)];
        assert_eq!(brute_force_corners(&pts), vec![0, 2]);
    }
}
