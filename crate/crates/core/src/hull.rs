//! Concave majorant and convex minorant of a path skeleton, as lists of faces.

use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::levy::PathSkeleton;

/// Default relative slope tolerance for merging faces.
pub const SLOPE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pub length: f64,
    pub height: f64,
}

impl Face {
    pub fn slope(&self) -> f64 {
        self.height / self.length
    }

    pub fn arc_length(&self) -> f64 {
        self.length.hypot(self.height)
    }
}

// > 0 when a lies strictly below the chord from o to b (times increasing)
fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn chain(times: &[f64], values: &[f64], upper: bool) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        let b = (times[i], values[i]);
        while stack.len() >= 2 {
            let o = stack[stack.len() - 2];
            let a = stack[stack.len() - 1];
            let c = cross((times[o], values[o]), (times[a], values[a]), b);
            if (upper && c > 0.0) || (!upper && c < 0.0) {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    stack
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::MalformedPath("need at least two points"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::MalformedPath("times must be strictly increasing"));
    }
    Ok(())
}

/// Indices of the upper hull vertices of `(times[i], values[i])`. Collinear points are
/// kept; [`merge_collinear`] removes them from the face list.
pub fn upper_hull(times: &[f64], values: &[f64]) -> Result<Vec<usize>> {
    check_times(times)?;
    Ok(chain(times, values, true))
}

/// Indices of the lower hull vertices, collinear points kept.
pub fn lower_hull(times: &[f64], values: &[f64]) -> Result<Vec<usize>> {
    check_times(times)?;
    Ok(chain(times, values, false))
}

fn faces_through(times: &[f64], values: &[f64], vertices: &[usize]) -> Vec<Face> {
    vertices
        .windows(2)
        .map(|w| Face { length: times[w[1]] - times[w[0]], height: values[w[1]] - values[w[0]] })
        .collect()
}

/// Faces of the smallest concave function above the path, in decreasing slope order.
///
/// For skeletons with jumps the hull is taken over `max(X_t, X_{t-})`, which
/// dominates the whole càdlàg path because it is linear between records.
pub fn concave_majorant(path: &PathSkeleton) -> Result<Vec<Face>> {
    let values = path.upper_envelope();
    let hull = upper_hull(path.times(), &values)?;
    Ok(merge_collinear(&faces_through(path.times(), &values, &hull), SLOPE_TOL))
}

/// Faces of the largest convex function below the path, in increasing slope order.
pub fn convex_minorant(path: &PathSkeleton) -> Result<Vec<Face>> {
    let values = path.lower_envelope();
    let hull = lower_hull(path.times(), &values)?;
    Ok(merge_collinear(&faces_through(path.times(), &values, &hull), SLOPE_TOL))
}

/// Merges neighbours whose slopes agree to `tol · (1 + |slope|)`.
pub fn merge_collinear(faces: &[Face], tol: f64) -> Vec<Face> {
    let mut out: Vec<Face> = Vec::with_capacity(faces.len());
    for &f in faces {
        if let Some(top) = out.last_mut() {
            let s = top.slope();
            if (s - f.slope()).abs() <= tol * (1.0 + s.abs()) {
                top.length += f.length;
                top.height += f.height;
                continue;
            }
        }
        out.push(f);
    }
    out
}

/// Value at time `t` of the piecewise-linear function starting at 0 with these faces.
pub fn evaluate(faces: &[Face], t: f64) -> f64 {
    let mut clock = 0.0;
    let mut level = 0.0;
    for f in faces {
        if t <= clock + f.length {
            return level + f.slope() * (t - clock);
        }
        clock += f.length;
        level += f.height;
    }
    level
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorantSummary {
    pub faces: Vec<Face>,
    pub horizon: f64,
    /// Arc length of the majorant.
    pub upsilon: f64,
    pub sup: f64,
    /// First time the supremum is attained.
    pub gamma: f64,
    pub final_value: f64,
    /// Number of maximal faces of length at least 1.
    pub h_count: usize,
    pub hut_length: f64,
    pub tent_length: f64,
}

/// Shape statistics of a concave majorant given by its faces.
pub fn shape_stats(faces: &[Face], horizon: f64) -> Result<MajorantSummary> {
    let total: f64 = faces.iter().map(|f| f.length).sum();
    if !((total - horizon).abs() <= 1e-9 * horizon) {
        return Err(Error::InconsistentFaces { total, horizon });
    }
    let mut upsilon = 0.0;
    let mut sup = 0.0;
    let mut gamma = 0.0;
    let mut final_value = 0.0;
    let mut h_count = 0;
    for f in faces {
        upsilon += f.arc_length();
        final_value += f.height;
        if f.height > 0.0 {
            sup += f.height;
            gamma += f.length;
        }
        if f.length >= 1.0 {
            h_count += 1;
        }
    }
    let level_or_down: f64 = faces.iter().filter(|f| f.height <= 0.0).map(|f| f.length).sum();
    let gamma = split_time(gamma, level_or_down, horizon);
    Ok(MajorantSummary {
        faces: faces.to_vec(),
        horizon,
        upsilon,
        sup,
        gamma,
        final_value,
        h_count,
        hut_length: hut_length(horizon, sup, gamma, final_value),
        tent_length: tent_length(horizon, sup, final_value),
    })
}

/// Time spent on one side, `inside`, given the time `outside` spent elsewhere: whichever
/// sum is shorter is trusted, so the endpoints 0 and `horizon` come out exactly.
pub fn split_time(inside: f64, outside: f64, horizon: f64) -> f64 {
    if inside <= outside {
        inside
    } else {
        horizon - outside
    }
}

/// Length of the two-segment path `(0,0) → (γ, sup) → (T, final)`.
pub fn hut_length(horizon: f64, sup: f64, gamma: f64, final_value: f64) -> f64 {
    gamma.hypot(sup) + (horizon - gamma).hypot(sup - final_value)
}

/// Length of the path `(0,0) → (0, sup) → (T, sup) → (T, final)`.
pub fn tent_length(horizon: f64, sup: f64, final_value: f64) -> f64 {
    horizon + 2.0 * sup - final_value
}

/// Infimum of a convex minorant and the first time it is attained.
pub fn minorant_extremum(faces: &[Face]) -> (f64, f64) {
    faces
        .iter()
        .filter(|f| f.height < 0.0)
        .fold((0.0, 0.0), |(inf, time), f| (inf + f.height, time + f.length))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path(ts: &[f64], xs: &[f64]) -> PathSkeleton {
        PathSkeleton::new(ts.to_vec(), xs.to_vec()).unwrap()
    }

    #[test]
    fn four_point_example() {
        let p = path(&[0.0, 1.0, 2.0, 3.0], &[0.0, 2.0, 1.0, 3.0]);
        let maj = concave_majorant(&p).unwrap();
        assert_eq!(maj, vec![Face { length: 1.0, height: 2.0 }, Face { length: 2.0, height: 1.0 }]);
        let min = convex_minorant(&p).unwrap();
        assert_eq!(min, vec![Face { length: 2.0, height: 1.0 }, Face { length: 1.0, height: 2.0 }]);
    }

    #[test]
    fn linear_paths_have_one_face() {
        let mu = 0.3;
        let p = path(&[0.0, 1.0, 2.0], &[0.0, mu, 2.0 * mu]);
        assert_eq!(concave_majorant(&p).unwrap(), vec![Face { length: 2.0, height: 2.0 * mu }]);
        assert_eq!(convex_minorant(&p).unwrap().len(), 1);
        let p = path(&[0.0, 1.0], &[0.0, -1.0]);
        assert_eq!(concave_majorant(&p).unwrap(), vec![Face { length: 1.0, height: -1.0 }]);
    }

    #[test]
    fn merging() {
        let f = |l, h| Face { length: l, height: h };
        assert_eq!(
            merge_collinear(&[f(1.0, 2.0), f(1.0, 2.0), f(2.0, 1.0)], 1e-12),
            vec![f(2.0, 4.0), f(2.0, 1.0)]
        );
        assert_eq!(merge_collinear(&[f(1.0, 2.0), f(2.0, 1.0)], 1e-12), vec![f(1.0, 2.0), f(2.0, 1.0)]);
    }

    #[test]
    fn summary_example() {
        let faces = [Face { length: 1.0, height: 2.0 }, Face { length: 2.0, height: -1.0 }];
        let s = shape_stats(&faces, 3.0).unwrap();
        let r5 = 5f64.sqrt();
        assert!((s.upsilon - 2.0 * r5).abs() < 1e-14);
        assert_eq!((s.sup, s.gamma, s.final_value), (2.0, 1.0, 1.0));
        assert_eq!(s.tent_length, 6.0);
        assert!((s.hut_length - 2.0 * r5).abs() < 1e-14);
        assert_eq!(s.h_count, 2);
    }

    #[test]
    fn single_face_summary() {
        for mu in [-0.7, 0.0, 1.3] {
            let t = 4.0;
            let s = shape_stats(&[Face { length: t, height: mu * t }], t).unwrap();
            assert!((s.upsilon - t * (1.0 + mu * mu).sqrt()).abs() < 1e-12);
            assert_eq!(s.sup, (mu * t).max(0.0));
            assert_eq!(s.gamma, if mu > 0.0 { t } else { 0.0 });
            assert_eq!(s.tent_length, t + 2.0 * (mu * t).max(0.0) - mu * t);
        }
    }

    #[test]
    fn conservation_is_checked() {
        let faces = [Face { length: 1.0, height: 2.0 }];
        assert!(matches!(shape_stats(&faces, 3.0), Err(Error::InconsistentFaces { .. })));
    }

    #[test]
    fn evaluation() {
        let faces = [Face { length: 1.0, height: 2.0 }, Face { length: 2.0, height: 1.0 }];
        assert_eq!(evaluate(&faces, 0.0), 0.0);
        assert_eq!(evaluate(&faces, 0.5), 1.0);
        assert_eq!(evaluate(&faces, 2.0), 2.5);
        assert_eq!(evaluate(&faces, 3.0), 3.0);
    }

    #[test]
    fn jump_skeleton_uses_pre_jump_values() {
        // drift 1 up to t = 1, then a jump of -5
        let p = PathSkeleton::with_jumps(vec![0.0, 1.0, 2.0], vec![0.0, -4.0, -3.0], vec![0.0, 1.0, -3.0]).unwrap();
        let maj = concave_majorant(&p).unwrap();
        assert_eq!(maj, vec![Face { length: 1.0, height: 1.0 }, Face { length: 1.0, height: -4.0 }]);
        let min = convex_minorant(&p).unwrap();
        assert_eq!(min, vec![Face { length: 1.0, height: -4.0 }, Face { length: 1.0, height: 1.0 }]);
        assert_eq!(minorant_extremum(&min), (-4.0, 1.0));
    }
}
