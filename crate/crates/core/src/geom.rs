//! Planar geometric predicates and sign-change root localization.
//!
//! Event detection works by evaluating smooth determinant predicates
//! along each time segment and localizing their sign changes by
//! bisection. Degeneracies (exact zeros at evaluation nodes) are
//! reported, never repaired.

/// Evaluation nodes per segment when scanning for sign changes.
pub const SCAN_GRID: usize = 32;

/// Bisection depth used to localize a bracketed root.
pub const BISECTION_DEPTH: usize = 48;

/// Two event times closer than this (anywhere in the motion) violate
/// the isolation requirement.
pub const EVENT_ISOLATION: f64 = 1e-12;

/// Orientation of the triangle `(p, q, r)`: positive when `r` lies to
/// the left of the directed line `p -> q`.
pub fn orient(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
}

/// Lifted-paraboloid cocircularity determinant of `(a, b, c, d)`:
/// zero exactly when the four points lie on a common circle or line.
pub fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    let row = |p: [f64; 2]| {
        let (x, y) = (p[0] - d[0], p[1] - d[1]);
        [x, y, x * x + y * y]
    };
    let (ra, rb, rc) = (row(a), row(b), row(c));
    ra[0] * (rb[1] * rc[2] - rb[2] * rc[1]) - ra[1] * (rb[0] * rc[2] - rb[2] * rc[0])
        + ra[2] * (rb[0] * rc[1] - rb[1] * rc[0])
}

/// Circumcircle of three points as `(center, radius)`; `None` when
/// the points are (numerically) collinear.
pub fn circumcircle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<([f64; 2], f64)> {
    let d = 2.0 * orient(a, b, c);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let na = a[0] * a[0] + a[1] * a[1];
    let nb = b[0] * b[0] + b[1] * b[1];
    let nc = c[0] * c[0] + c[1] * c[1];
    let ux = (na * (b[1] - c[1]) + nb * (c[1] - a[1]) + nc * (a[1] - b[1])) / d;
    let uy = (na * (c[0] - b[0]) + nb * (a[0] - c[0]) + nc * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    if !r.is_finite() {
        return None;
    }
    Some(([ux, uy], r))
}

/// A degeneracy found while scanning for roots: the predicate was
/// exactly zero at an evaluation node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactZero {
    pub t: f64,
}

/// All sign-change roots of `f` on `[t0, t1]`, localized by scanning
/// [`SCAN_GRID`] cells and bisecting each bracket [`BISECTION_DEPTH`]
/// times. Errors when `f` is exactly zero at any evaluation node
/// (including the segment endpoints, which are trajectory samples).
pub fn segment_roots<F: Fn(f64) -> f64>(f: &F, t0: f64, t1: f64) -> Result<Vec<f64>, ExactZero> {
    let mut nodes = Vec::with_capacity(SCAN_GRID + 1);
    for s in 0..=SCAN_GRID {
        let t = t0 + (t1 - t0) * (s as f64) / (SCAN_GRID as f64);
        let v = f(t);
        if v == 0.0 {
            return Err(ExactZero { t });
        }
        nodes.push((t, v));
    }
    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        let ((mut lo, vlo), (mut hi, _)) = (w[0], w[1]);
        if vlo.signum() == w[1].1.signum() {
            continue;
        }
        let mut vlo = vlo;
        for _ in 0..BISECTION_DEPTH {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // float resolution reached
            }
            let vm = f(mid);
            if vm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if vm.signum() == vlo.signum() {
                lo = mid;
                vlo = vm;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    Ok(roots)
}

/// A linear sign-change root: exact interpolation when `f` is linear
/// on the segment, as for coordinate differences of linearly
/// interpolated points. Returns `None` when there is no sign change;
/// errors on an exact zero at either endpoint.
pub fn linear_root(v0: f64, v1: f64, t0: f64, t1: f64) -> Result<Option<f64>, ExactZero> {
    if v0 == 0.0 {
        return Err(ExactZero { t: t0 });
    }
    if v1 == 0.0 {
        return Err(ExactZero { t: t1 });
    }
    if v0.signum() == v1.signum() {
        return Ok(None);
    }
    Ok(Some(t0 + (t1 - t0) * (v0 / (v0 - v1))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        assert!(orient([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]) > 0.0);
        assert!(orient([0.0, 0.0], [1.0, 0.0], [0.0, -1.0]) < 0.0);
        assert_eq!(orient([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]), 0.0);
    }

    #[test]
    fn incircle_signs() {
        let (a, b, c) = ([0.0, 0.0], [2.0, 0.0], [0.0, 2.0]);
        // (1,1) is the circumcenter, comfortably inside.
        let inside = incircle(a, b, c, [1.0, 1.0]);
        let outside = incircle(a, b, c, [5.0, 5.0]);
        assert!(inside != 0.0 && outside != 0.0);
        assert!(inside.signum() != outside.signum());
        // A cocircular fourth point: (2,2) lies on the circle through
        // the three right-angle corners.
        assert!(incircle(a, b, c, [2.0, 2.0]).abs() < 1e-9);
    }

    #[test]
    fn circumcircle_of_right_triangle() {
        let (center, r) = circumcircle([0.0, 0.0], [2.0, 0.0], [0.0, 2.0]).unwrap();
        assert!((center[0] - 1.0).abs() < 1e-12);
        assert!((center[1] - 1.0).abs() < 1e-12);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(circumcircle([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]).is_none());
    }

    #[test]
    fn roots_of_a_quadratic() {
        // f(t) = (t - 0.3)(t - 0.7) has two roots in [0, 1], neither
        // on a dyadic scan node.
        let f = |t: f64| (t - 0.3) * (t - 0.7);
        let roots = segment_roots(&f, 0.0, 1.0).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.3).abs() < 1e-12);
        assert!((roots[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn exact_zero_at_node_is_reported() {
        let f = |t: f64| t - 0.5; // zero exactly at a grid node
        assert!(segment_roots(&f, 0.0, 1.0).is_err());
        assert!(linear_root(0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn linear_root_interpolates_exactly() {
        let r = linear_root(-1.0, 3.0, 0.0, 1.0).unwrap().unwrap();
        assert!((r - 0.25).abs() < 1e-15);
        assert!(linear_root(1.0, 3.0, 0.0, 1.0).unwrap().is_none());
    }
}
