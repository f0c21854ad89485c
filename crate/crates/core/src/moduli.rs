//! Loops of hyperplane arrangements and their descent to spherical
//! point trajectories.
//!
//! A [`HyperplaneLoop`] is a time-sampled family of n hyperplanes in
//! complex projective space CP^{m+1}, each given by a nonzero complex
//! covector up to scale. [`validate`] certifies the general-position
//! conditions (every m+2 of the hyperplanes independent, at every
//! sample). [`HyperplaneLoop::restrict`] realizes the restriction to
//! a moving hyperplane via central projection from a fixed generic
//! point, dropping to n−1 hyperplanes in CP^m; iterating lands at
//! m = 1, where hyperplanes in CP¹ are points and
//! [`HyperplaneLoop::base_points`] hands off a spherical trajectory
//! to the tracker. [`HyperplaneLoop::descend`] drives the whole tower
//! with seeded, rejection-sampled projection points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combi::k_subsets;
use crate::tracker::{TrackError, Trajectory};

/// Default tolerance on normalized general-position determinants.
pub const VALIDATE_TOL: f64 = 1e-9;
/// Minimum normalized pairing |α_i(t)·p| accepted when sampling a
/// projection point.
pub const PROJECTION_MARGIN: f64 = 1e-6;
/// Rejection-sampling attempts before giving up on a projection point.
pub const MAX_PROJECTION_ATTEMPTS: u32 = 64;
/// Maximum projective distance between consecutive samples of one
/// hyperplane (continuity of the sampled loop).
pub const STEP_BOUND: f64 = 0.5;
/// Loop-closure tolerance (projective distance).
pub const MODULI_CLOSURE_TOL: f64 = 1e-9;
/// Two hyperplanes closer than this (projectively) at a sample make
/// the input malformed.
pub const DISTINCTNESS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ModuliError {
    #[error("bad hyperplane loop: {0}")]
    BadLoop(String),
    #[error("level {level} (n = {n}, m = {m}): {what}")]
    Level {
        level: usize,
        n: u8,
        m: u8,
        what: String,
    },
    #[error("projection point: {0}")]
    ProjectionPoint(String),
    #[error(transparent)]
    Track(#[from] TrackError),
}

/// A first general-position violation: the sample time, the
/// hyperplane labels of the degenerate subset, and its margin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub time: f64,
    pub subset: Vec<u8>,
    pub margin: f64,
}

/// Outcome of [`validate`]: the smallest normalized determinant over
/// all (m+2)-subsets and samples, and the first sub-tolerance
/// violation if any.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliCertificate {
    pub min_margin: f64,
    pub tolerance: f64,
    pub violated: Option<Violation>,
}

impl ModuliCertificate {
    pub fn is_valid(&self) -> bool {
        self.violated.is_none()
    }
}

/// A time-sampled loop of `n` hyperplanes in CP^{m+1}, each a nonzero
/// complex (m+2)-covector up to scale.
///
/// JSON shape: `{n, m, times, covectors, loop}` with
/// `covectors[h][s][l] = [re, im]` the l-th coordinate of hyperplane
/// `h+1` at sample instant `times[s]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHyperplaneLoop", into = "RawHyperplaneLoop")]
pub struct HyperplaneLoop {
    n: u8,
    m: u8,
    times: Vec<f64>,
    covectors: Vec<Vec<Vec<Complex64>>>,
    is_loop: bool,
}

/// Serde mirror of [`HyperplaneLoop`]: the literal JSON document
/// shape (`covectors[h][s][l] = [re, im]`), before any invariant is
/// checked. Deserializing this type can only fail on syntax or schema
/// problems; converting it with `try_into` runs the semantic
/// validation.
#[derive(Serialize, Deserialize)]
pub struct RawHyperplaneLoop {
    pub n: u8,
    pub m: u8,
    pub times: Vec<f64>,
    pub covectors: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "loop", default)]
    pub is_loop: bool,
}

impl TryFrom<RawHyperplaneLoop> for HyperplaneLoop {
    type Error = ModuliError;

    fn try_from(raw: RawHyperplaneLoop) -> Result<Self, ModuliError> {
        let covectors = raw
            .covectors
            .iter()
            .map(|per_time| {
                per_time
                    .iter()
                    .map(|cov| cov.iter().map(|c| Complex64::new(c[0], c[1])).collect())
                    .collect()
            })
            .collect();
        HyperplaneLoop::new(raw.n, raw.m, raw.times, covectors, raw.is_loop)
    }
}

impl From<HyperplaneLoop> for RawHyperplaneLoop {
    fn from(lp: HyperplaneLoop) -> RawHyperplaneLoop {
        RawHyperplaneLoop {
            n: lp.n,
            m: lp.m,
            times: lp.times,
            covectors: lp
                .covectors
                .iter()
                .map(|per_time| {
                    per_time
                        .iter()
                        .map(|cov| cov.iter().map(|c| [c.re, c.im]).collect())
                        .collect()
                })
                .collect(),
            is_loop: lp.is_loop,
        }
    }
}

fn cnorm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Bilinear pairing of a covector with a point (no conjugation).
fn pair(cov: &[Complex64], p: &[Complex64]) -> Complex64 {
    cov.iter().zip(p).map(|(a, b)| a * b).sum()
}

/// Chordal projective distance between the classes of two nonzero
/// complex vectors: sin of the Fubini–Study angle, in [0, 1].
/// Computed as the norm of the component of b orthogonal to a, which
/// is stable near zero (no cancellation of order-one terms).
pub fn proj_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    let (na, nb) = (cnorm(a), cnorm(b));
    let h: Complex64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x / na).conj() * (y / nb))
        .sum();
    let residual: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (y / nb - h * (x / na)).norm_sqr())
        .sum();
    residual.sqrt().min(1.0)
}

/// Determinant of a square complex matrix by Gaussian elimination
/// with partial pivoting.
pub fn det(mut mat: Vec<Vec<Complex64>>) -> Complex64 {
    let k = mat.len();
    let mut sign = Complex64::new(1.0, 0.0);
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&a, &b| {
                mat[a][col]
                    .norm_sqr()
                    .partial_cmp(&mat[b][col].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if mat[piv][col].norm_sqr() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            mat.swap(piv, col);
            sign = -sign;
        }
        for row in (col + 1)..k {
            let f = mat[row][col] / mat[col][col];
            for c2 in col..k {
                let sub = f * mat[col][c2];
                mat[row][c2] -= sub;
            }
        }
    }
    let mut d = sign;
    for (c, row) in mat.iter().enumerate() {
        d *= row[c];
    }
    d
}

/// Intersection point of two lines in CP² given by covectors, via the
/// complex cross product (bilinear, so `pair(a, cross(a, b)) = 0`).
pub fn line_intersection(a: &[Complex64], b: &[Complex64]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl HyperplaneLoop {
    pub fn new(
        n: u8,
        m: u8,
        times: Vec<f64>,
        covectors: Vec<Vec<Vec<Complex64>>>,
        is_loop: bool,
    ) -> Result<Self, ModuliError> {
        let dim = m as usize + 2;
        if (n as usize) < dim {
            return Err(ModuliError::BadLoop(format!(
                "need at least m + 2 = {dim} hyperplanes, got {n}"
            )));
        }
        if n > 16 {
            return Err(ModuliError::BadLoop(format!(
                "hyperplane count {n} exceeds 16"
            )));
        }
        if times.len() < 2 {
            return Err(ModuliError::BadLoop(
                "need at least two sample instants".into(),
            ));
        }
        if times.iter().any(|t| !t.is_finite() || *t < 0.0 || *t > 1.0) {
            return Err(ModuliError::BadLoop(
                "sample instants must lie in [0, 1]".into(),
            ));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModuliError::BadLoop(
                "sample instants must be strictly increasing".into(),
            ));
        }
        if covectors.len() != n as usize {
            return Err(ModuliError::BadLoop(format!(
                "{} covector tracks for {} hyperplanes",
                covectors.len(),
                n
            )));
        }
        for (h, track) in covectors.iter().enumerate() {
            if track.len() != times.len() {
                return Err(ModuliError::BadLoop(format!(
                    "hyperplane {} has {} samples, expected {}",
                    h + 1,
                    track.len(),
                    times.len()
                )));
            }
            for (s, cov) in track.iter().enumerate() {
                if cov.len() != dim {
                    return Err(ModuliError::BadLoop(format!(
                        "hyperplane {} at sample {} has {} coordinates, expected {}",
                        h + 1,
                        s,
                        cov.len(),
                        dim
                    )));
                }
                if cov.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                    return Err(ModuliError::BadLoop(format!(
                        "hyperplane {} at sample {} has a non-finite coordinate",
                        h + 1,
                        s
                    )));
                }
                if cnorm(cov) < 1e-300 {
                    return Err(ModuliError::BadLoop(format!(
                        "hyperplane {} at sample {} is the zero covector",
                        h + 1,
                        s
                    )));
                }
            }
            for s in 0..track.len() - 1 {
                let d = proj_dist(&track[s], &track[s + 1]);
                if d > STEP_BOUND {
                    return Err(ModuliError::BadLoop(format!(
                        "hyperplane {} jumps by projective distance {d:.3} between samples {} and {}",
                        h + 1,
                        s,
                        s + 1
                    )));
                }
            }
            if is_loop {
                let d = proj_dist(&track[track.len() - 1], &track[0]);
                if d > MODULI_CLOSURE_TOL {
                    return Err(ModuliError::BadLoop(format!(
                        "hyperplane {} does not close (projective deviation {d:.3e})",
                        h + 1
                    )));
                }
            }
        }
        for s in 0..times.len() {
            for i in 0..n as usize {
                for j in (i + 1)..n as usize {
                    if proj_dist(&covectors[i][s], &covectors[j][s]) < DISTINCTNESS_TOL {
                        return Err(ModuliError::BadLoop(format!(
                            "hyperplanes {} and {} coincide at sample {}",
                            i + 1,
                            j + 1,
                            s
                        )));
                    }
                }
            }
        }
        Ok(HyperplaneLoop {
            n,
            m,
            times,
            covectors,
            is_loop,
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn is_loop(&self) -> bool {
        self.is_loop
    }

    /// Covector of hyperplane `h` (0-based) at sample `s`.
    pub fn covector(&self, h: usize, s: usize) -> &[Complex64] {
        &self.covectors[h][s]
    }

    /// Restriction to hyperplane `i` (1-based) by central projection
    /// from the fixed point `p`: each other hyperplane j is replaced
    /// by β_j(t) = α_j(t) − (α_j(t)·p / α_i(t)·p)·α_i(t), which
    /// vanishes on p and therefore descends to a covector on the
    /// quotient space. The quotient is coordinatized once and for all
    /// by dropping the coordinate where |p| is largest. The result
    /// has n−1 hyperplanes in CP^m (labels shifted past i, order
    /// preserved).
    pub fn restrict(&self, i: u8, p: &[Complex64]) -> Result<HyperplaneLoop, ModuliError> {
        let dim = self.m as usize + 2;
        if self.m == 0 {
            return Err(ModuliError::BadLoop(
                "cannot restrict below hyperplanes in CP^1".into(),
            ));
        }
        if i == 0 || i > self.n {
            return Err(ModuliError::BadLoop(format!(
                "restriction index {i} out of range 1..={}",
                self.n
            )));
        }
        if p.len() != dim {
            return Err(ModuliError::ProjectionPoint(format!(
                "projection point has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        let np = cnorm(p);
        if np < 1e-300 {
            return Err(ModuliError::ProjectionPoint("zero projection point".into()));
        }
        let margin = self.projection_margin(i, p);
        if margin < DISTINCTNESS_TOL {
            return Err(ModuliError::ProjectionPoint(format!(
                "projection point lies on hyperplane {i} (margin {margin:.3e})"
            )));
        }
        let drop = (0..dim)
            .max_by(|&a, &b| p[a].norm_sqr().partial_cmp(&p[b].norm_sqr()).unwrap())
            .unwrap();
        let hi = i as usize - 1;
        let mut covectors = Vec::with_capacity(self.n as usize - 1);
        for j in 0..self.n as usize {
            if j == hi {
                continue;
            }
            let mut track = Vec::with_capacity(self.times.len());
            for s in 0..self.times.len() {
                let (aj, ai) = (&self.covectors[j][s], &self.covectors[hi][s]);
                let c = pair(aj, p) / pair(ai, p);
                let beta: Vec<Complex64> = (0..dim)
                    .filter(|&l| l != drop)
                    .map(|l| aj[l] - c * ai[l])
                    .collect();
                track.push(beta);
            }
            covectors.push(track);
        }
        HyperplaneLoop::new(
            self.n - 1,
            self.m - 1,
            self.times.clone(),
            covectors,
            self.is_loop,
        )
    }

    /// Smallest normalized pairing |α_i(t)·p| / (|α_i(t)||p|) over all
    /// samples: how far `p` stays from hyperplane `i` (1-based).
    pub fn projection_margin(&self, i: u8, p: &[Complex64]) -> f64 {
        let np = cnorm(p);
        self.covectors[i as usize - 1]
            .iter()
            .map(|cov| pair(cov, p).norm() / (cnorm(cov) * np))
            .fold(f64::INFINITY, f64::min)
    }

    /// For m = 1: restrict to hyperplane `i`, then send each of the
    /// n−1 restricted covectors (on CP¹) to its kernel point on the
    /// unit sphere via the Riemann-sphere map of the ratio coordinate.
    /// Point order follows the original hyperplane labels with `i`
    /// dropped.
    pub fn base_points(&self, i: u8, p: &[Complex64]) -> Result<Trajectory, ModuliError> {
        if self.m != 1 {
            return Err(ModuliError::BadLoop(format!(
                "base points need hyperplanes in CP^2 (m = 1), got m = {}",
                self.m
            )));
        }
        let restricted = self.restrict(i, p)?;
        let mut points = vec![Vec::with_capacity(restricted.n as usize); self.times.len()];
        for h in 0..restricted.n as usize {
            for (s, row) in points.iter_mut().enumerate() {
                let beta = &restricted.covectors[h][s];
                // Kernel of (β₀, β₁) is [x₀ : x₁] = [−β₁ : β₀].
                let (x0, x1) = (-beta[1], beta[0]);
                let w = x0.conj() * x1;
                let denom = x0.norm_sqr() + x1.norm_sqr();
                row.push([
                    2.0 * w.re / denom,
                    2.0 * w.im / denom,
                    (x1.norm_sqr() - x0.norm_sqr()) / denom,
                ]);
            }
        }
        Ok(Trajectory::sphere(
            self.times.clone(),
            points,
            self.is_loop,
        )?)
    }

    /// Drives the full descent tower: at each level the loop is
    /// validated, a projection point is rejection-sampled from the
    /// seeded generator until its margin clears
    /// [`PROJECTION_MARGIN`], and the loop is restricted at the
    /// route's index for that level; the last level (m = 1) hands off
    /// to [`HyperplaneLoop::base_points`]. The route lists one
    /// 1-based index per level, relative to the relabelled loop at
    /// that level.
    pub fn descend(&self, route: &[u8], seed: u64, tol: f64) -> Result<Descent, ModuliError> {
        if route.len() != self.m as usize {
            return Err(ModuliError::BadLoop(format!(
                "route has {} entries, expected m = {}",
                route.len(),
                self.m
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut current = self.clone();
        let mut levels = Vec::with_capacity(route.len());
        for (level, &index) in route.iter().enumerate() {
            let certificate = validate(&current, tol);
            if let Some(v) = &certificate.violated {
                return Err(ModuliError::Level {
                    level,
                    n: current.n,
                    m: current.m,
                    what: format!(
                        "general position fails for {:?} at t = {} (margin {:.3e} < {tol:.3e})",
                        v.subset, v.time, v.margin
                    ),
                });
            }
            if index == 0 || index > current.n {
                return Err(ModuliError::Level {
                    level,
                    n: current.n,
                    m: current.m,
                    what: format!("route index {index} out of range 1..={}", current.n),
                });
            }
            let (point, margin, attempts) =
                sample_projection_point(&current, index, &mut rng).map_err(|what| {
                    ModuliError::Level {
                        level,
                        n: current.n,
                        m: current.m,
                        what,
                    }
                })?;
            let record = DescentLevel {
                n: current.n,
                m: current.m,
                index,
                certificate,
                projection_margin: margin,
                attempts,
            };
            if current.m == 1 {
                let trajectory = current.base_points(index, &point)?;
                levels.push(record);
                return Ok(Descent { levels, trajectory });
            }
            current = current.restrict(index, &point)?;
            levels.push(record);
        }
        unreachable!("route length equals m >= 1, so the m = 1 level returns")
    }
}

/// One level of a descent: the loop's size, the restriction index,
/// the validation certificate, and the accepted projection point's
/// margin and attempt count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentLevel {
    pub n: u8,
    pub m: u8,
    pub index: u8,
    pub certificate: ModuliCertificate,
    pub projection_margin: f64,
    pub attempts: u32,
}

/// Result of a full descent: per-level records and the spherical
/// trajectory of the n−m base points.
#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub levels: Vec<DescentLevel>,
    pub trajectory: Trajectory,
}

fn sample_projection_point(
    lp: &HyperplaneLoop,
    i: u8,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Complex64>, f64, u32), String> {
    let dim = lp.m as usize + 2;
    for attempt in 1..=MAX_PROJECTION_ATTEMPTS {
        let p: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if cnorm(&p) < 1e-3 {
            continue;
        }
        let margin = lp.projection_margin(i, &p);
        if margin > PROJECTION_MARGIN {
            return Ok((p, margin, attempt));
        }
    }
    Err(format!(
        "no projection point off hyperplane {i} with margin > {PROJECTION_MARGIN} \
         in {MAX_PROJECTION_ATTEMPTS} attempts"
    ))
}

/// Certifies general position: for every (m+2)-subset of hyperplanes
/// and every sample, the determinant of the row-normalized covector
/// matrix must stay above `tol` in absolute value. Scans samples in
/// time order, subsets in lexicographic order; the reported violation
/// is the first one encountered.
pub fn validate(lp: &HyperplaneLoop, tol: f64) -> ModuliCertificate {
    let size = lp.m + 2;
    let mut min_margin = f64::INFINITY;
    let mut violated = None;
    let subsets = k_subsets(lp.n, size);
    for s in 0..lp.times.len() {
        for subset in &subsets {
            let rows: Vec<Vec<Complex64>> = subset
                .iter()
                .map(|&h| {
                    let cov = &lp.covectors[h as usize - 1][s];
                    let norm = cnorm(cov);
                    cov.iter().map(|c| c / norm).collect()
                })
                .collect();
            let margin = det(rows).norm();
            if margin < min_margin {
                min_margin = margin;
            }
            if margin < tol && violated.is_none() {
                violated = Some(Violation {
                    time: lp.times[s],
                    subset: subset.clone(),
                    margin,
                });
            }
        }
    }
    ModuliCertificate {
        min_margin,
        tolerance: tol,
        violated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    /// A static loop from one configuration of real covectors.
    fn static_loop(m: u8, rows: &[&[f64]]) -> HyperplaneLoop {
        let covectors = rows
            .iter()
            .map(|row| {
                let cov: Vec<Complex64> = row.iter().map(|&x| re(x)).collect();
                vec![cov.clone(), cov]
            })
            .collect();
        HyperplaneLoop::new(rows.len() as u8, m, vec![0.0, 1.0], covectors, true).unwrap()
    }

    #[test]
    fn coordinate_triangle_has_unit_margin() {
        let lp = static_loop(1, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let cert = validate(&lp, VALIDATE_TOL);
        assert!(cert.is_valid());
        assert!((cert.min_margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concurrent_lines_are_rejected() {
        // x = 0, y = 0, x + y = 0 all pass through [0 : 0 : 1].
        let lp = static_loop(1, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 0.0]]);
        let cert = validate(&lp, VALIDATE_TOL);
        assert!(!cert.is_valid());
        let v = cert.violated.unwrap();
        assert_eq!(v.subset, vec![1, 2, 3]);
        assert!(v.margin < 1e-12);
    }

    #[test]
    fn four_generic_lines_have_positive_margins() {
        let lp = static_loop(
            1,
            &[
                &[1.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0],
                &[0.0, 0.0, 1.0],
                &[1.0, 1.0, 1.0],
            ],
        );
        let cert = validate(&lp, VALIDATE_TOL);
        assert!(cert.is_valid());
        // Worst subset is {e1, e2, (1,1,1)}-type: |det| = 1/√3.
        assert!((cert.min_margin - 1.0 / 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn restrict_worked_examples() {
        let p = [re(1.0), re(0.0), re(1.0)]; // argmax tie → drops index 2
        // Vanishing-correction case: α_j = (0,1,0) with α_j·p = 0
        // keeps β_j = (0,1,0), coords (0,1) after the drop.
        let lp = static_loop(
            1,
            &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0]],
        );
        let r = lp.restrict(1, &p).unwrap();
        assert_eq!((r.n(), r.m()), (2, 0));
        assert_eq!(r.covector(0, 0), &[re(0.0), re(1.0)][..]);
        assert_eq!(r.covector(1, 0), &[re(-1.0), re(0.0)][..]);
        // Direct-arithmetic case: α_j = (1,1,0) gives
        // β_j = (1,1,0) − (1/1)(1,0,0) = (0,1,0).
        let lp = static_loop(
            1,
            &[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[1.0, 0.0, 1.0]],
        );
        let r = lp.restrict(1, &p).unwrap();
        assert_eq!(r.covector(0, 0), &[re(0.0), re(1.0)][..]);
    }

    #[test]
    fn restrict_of_concurrent_lines_collapses() {
        // Lines x=0, y=0, x+y=0 all meet at [0:0:1]: restricting to
        // the first makes the other two coincide, which the quotient
        // constructor rejects loudly.
        let lp = static_loop(
            1,
            &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 0.0]],
        );
        let p = [re(1.0), re(0.0), re(1.0)];
        assert!(matches!(lp.restrict(1, &p), Err(ModuliError::BadLoop(_))));
    }

    #[test]
    fn restrict_rejects_point_on_hyperplane() {
        let lp = static_loop(1, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let p = [re(0.0), re(1.0), re(1.0)]; // on hyperplane 1
        assert!(matches!(
            lp.restrict(1, &p),
            Err(ModuliError::ProjectionPoint(_))
        ));
    }

    #[test]
    fn restrict_commutes_with_rescaling() {
        let rows: Vec<Vec<Complex64>> = vec![
            vec![re(1.0), c(0.2, 0.1), re(0.0)],
            vec![re(0.0), re(1.0), c(-0.3, 0.4)],
            vec![c(0.5, -0.2), re(1.0), re(1.0)],
            vec![re(1.0), re(1.0), re(1.0)],
        ];
        let mk = |scale: Complex64| {
            let covectors = rows
                .iter()
                .enumerate()
                .map(|(h, row)| {
                    let cov: Vec<Complex64> = if h == 2 {
                        row.iter().map(|&x| x * scale).collect()
                    } else {
                        row.clone()
                    };
                    vec![cov.clone(), cov]
                })
                .collect();
            HyperplaneLoop::new(4, 1, vec![0.0, 1.0], covectors, true).unwrap()
        };
        let p = [c(0.3, 0.7), c(-0.9, 0.1), c(0.4, -0.6)];
        let a = mk(re(1.0)).restrict(1, &p).unwrap();
        let b = mk(c(-1.3, 2.1)).restrict(1, &p).unwrap();
        for h in 0..3 {
            for s in 0..2 {
                assert!(
                    proj_dist(a.covector(h, s), b.covector(h, s)) < 1e-12,
                    "hyperplane {h} sample {s}"
                );
            }
        }
    }

    #[test]
    fn base_points_of_coordinate_lines_are_distinct_and_static() {
        let lp = static_loop(
            1,
            &[
                &[1.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0],
                &[0.0, 0.0, 1.0],
                &[1.0, 1.0, 1.0],
            ],
        );
        let p = [re(0.31), re(-0.47), re(0.93)];
        assert!(lp.projection_margin(4, &p) > 0.01);
        let tr = lp.base_points(4, &p).unwrap();
        assert_eq!(tr.n(), 3);
        assert!(tr.is_loop());
        for i in 0..3 {
            for j in (i + 1)..3 {
                let (a, b) = (tr.sample_position(0, i), tr.sample_position(0, j));
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2))
                    .sqrt();
                assert!(d > 1e-6, "points {i} and {j} too close");
            }
            let (a, b) = (tr.sample_position(0, i), tr.sample_position(1, i));
            assert!(dist(a, b) < 1e-12, "point {i} moved in a static loop");
        }
    }

    fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    #[test]
    fn kernel_points_match_cross_product_oracle() {
        // Intersections of lines j with line i, computed as complex
        // cross products and pushed through the quotient map, must
        // agree projectively with the kernels of the restricted
        // covectors.
        let rows: Vec<Vec<Complex64>> = vec![
            vec![re(1.0), c(0.2, 0.1), re(0.0)],
            vec![re(0.0), re(1.0), c(-0.3, 0.4)],
            vec![c(0.5, -0.2), re(1.0), re(1.0)],
            vec![re(1.0), re(1.0), re(1.0)],
        ];
        let covectors = rows.iter().map(|r| vec![r.clone(), r.clone()]).collect();
        let lp = HyperplaneLoop::new(4, 1, vec![0.0, 1.0], covectors, true).unwrap();
        let p = [c(0.3, 0.7), c(-0.9, 0.1), c(1.4, -0.6)];
        let i = 1u8;
        let r = lp.restrict(i, &p).unwrap();
        let drop = 2; // argmax |p_l| = index 2 (norm 1.52...)
        assert!(p[drop].norm() > p[0].norm() && p[drop].norm() > p[1].norm());
        for (out_h, j) in [(0usize, 1usize), (1, 2), (2, 3)] {
            let x = line_intersection(&rows[0], &rows[j]);
            // Quotient coordinates of x: subtract the multiple of p
            // that kills coordinate `drop`, then forget it.
            let f = x[drop] / p[drop];
            let q: Vec<Complex64> = (0..3)
                .filter(|&l| l != drop)
                .map(|l| x[l] - f * p[l])
                .collect();
            let beta = r.covector(out_h, 0);
            let kernel = [-beta[1], beta[0]];
            assert!(
                proj_dist(&q, &kernel) < 1e-9,
                "pair (1, {}) disagrees: {:.3e}",
                j + 1,
                proj_dist(&q, &kernel)
            );
        }
    }

    #[test]
    fn descend_single_level_matches_base_points() {
        let lp = static_loop(
            1,
            &[
                &[1.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0],
                &[0.0, 0.0, 1.0],
                &[1.0, 1.0, 1.0],
            ],
        );
        let d = lp.descend(&[4], 7, VALIDATE_TOL).unwrap();
        assert_eq!(d.levels.len(), 1);
        assert_eq!(d.levels[0].index, 4);
        assert!(d.levels[0].certificate.is_valid());
        assert!(d.levels[0].projection_margin > PROJECTION_MARGIN);
        assert_eq!(d.trajectory.n(), 3);
        // Determinism: same seed, same outcome.
        let d2 = lp.descend(&[4], 7, VALIDATE_TOL).unwrap();
        assert_eq!(d.trajectory, d2.trajectory);
        assert_eq!(d.levels, d2.levels);
    }

    #[test]
    fn descend_reports_failing_level() {
        let lp = static_loop(1, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 0.0]]);
        let err = lp.descend(&[3], 1, VALIDATE_TOL).unwrap_err();
        match err {
            ModuliError::Level { level, n, m, .. } => {
                assert_eq!((level, n, m), (0, 3, 1));
            }
            other => panic!("expected level error, got {other}"),
        }
    }

    #[test]
    fn two_level_descent_from_cp3() {
        let lp = static_loop(
            2,
            &[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[1.0, 1.0, 1.0, 1.0],
            ],
        );
        let d = lp.descend(&[5, 4], 42, VALIDATE_TOL).unwrap();
        assert_eq!(d.levels.len(), 2);
        assert_eq!((d.levels[0].n, d.levels[0].m), (5, 2));
        assert_eq!((d.levels[1].n, d.levels[1].m), (4, 1));
        assert!(d.levels.iter().all(|l| l.certificate.is_valid()));
        assert_eq!(d.trajectory.n(), 3);
        assert!(d.trajectory.is_loop());
    }

    #[test]
    fn loop_json_round_trip() {
        let lp = static_loop(1, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.5, 1.0]]);
        let json = serde_json::to_string(&lp).unwrap();
        assert!(json.contains("\"loop\":true"));
        let back: HyperplaneLoop = serde_json::from_str(&json).unwrap();
        assert_eq!(back, lp);
    }

    #[test]
    fn malformed_loops_are_rejected() {
        // zero covector
        let covectors = vec![
            vec![vec![re(0.0), re(0.0), re(0.0)]; 2],
            vec![vec![re(0.0), re(1.0), re(0.0)]; 2],
            vec![vec![re(0.0), re(0.0), re(1.0)]; 2],
        ];
        assert!(HyperplaneLoop::new(3, 1, vec![0.0, 1.0], covectors, true).is_err());
        // coincident hyperplanes (projectively equal rows)
        let covectors = vec![
            vec![vec![re(1.0), re(0.0), re(0.0)]; 2],
            vec![vec![re(-2.0), re(0.0), re(0.0)]; 2],
            vec![vec![re(0.0), re(0.0), re(1.0)]; 2],
        ];
        assert!(HyperplaneLoop::new(3, 1, vec![0.0, 1.0], covectors, true).is_err());
        // open "loop"
        let covectors = vec![
            vec![vec![re(1.0), re(0.0), re(0.0)], vec![re(1.0), re(0.4), re(0.0)]],
            vec![vec![re(0.0), re(1.0), re(0.0)]; 2],
            vec![vec![re(0.0), re(0.0), re(1.0)]; 2],
        ];
        assert!(HyperplaneLoop::new(3, 1, vec![0.0, 1.0], covectors, true).is_err());
    }

    #[test]
    fn determinant_of_complex_matrix() {
        let d = det(vec![
            vec![c(1.0, 1.0), re(2.0)],
            vec![re(3.0), c(0.0, -1.0)],
        ]);
        // (1+i)(−i) − 2·3 = 1 − i − 6 = −5 − i
        assert!((d - c(-5.0, -1.0)).norm() < 1e-12);
    }
}
