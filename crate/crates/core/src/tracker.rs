//! Event tracking: converts time-sampled motions of n labelled
//! points (planar or spherical) into group words.
//!
//! * [`g3_word`] — a letter per collinearity event (triple-index),
//! * [`g4_word`] — a letter per cocircularity event (quadruple-index),
//! * [`gamma4_word`] — a letter per Delaunay flip (cocircularity with
//!   empty open disk), oriented by the cyclic order on the circle,
//! * [`braid_word`] — a σ-letter per swap of adjacent points in
//!   projected order,
//! * [`spherical_reduce`] — turns a spherical loop of n points into a
//!   planar loop of n−1 points by rotating point n to the pole and
//!   projecting stereographically.
//!
//! Genericity is enforced, never repaired: exact-zero predicates at
//! sample instants, coincident events, or singular projections raise
//! errors carrying the time and the participants.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{BraidError, BraidWord, SigmaGen};
use crate::combi::k_subsets;
use crate::gamma::GammaGenerator;
use crate::geom::{circumcircle, incircle, linear_root, orient, segment_roots, EVENT_ISOLATION};
use crate::gnk::{GnkGenerator, GroupError, MAX_N};
use crate::words::{Generator, GroupWord, Letter, WordError};

/// Pointwise tolerance for loop closure of a trajectory.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Two points closer than this at a sample make the input malformed.
pub const COINCIDENCE_TOL: f64 = 1e-12;
/// Relative width of the "on the circle" band in the Delaunay
/// emptiness test; a fifth point inside the band is a genericity
/// violation, strictly outside the band it is decisive.
pub const DISK_REL_TOL: f64 = 1e-9;
/// The correcting rotation fails when the tracked point comes within
/// this of exact antipodality to the pole target.
pub const ANTIPODE_GUARD: f64 = 1e-6;
/// Stereographic projection fails when a point comes within this of
/// the projection pole.
pub const POLE_GUARD: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("bad trajectory: {0}")]
    BadTrajectory(String),
    #[error("genericity violated at t = {t}: {what}")]
    Genericity { t: f64, what: String },
    #[error("projection failed: {0}")]
    Projection(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrackMode {
    Plane,
    Sphere,
}

/// A time-sampled motion of `n` labelled points. Between samples,
/// planar points move on straight lines and spherical points along
/// great-circle arcs.
///
/// JSON shape: `{mode, n, times, points, loop}` with
/// `points[s][i] = [x, y]` (plane) or `[x, y, z]` (sphere) giving the
/// position of point `i+1` at sample instant `times[s]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTrajectory", into = "RawTrajectory")]
pub struct Trajectory {
    mode: TrackMode,
    n: u8,
    times: Vec<f64>,
    points: Vec<Vec<[f64; 3]>>,
    is_loop: bool,
}

/// Serde mirror of [`Trajectory`]: the literal JSON document shape,
/// before any invariant is checked. Deserializing this type can only
/// fail on syntax or schema problems; converting it with `try_into`
/// runs the semantic validation.
#[derive(Serialize, Deserialize)]
pub struct RawTrajectory {
    pub mode: TrackMode,
    pub n: u8,
    pub times: Vec<f64>,
    pub points: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "loop", default)]
    pub is_loop: bool,
}

impl TryFrom<RawTrajectory> for Trajectory {
    type Error = TrackError;

    fn try_from(raw: RawTrajectory) -> Result<Self, TrackError> {
        let dim = match raw.mode {
            TrackMode::Plane => 2,
            TrackMode::Sphere => 3,
        };
        let mut points = Vec::with_capacity(raw.points.len());
        for (s, sample) in raw.points.iter().enumerate() {
            let mut row = Vec::with_capacity(sample.len());
            for (i, coords) in sample.iter().enumerate() {
                if coords.len() != dim {
                    return Err(TrackError::BadTrajectory(format!(
                        "point {} at sample {} has {} coordinates, expected {}",
                        i + 1,
                        s,
                        coords.len(),
                        dim
                    )));
                }
                let mut p = [0.0f64; 3];
                p[..dim].copy_from_slice(coords);
                row.push(p);
            }
            points.push(row);
        }
        Trajectory::new(raw.mode, raw.n, raw.times, points, raw.is_loop)
    }
}

impl From<Trajectory> for RawTrajectory {
    fn from(tr: Trajectory) -> RawTrajectory {
        let dim = match tr.mode {
            TrackMode::Plane => 2,
            TrackMode::Sphere => 3,
        };
        RawTrajectory {
            mode: tr.mode,
            n: tr.n,
            times: tr.times,
            points: tr
                .points
                .iter()
                .map(|row| row.iter().map(|p| p[..dim].to_vec()).collect())
                .collect(),
            is_loop: tr.is_loop,
        }
    }
}

impl Trajectory {
    fn new(
        mode: TrackMode,
        n: u8,
        times: Vec<f64>,
        points: Vec<Vec<[f64; 3]>>,
        is_loop: bool,
    ) -> Result<Self, TrackError> {
        if n == 0 || n > MAX_N {
            return Err(TrackError::BadTrajectory(format!(
                "point count {n} outside 1..={MAX_N}"
            )));
        }
        if times.len() < 2 {
            return Err(TrackError::BadTrajectory(
                "need at least two sample instants".into(),
            ));
        }
        if points.len() != times.len() {
            return Err(TrackError::BadTrajectory(format!(
                "{} samples but {} position rows",
                times.len(),
                points.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite() || *t < 0.0 || *t > 1.0) {
            return Err(TrackError::BadTrajectory(
                "sample instants must lie in [0, 1]".into(),
            ));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TrackError::BadTrajectory(
                "sample instants must be strictly increasing".into(),
            ));
        }
        let mut points = points;
        for (s, row) in points.iter_mut().enumerate() {
            if row.len() != n as usize {
                return Err(TrackError::BadTrajectory(format!(
                    "sample {} has {} points, expected {}",
                    s,
                    row.len(),
                    n
                )));
            }
            for (i, p) in row.iter_mut().enumerate() {
                if p.iter().any(|c| !c.is_finite()) {
                    return Err(TrackError::BadTrajectory(format!(
                        "point {} at sample {} has a non-finite coordinate",
                        i + 1,
                        s
                    )));
                }
                if mode == TrackMode::Sphere {
                    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                    if (norm - 1.0).abs() > 1e-6 {
                        return Err(TrackError::BadTrajectory(format!(
                            "point {} at sample {} has norm {norm}, expected a unit vector",
                            i + 1,
                            s
                        )));
                    }
                    for c in p.iter_mut() {
                        *c /= norm;
                    }
                }
            }
            for a in 0..row.len() {
                for b in (a + 1)..row.len() {
                    if dist3(row[a], row[b]) < COINCIDENCE_TOL {
                        return Err(TrackError::BadTrajectory(format!(
                            "points {} and {} coincide at sample {}",
                            a + 1,
                            b + 1,
                            s
                        )));
                    }
                }
            }
        }
        if is_loop {
            let (first, last) = (&points[0], &points[points.len() - 1]);
            for i in 0..n as usize {
                if dist3(first[i], last[i]) > CLOSURE_TOL {
                    return Err(TrackError::BadTrajectory(format!(
                        "loop does not close for point {} (deviation {:.3e})",
                        i + 1,
                        dist3(first[i], last[i])
                    )));
                }
            }
        }
        Ok(Trajectory {
            mode,
            n,
            times,
            points,
            is_loop,
        })
    }

    pub fn plane(
        times: Vec<f64>,
        points: Vec<Vec<[f64; 2]>>,
        is_loop: bool,
    ) -> Result<Self, TrackError> {
        let n = points.first().map_or(0, |r| r.len()) as u8;
        let lifted = points
            .into_iter()
            .map(|row| row.into_iter().map(|p| [p[0], p[1], 0.0]).collect())
            .collect();
        Trajectory::new(TrackMode::Plane, n, times, lifted, is_loop)
    }

    pub fn sphere(
        times: Vec<f64>,
        points: Vec<Vec<[f64; 3]>>,
        is_loop: bool,
    ) -> Result<Self, TrackError> {
        let n = points.first().map_or(0, |r| r.len()) as u8;
        Trajectory::new(TrackMode::Sphere, n, times, points, is_loop)
    }

    pub fn mode(&self) -> TrackMode {
        self.mode
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn is_loop(&self) -> bool {
        self.is_loop
    }

    pub fn sample_count(&self) -> usize {
        self.times.len()
    }

    /// Position of point `i` (0-based) at sample `s`.
    pub fn sample_position(&self, s: usize, i: usize) -> [f64; 3] {
        self.points[s][i]
    }

    /// Planar position of point `i` (0-based) within segment `seg` at
    /// time `t` (linear interpolation).
    fn plane_at(&self, seg: usize, i: usize, t: f64) -> [f64; 2] {
        let (t0, t1) = (self.times[seg], self.times[seg + 1]);
        let u = (t - t0) / (t1 - t0);
        let (a, b) = (self.points[seg][i], self.points[seg + 1][i]);
        [a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])]
    }

    /// Spherical position of point `i` within segment `seg` at time
    /// `t` (great-circle interpolation).
    fn sphere_at(&self, seg: usize, i: usize, t: f64) -> [f64; 3] {
        let (t0, t1) = (self.times[seg], self.times[seg + 1]);
        let u = (t - t0) / (t1 - t0);
        slerp(self.points[seg][i], self.points[seg + 1][i], u)
    }

    /// The same motion sampled twice as finely: a midpoint sample is
    /// inserted into every segment (linear in the plane, great-circle
    /// on the sphere).
    pub fn refined(&self) -> Trajectory {
        let mut times = Vec::with_capacity(2 * self.times.len() - 1);
        let mut points = Vec::with_capacity(2 * self.points.len() - 1);
        for s in 0..self.times.len() - 1 {
            times.push(self.times[s]);
            points.push(self.points[s].clone());
            let tm = 0.5 * (self.times[s] + self.times[s + 1]);
            times.push(tm);
            let row = (0..self.n as usize)
                .map(|i| match self.mode {
                    TrackMode::Plane => {
                        let p = self.plane_at(s, i, tm);
                        [p[0], p[1], 0.0]
                    }
                    TrackMode::Sphere => self.sphere_at(s, i, tm),
                })
                .collect();
            points.push(row);
        }
        times.push(*self.times.last().unwrap());
        points.push(self.points.last().unwrap().clone());
        Trajectory {
            mode: self.mode,
            n: self.n,
            times,
            points,
            is_loop: self.is_loop,
        }
    }

    /// The time-reversed motion over the same instants.
    pub fn reversed(&self) -> Trajectory {
        let (first, last) = (self.times[0], *self.times.last().unwrap());
        let times = self.times.iter().rev().map(|t| first + last - t).collect();
        let points = self.points.iter().rev().cloned().collect();
        Trajectory {
            mode: self.mode,
            n: self.n,
            times,
            points,
            is_loop: self.is_loop,
        }
    }

    /// Runs `self` then `other` (same mode, same point count; the
    /// first sample of `other` must coincide with the last sample of
    /// `self` within the closure tolerance). Times are rescaled to
    /// [0, 1] with the seam at 1/2.
    pub fn compose(&self, other: &Trajectory) -> Result<Trajectory, TrackError> {
        if self.mode != other.mode || self.n != other.n {
            return Err(TrackError::BadTrajectory(
                "composed trajectories must share mode and point count".into(),
            ));
        }
        let (a_last, b_first) = (self.points.last().unwrap(), &other.points[0]);
        for i in 0..self.n as usize {
            if dist3(a_last[i], b_first[i]) > CLOSURE_TOL {
                return Err(TrackError::BadTrajectory(format!(
                    "composition seam mismatch for point {} (deviation {:.3e})",
                    i + 1,
                    dist3(a_last[i], b_first[i])
                )));
            }
        }
        let rescale = |ts: &[f64], offset: f64| -> Vec<f64> {
            let (lo, hi) = (ts[0], *ts.last().unwrap());
            ts.iter()
                .map(|t| offset + 0.5 * (t - lo) / (hi - lo))
                .collect()
        };
        let mut times = rescale(&self.times, 0.0);
        let mut points = self.points.clone();
        times.extend(rescale(&other.times, 0.5).into_iter().skip(1));
        points.extend(other.points.iter().skip(1).cloned());
        let is_loop = (0..self.n as usize)
            .all(|i| dist3(points[0][i], points.last().unwrap()[i]) <= CLOSURE_TOL);
        Ok(Trajectory {
            mode: self.mode,
            n: self.n,
            times,
            points,
            is_loop,
        })
    }
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn slerp(a: [f64; 3], b: [f64; 3], u: f64) -> [f64; 3] {
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    let theta = dot.acos();
    if theta < 1e-12 {
        return a;
    }
    let (sa, sb) = (
        ((1.0 - u) * theta).sin() / theta.sin(),
        (u * theta).sin() / theta.sin(),
    );
    let v = [
        sa * a[0] + sb * b[0],
        sa * a[1] + sb * b[1],
        sa * a[2] + sb * b[2],
    ];
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / norm, v[1] / norm, v[2] / norm]
}

/// What happened at an event instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Collinear3,
    Cocircular4,
    DelaunayFlip4,
    StrandSwap,
}

/// One detected event: its time, kind, the 1-based labels of the
/// participating points, and the emitted letter's text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub participants: Vec<u8>,
    pub letter: String,
}

/// A group word extracted from a trajectory, with its event log
/// (time-ordered; the word letters appear in the same order).
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedWord<G: Generator> {
    pub word: GroupWord<G>,
    pub events: Vec<Event>,
}

/// A braid word extracted from a trajectory, with its event log and
/// the projection axis angle that turned out to be generic.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedBraid {
    pub braid: BraidWord,
    pub events: Vec<Event>,
    pub axis_angle: f64,
}

fn require_plane(tr: &Trajectory) -> Result<(), TrackError> {
    if tr.mode != TrackMode::Plane {
        return Err(TrackError::BadTrajectory(
            "this extractor needs a planar trajectory".into(),
        ));
    }
    Ok(())
}

/// Enforces pairwise isolation of event times across the whole
/// motion.
fn check_isolation(events: &[(f64, Vec<u8>)]) -> Result<(), TrackError> {
    for w in events.windows(2) {
        if (w[1].0 - w[0].0).abs() < EVENT_ISOLATION {
            return Err(TrackError::Genericity {
                t: w[0].0,
                what: format!(
                    "events of {:?} and {:?} are not isolated (separation {:.3e})",
                    w[0].1,
                    w[1].1,
                    (w[1].0 - w[0].0).abs()
                ),
            });
        }
    }
    Ok(())
}

/// A letter per collinearity event: scans every point triple for sign
/// changes of the orientation determinant.
pub fn g3_word(tr: &Trajectory) -> Result<TrackedWord<GnkGenerator>, TrackError> {
    require_plane(tr)?;
    let mut found: Vec<(f64, Vec<u8>)> = Vec::new();
    for triple in k_subsets(tr.n, 3.min(tr.n)) {
        if triple.len() < 3 {
            break;
        }
        let idx: Vec<usize> = triple.iter().map(|&l| l as usize - 1).collect();
        for seg in 0..tr.times.len() - 1 {
            let f = |t: f64| {
                orient(
                    tr.plane_at(seg, idx[0], t),
                    tr.plane_at(seg, idx[1], t),
                    tr.plane_at(seg, idx[2], t),
                )
            };
            let roots = segment_roots(&f, tr.times[seg], tr.times[seg + 1]).map_err(|z| {
                TrackError::Genericity {
                    t: z.t,
                    what: format!("orientation determinant of {triple:?} exactly zero"),
                }
            })?;
            for r in roots {
                found.push((r, triple.clone()));
            }
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));
    check_isolation(&found)?;
    let mut events = Vec::with_capacity(found.len());
    let mut gens = Vec::with_capacity(found.len());
    for (t, triple) in found {
        let g = GnkGenerator::new(triple.clone())?;
        events.push(Event {
            t,
            kind: EventKind::Collinear3,
            participants: triple,
            letter: g.text(),
        });
        gens.push(g);
    }
    Ok(TrackedWord {
        word: GroupWord::from_generators(gens)?,
        events,
    })
}

/// All cocircularity roots `(t, quadruple)` of the motion, sorted and
/// isolation-checked. Shared by [`g4_word`] and [`gamma4_word`].
fn cocircularity_events(tr: &Trajectory) -> Result<Vec<(f64, Vec<u8>)>, TrackError> {
    let mut found: Vec<(f64, Vec<u8>)> = Vec::new();
    if tr.n < 4 {
        return Ok(found);
    }
    for quad in k_subsets(tr.n, 4) {
        let idx: Vec<usize> = quad.iter().map(|&l| l as usize - 1).collect();
        for seg in 0..tr.times.len() - 1 {
            let f = |t: f64| {
                incircle(
                    tr.plane_at(seg, idx[0], t),
                    tr.plane_at(seg, idx[1], t),
                    tr.plane_at(seg, idx[2], t),
                    tr.plane_at(seg, idx[3], t),
                )
            };
            let roots = segment_roots(&f, tr.times[seg], tr.times[seg + 1]).map_err(|z| {
                TrackError::Genericity {
                    t: z.t,
                    what: format!("cocircularity determinant of {quad:?} exactly zero"),
                }
            })?;
            for r in roots {
                found.push((r, quad.clone()));
            }
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));
    check_isolation(&found)?;
    Ok(found)
}

/// A letter per cocircularity event, over every point quadruple.
pub fn g4_word(tr: &Trajectory) -> Result<TrackedWord<GnkGenerator>, TrackError> {
    require_plane(tr)?;
    let found = cocircularity_events(tr)?;
    let mut events = Vec::with_capacity(found.len());
    let mut gens = Vec::with_capacity(found.len());
    for (t, quad) in found {
        let g = GnkGenerator::new(quad.clone())?;
        events.push(Event {
            t,
            kind: EventKind::Cocircular4,
            participants: quad,
            letter: g.text(),
        });
        gens.push(g);
    }
    Ok(TrackedWord {
        word: GroupWord::from_generators(gens)?,
        events,
    })
}

/// A letter per Delaunay flip: cocircularity events whose open
/// circumdisk contains no other point. The emitted generator's tuple
/// is the cyclic order of the four points on the circle, so opposite
/// pairs are the quadrilateral diagonals.
pub fn gamma4_word(tr: &Trajectory) -> Result<TrackedWord<GammaGenerator>, TrackError> {
    require_plane(tr)?;
    let found = cocircularity_events(tr)?;
    let mut events = Vec::new();
    let mut gens = Vec::new();
    'event: for (t, quad) in found {
        let seg = segment_of(&tr.times, t);
        let idx: Vec<usize> = quad.iter().map(|&l| l as usize - 1).collect();
        let pts: Vec<[f64; 2]> = idx.iter().map(|&i| tr.plane_at(seg, i, t)).collect();
        let (center, r) =
            circumcircle(pts[0], pts[1], pts[2]).ok_or_else(|| TrackError::Genericity {
                t,
                what: format!("cocircular points {quad:?} are also collinear"),
            })?;
        for other in 0..tr.n as usize {
            if idx.contains(&other) {
                continue;
            }
            let p = tr.plane_at(seg, other, t);
            let d = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt();
            if d < r * (1.0 - DISK_REL_TOL) {
                continue 'event; // disk not empty: no flip letter
            }
            if d <= r * (1.0 + DISK_REL_TOL) {
                return Err(TrackError::Genericity {
                    t,
                    what: format!(
                        "point {} lies on the circumcircle of {quad:?}",
                        other + 1
                    ),
                });
            }
        }
        // Cyclic order on the circle via angles about the center.
        let mut order: Vec<(f64, u8)> = pts
            .iter()
            .zip(quad.iter())
            .map(|(p, &label)| ((p[1] - center[1]).atan2(p[0] - center[0]), label))
            .collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let tuple = [order[0].1, order[1].1, order[2].1, order[3].1];
        let g = GammaGenerator::new(tuple)?;
        events.push(Event {
            t,
            kind: EventKind::DelaunayFlip4,
            participants: g.tuple().to_vec(),
            letter: g.text(),
        });
        gens.push(g);
    }
    Ok(TrackedWord {
        word: GroupWord::from_generators(gens)?,
        events,
    })
}

fn segment_of(times: &[f64], t: f64) -> usize {
    match times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
        Ok(s) => s.min(times.len() - 2),
        Err(s) => s.saturating_sub(1).min(times.len() - 2),
    }
}

/// The fixed retry sequence of projection axis angles: the x-axis
/// first, then eight rotated axes with a small symmetry-breaking
/// offset.
pub fn projection_axes() -> [f64; 9] {
    let mut axes = [0.0f64; 9];
    for (m, a) in axes.iter_mut().enumerate().skip(1) {
        *a = (m as f64) * std::f64::consts::FRAC_PI_8 + 0.0123456789;
    }
    axes
}

/// A σ-letter per swap of adjacent points in projected order. Strands
/// are numbered by the initial projected order (leftmost = 1). The
/// sign convention: +1 when the left-moving point passes above
/// (greater projected y at the crossing instant).
pub fn braid_word(tr: &Trajectory) -> Result<TrackedBraid, TrackError> {
    require_plane(tr)?;
    let mut last_issue = String::new();
    for angle in projection_axes() {
        match braid_word_with_axis(tr, angle) {
            Ok(b) => return Ok(b),
            Err(issue) => last_issue = issue,
        }
    }
    Err(TrackError::Projection(format!(
        "no generic projection axis among {} candidates; last issue: {last_issue}",
        projection_axes().len()
    )))
}

/// Attempts braid extraction along one projection axis; an `Err`
/// means the axis was non-generic (the caller retries).
fn braid_word_with_axis(tr: &Trajectory, angle: f64) -> Result<TrackedBraid, String> {
    let (cos, sin) = (angle.cos(), angle.sin());
    let proj = |p: [f64; 2]| -> [f64; 2] {
        [p[0] * cos + p[1] * sin, p[1] * cos - p[0] * sin]
    };
    let n = tr.n as usize;
    let s_last = tr.times.len() - 1;

    // Endpoint genericity: all projected x distinct.
    for &s in &[0usize, s_last] {
        let t = tr.times[s];
        let seg = if s == 0 { 0 } else { s - 1 };
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (
                    proj(tr.plane_at(seg, i, t)),
                    proj(tr.plane_at(seg, j, t)),
                );
                if (a[0] - b[0]).abs() < 1e-9 {
                    return Err(format!(
                        "points {} and {} share projected x at an endpoint",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
    }

    // Crossings: exact linear roots of projected coordinate
    // differences, per pair, per segment.
    let mut found: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for seg in 0..s_last {
                let (t0, t1) = (tr.times[seg], tr.times[seg + 1]);
                let v0 = {
                    let (a, b) = (proj(tr.plane_at(seg, i, t0)), proj(tr.plane_at(seg, j, t0)));
                    a[0] - b[0]
                };
                let v1 = {
                    let (a, b) = (proj(tr.plane_at(seg, i, t1)), proj(tr.plane_at(seg, j, t1)));
                    a[0] - b[0]
                };
                match linear_root(v0, v1, t0, t1) {
                    Err(z) => {
                        return Err(format!(
                            "points {} and {} share projected x at t = {}",
                            i + 1,
                            j + 1,
                            z.t
                        ))
                    }
                    Ok(None) => {}
                    Ok(Some(t)) => found.push((t, i, j)),
                }
            }
        }
    }
    found.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then_with(|| (a.1, a.2).cmp(&(b.1, b.2)))
    });
    for w in found.windows(2) {
        if (w[1].0 - w[0].0).abs() < EVENT_ISOLATION {
            return Err(format!(
                "crossings at t = {} and t = {} are not isolated",
                w[0].0, w[1].0
            ));
        }
    }

    // Simulate the swaps against the running projected order.
    let mut order: Vec<usize> = (0..n).collect(); // order[pos] = point index
    {
        let t = tr.times[0];
        order.sort_by(|&a, &b| {
            proj(tr.plane_at(0, a, t))[0]
                .partial_cmp(&proj(tr.plane_at(0, b, t))[0])
                .unwrap()
        });
    }
    let initial_order = order.clone();
    let mut rank = vec![0usize; n]; // rank[point] = position
    for (pos, &pt) in order.iter().enumerate() {
        rank[pt] = pos;
    }

    let mut letters: Vec<Letter<SigmaGen>> = Vec::new();
    let mut events: Vec<Event> = Vec::new();
    for (t, i, j) in found {
        let (pi, pj) = (rank[i], rank[j]);
        if pi.abs_diff(pj) != 1 {
            return Err(format!(
                "points {} and {} cross while not adjacent in projected order at t = {t}",
                i + 1,
                j + 1
            ));
        }
        let p = pi.min(pj);
        let left_mover = order[p + 1]; // had greater x, ends up with smaller
        let other = order[p];
        let seg = segment_of(&tr.times, t);
        let (ylm, yot) = (
            proj(tr.plane_at(seg, left_mover, t))[1],
            proj(tr.plane_at(seg, other, t))[1],
        );
        if ylm == yot {
            return Err(format!(
                "points {} and {} coincide in projection at t = {t}",
                left_mover + 1,
                other + 1
            ));
        }
        let sign: i8 = if ylm > yot { 1 } else { -1 };
        let gen = SigmaGen::new((p + 1) as u8).map_err(|e| e.to_string())?;
        let letter = Letter::new(gen, sign).expect("sign is ±1");
        events.push(Event {
            t,
            kind: EventKind::StrandSwap,
            participants: vec![i as u8 + 1, j as u8 + 1],
            letter: letter.text(),
        });
        letters.push(letter);
        order.swap(p, p + 1);
        rank[order[p]] = p;
        rank[order[p + 1]] = p + 1;
    }

    if tr.is_loop && order != initial_order {
        return Err("projected order of a loop does not return to start".into());
    }

    let word = GroupWord::from_letters(letters).map_err(|e| e.to_string())?;
    let braid = BraidWord::new(tr.n, word).map_err(|e| e.to_string())?;
    Ok(TrackedBraid {
        braid,
        events,
        axis_angle: angle,
    })
}

// ----------------------------------------------------------------
// Spherical reduction
// ----------------------------------------------------------------

type Mat3 = [[f64; 3]; 3];

const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn mat_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c];
        }
    }
    out
}

fn transpose(m: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = m[c][r];
        }
    }
    out
}

/// Projects a near-rotation back onto SO(3) by modified Gram–Schmidt
/// on the rows; keeps drift from accumulating when many small
/// rotations are composed.
fn orthonormalize(m: &Mat3) -> Mat3 {
    let norm = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let r0 = norm(m[0]);
    let d = m[1][0] * r0[0] + m[1][1] * r0[1] + m[1][2] * r0[2];
    let r1 = norm([m[1][0] - d * r0[0], m[1][1] - d * r0[1], m[1][2] - d * r0[2]]);
    let r2 = [
        r0[1] * r1[2] - r0[2] * r1[1],
        r0[2] * r1[0] - r0[0] * r1[2],
        r0[0] * r1[1] - r0[1] * r1[0],
    ];
    [r0, r1, r2]
}

/// The minimal rotation carrying unit vector `v` to the north pole,
/// by Rodrigues' formula about the axis `v × N`. Errors when `v` is
/// within [`ANTIPODE_GUARD`] of the south pole, where the minimal
/// rotation is ambiguous.
fn rotation_to_pole(v: [f64; 3]) -> Result<Mat3, TrackError> {
    let c = v[2];
    if c < -1.0 + ANTIPODE_GUARD {
        return Err(TrackError::Projection(format!(
            "tracked point within {ANTIPODE_GUARD} of the antipodal singularity (z = {c})"
        )));
    }
    // axis = v × N = (v_y, -v_x, 0), |axis| = sin(theta)
    let (ax, ay) = (v[1], -v[0]);
    let s = (ax * ax + ay * ay).sqrt();
    if s < 1e-15 {
        return Ok(IDENTITY);
    }
    let (kx, ky) = (ax / s, ay / s);
    let one_c = 1.0 - c;
    Ok([
        [c + kx * kx * one_c, kx * ky * one_c, ky * s],
        [kx * ky * one_c, c + ky * ky * one_c, -kx * s],
        [-ky * s, kx * s, c],
    ])
}

fn rot_z(angle: f64) -> Mat3 {
    let (c, s) = (angle.cos(), angle.sin());
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn stereographic(p: [f64; 3]) -> Result<[f64; 2], TrackError> {
    if 1.0 - p[2] < POLE_GUARD {
        return Err(TrackError::Projection(format!(
            "point at the projection pole (z = {})",
            p[2]
        )));
    }
    Ok([p[0] / (1.0 - p[2]), p[1] / (1.0 - p[2])])
}

/// Number of extra samples appended to close the output loop when the
/// correcting rotation family ends with a residual polar twist.
const CLOSURE_STEPS: usize = 16;

/// Reduces a spherical loop of `n` points to a planar loop of `n−1`
/// points: a continuous family of rotations (composed minimal
/// rotations, sample by sample) carries point `n` to the north pole;
/// the remaining points are projected stereographically from the
/// pole. The family's end differs from its start by a rotation about
/// the polar axis; the output is closed by appending a rigid rotation
/// of the plane through the opposite angle, which only shifts the
/// result inside the quotient by full twists.
pub fn spherical_reduce(tr: &Trajectory) -> Result<Trajectory, TrackError> {
    if tr.mode != TrackMode::Sphere {
        return Err(TrackError::BadTrajectory(
            "spherical reduction needs a spherical trajectory".into(),
        ));
    }
    if !tr.is_loop {
        return Err(TrackError::BadTrajectory(
            "spherical reduction needs a loop trajectory".into(),
        ));
    }
    if tr.n < 2 {
        return Err(TrackError::BadTrajectory(
            "need at least two points to reduce".into(),
        ));
    }
    let n = tr.n as usize;
    let last = n - 1; // 0-based index of the tracked point

    let r0 = rotation_to_pole(tr.points[0][last])?;
    let mut rotation = r0;
    let mut configs: Vec<Vec<[f64; 2]>> = Vec::with_capacity(tr.times.len() + CLOSURE_STEPS);
    for s in 0..tr.times.len() {
        if s > 0 {
            let carried = mat_vec(&rotation, tr.points[s][last]);
            let correction = rotation_to_pole(carried)?;
            rotation = orthonormalize(&mat_mul(&correction, &rotation));
        }
        let mut row = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            row.push(stereographic(mat_vec(&rotation, tr.points[s][i]))?);
        }
        configs.push(row);
    }

    // Residual polar twist: rotation ∘ r0⁻¹ fixes the pole.
    let residual = mat_mul(&rotation, &transpose(&r0));
    let tau = residual[1][0].atan2(residual[0][0]);
    if tau.abs() > 1e-12 {
        for k in 1..=CLOSURE_STEPS {
            let u = k as f64 / CLOSURE_STEPS as f64;
            let undo = mat_mul(&rot_z(-u * tau), &rotation);
            let mut row = Vec::with_capacity(n - 1);
            for i in 0..n - 1 {
                row.push(stereographic(mat_vec(&undo, tr.points[0][i]))?);
            }
            configs.push(row);
        }
    }

    // Snap the final sample onto the first if it is within closure
    // tolerance; the residual is pure float drift.
    let steps = configs.len();
    let drift = (0..n - 1)
        .map(|i| {
            let (a, b) = (configs[0][i], configs[steps - 1][i]);
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
        })
        .fold(0.0f64, f64::max);
    if drift > CLOSURE_TOL {
        return Err(TrackError::Projection(format!(
            "reduced loop fails to close (drift {drift:.3e})"
        )));
    }
    let first = configs[0].clone();
    *configs.last_mut().unwrap() = first;

    let times: Vec<f64> = (0..steps)
        .map(|s| s as f64 / (steps - 1) as f64)
        .collect();
    Trajectory::plane(times, configs, true)
}
