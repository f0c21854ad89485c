//! Canned inputs used by `examples/generate_demos.rs` and by the
//! acceptance suite. Every construction here is deterministic and the
//! JSON files under `demo/` are the serialized forms of exactly these
//! values, so the suite can check the committed files byte for byte.

use std::f64::consts::PI;

use wallcross_core::{HyperplaneLoop, RawHyperplaneLoop, Trajectory};

/// Closes a sampled path into an exact loop by copying the first row
/// over the last. The final step still has to be a small move, so the
/// sampling must already come back near the start.
fn close(rows: &mut [Vec<[f64; 2]>]) {
    let first = rows[0].clone();
    *rows.last_mut().expect("at least one sample") = first;
}

/// Four points on the plane; points 1 and 2 swap along a circle about
/// their midpoint and return, winding `dir` half-turns in total, while
/// points 3 and 4 stand far off to the right. With `dir = 1` the pair
/// makes one counter-clockwise full turn, which the braid extractor
/// reads as linking number +1 on the pair (1, 2).
pub fn pair_exchange(dir: i32) -> Trajectory {
    let steps = 16usize;
    let phase = PI / 7.0;
    let mut times = Vec::with_capacity(steps + 1);
    let mut rows = Vec::with_capacity(steps + 1);
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let th = dir as f64 * 2.0 * PI * t + phase;
        times.push(t);
        rows.push(vec![
            [0.5 + 0.5 * (th + PI).cos(), 0.5 * (th + PI).sin()],
            [0.5 + 0.5 * th.cos(), 0.5 * th.sin()],
            [2.0, 0.3],
            [3.0, -0.2],
        ]);
    }
    close(&mut rows);
    Trajectory::plane(times, rows, true).expect("pinned demo geometry is valid")
}

/// Four points on the plane; point 3 orbits the origin on a circle of
/// radius 1.2, enclosing point 1 but not point 2, and returns. With
/// `dir = 1` this is one counter-clockwise loop of strand 3 around
/// strand 1: linking number +1 on the pair (1, 3).
pub fn loop_around(dir: i32) -> Trajectory {
    let steps = 16usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut rows = Vec::with_capacity(steps + 1);
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let th = dir as f64 * 2.0 * PI * t + 0.1;
        times.push(t);
        rows.push(vec![
            [0.0, 0.0],
            [1.1, 0.8],
            [1.2 * th.cos(), 1.2 * th.sin()],
            [3.0, -0.4],
        ]);
    }
    close(&mut rows);
    Trajectory::plane(times, rows, true).expect("pinned demo geometry is valid")
}

/// Four points near a unit square; the top-right point slides upward
/// so the quadruple passes through a single co-circularity. Not a
/// loop: the interesting output is the event word, not a braid.
pub fn square_flip() -> Trajectory {
    Trajectory::plane(
        vec![0.0, 1.0],
        vec![
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.75]],
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.3]],
        ],
        false,
    )
    .expect("pinned demo geometry is valid")
}

/// The same co-circularity with a fifth point sitting inside the
/// circle, which demotes the event from a Delaunay wall-crossing to a
/// plain co-circularity.
pub fn square_flip_interior() -> Trajectory {
    Trajectory::plane(
        vec![0.0, 1.0],
        vec![
            vec![
                [0.0, 0.0],
                [1.0, 0.0],
                [0.0, 1.0],
                [1.0, 0.75],
                [0.5, 0.5],
            ],
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.3], [0.5, 0.5]],
        ],
        false,
    )
    .expect("pinned demo geometry is valid")
}

/// A real covector row, encoded in the `[re, im]` document form.
fn real_row(coords: &[f64]) -> Vec<[f64; 2]> {
    coords.iter().map(|&x| [x, 0.0]).collect()
}

/// One covector row whose first coefficient winds once around zero on
/// the complex circle of radius `r` (phase offset `phase`) while the
/// remaining coefficients stay at 1. Degenerations happen exactly
/// where that coefficient vanishes, so winding around zero — never
/// through it — keeps the whole continuous loop strictly generic
/// while still carrying nontrivial monodromy.
fn winding_row(t: f64, r: f64, phase: f64, tail: usize) -> Vec<[f64; 2]> {
    let th = 2.0 * PI * t + phase;
    let mut row = vec![[r * th.cos(), r * th.sin()]];
    row.extend(std::iter::repeat([1.0, 0.0]).take(tail));
    row
}

fn unit_times(steps: usize) -> Vec<f64> {
    (0..=steps).map(|s| s as f64 / steps as f64).collect()
}

/// Four hyperplanes in the complex projective plane: the three
/// coordinate hyperplanes held fixed while the fourth, `[a(t), 1, 1]`,
/// winds its first coefficient once around zero on the circle of
/// radius 0.4. The only degeneration on that ray is `a = 0` (where
/// the moving hyperplane would pass through the intersection of the
/// second and third coordinate hyperplanes), so the loop stays
/// uniformly generic and the two corresponding points on the
/// restriction sphere wind once around each other.
pub fn m41_loop() -> HyperplaneLoop {
    let times = unit_times(24);
    let samples = times.len();
    let static_rows = |coords: &[f64]| vec![real_row(coords); samples];
    let mut moving: Vec<Vec<[f64; 2]>> = times
        .iter()
        .map(|&t| winding_row(t, 0.4, 0.15, 2))
        .collect();
    moving[samples - 1] = moving[0].clone();
    let raw = RawHyperplaneLoop {
        n: 4,
        m: 1,
        times,
        covectors: vec![
            static_rows(&[1.0, 0.0, 0.0]),
            static_rows(&[0.0, 1.0, 0.0]),
            static_rows(&[0.0, 0.0, 1.0]),
            moving,
        ],
        is_loop: true,
    };
    raw.try_into().expect("pinned demo loop is valid")
}

/// Five hyperplanes in complex projective 3-space: the four
/// coordinate hyperplanes held fixed while the fifth, `[a(t), 1, 1, 1]`,
/// winds its first coefficient once around zero on the circle of
/// radius 0.4 — the same meridian construction as `m41_loop`, one
/// dimension up, so both descent levels stay uniformly generic.
pub fn m52_loop() -> HyperplaneLoop {
    let times = unit_times(48);
    let samples = times.len();
    let static_rows = |coords: &[f64]| vec![real_row(coords); samples];
    let mut moving: Vec<Vec<[f64; 2]>> = times
        .iter()
        .map(|&t| winding_row(t, 0.4, 0.3, 3))
        .collect();
    moving[samples - 1] = moving[0].clone();
    let raw = RawHyperplaneLoop {
        n: 5,
        m: 2,
        times,
        covectors: vec![
            static_rows(&[1.0, 0.0, 0.0, 0.0]),
            static_rows(&[0.0, 1.0, 0.0, 0.0]),
            static_rows(&[0.0, 0.0, 1.0, 0.0]),
            static_rows(&[0.0, 0.0, 0.0, 1.0]),
            moving,
        ],
        is_loop: true,
    };
    raw.try_into().expect("pinned demo loop is valid")
}

/// Traverses `lp` twice: the concatenation of the loop with itself,
/// reparametrized to [0, 1]. The duplicated seam sample is dropped so
/// times stay strictly increasing.
pub fn doubled(lp: &HyperplaneLoop) -> HyperplaneLoop {
    let raw = RawHyperplaneLoop::from(lp.clone());
    let mut times: Vec<f64> = raw.times.iter().map(|t| t / 2.0).collect();
    times.extend(raw.times.iter().skip(1).map(|t| 0.5 + t / 2.0));
    let covectors = raw
        .covectors
        .iter()
        .map(|per_h| {
            let mut rows = per_h.clone();
            rows.extend(per_h.iter().skip(1).cloned());
            rows
        })
        .collect();
    let doubled = RawHyperplaneLoop {
        n: raw.n,
        m: raw.m,
        times,
        covectors,
        is_loop: true,
    };
    doubled.try_into().expect("doubling a valid loop stays valid")
}
