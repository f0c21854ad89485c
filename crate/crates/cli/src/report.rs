//! Report structures shared by the subcommands, plus the stage
//! helpers that `track`, `moduli descend`, and `pipeline` have in
//! common. Every report is a plain `Serialize` struct with a fixed
//! field order, so serializing it is byte-stable run over run.

use std::collections::BTreeMap;

use serde::Serialize;

use wallcross_core::gamma::GammaPresentation;
use wallcross_core::geom::EVENT_ISOLATION;
use wallcross_core::gnk::parity_vector;
use wallcross_core::homs::{apply_hom, HomError, HomImage, HomKind, HomSpec};
use wallcross_core::moduli::{MODULI_CLOSURE_TOL, PROJECTION_MARGIN};
use wallcross_core::tracker::{
    ANTIPODE_GUARD, CLOSURE_TOL, COINCIDENCE_TOL, DISK_REL_TOL,
};
use wallcross_core::{
    BraidError, DescentLevel, Event, F2Vector, PureBraidWord, TrackedBraid, Trajectory,
};

use crate::CmdError;

/// Renders a report as the exact bytes the command prints: pretty
/// JSON and a trailing newline.
pub fn render<T: Serialize>(report: &T) -> Result<String, CmdError> {
    let body = serde_json::to_string_pretty(report)
        .map_err(|e| CmdError::malformed(format!("could not serialize report: {e}")))?;
    Ok(format!("{body}\n"))
}

/// The numeric guards that decisions in a geometric run depend on;
/// printed in every report that runs the corresponding stages.
#[derive(Serialize)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moduli_validation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection_margin: Option<f64>,
    pub loop_closure: f64,
    pub coincidence: f64,
    pub event_isolation: f64,
    pub delaunay_disk: f64,
    pub antipode_guard: f64,
}

impl Tolerances {
    pub fn tracker_only() -> Self {
        Tolerances {
            moduli_validation: None,
            projection_margin: None,
            loop_closure: CLOSURE_TOL,
            coincidence: COINCIDENCE_TOL,
            event_isolation: EVENT_ISOLATION,
            delaunay_disk: DISK_REL_TOL,
            antipode_guard: ANTIPODE_GUARD,
        }
    }

    pub fn with_moduli(tol: f64) -> Self {
        Tolerances {
            moduli_validation: Some(tol),
            projection_margin: Some(PROJECTION_MARGIN),
            loop_closure: CLOSURE_TOL.max(MODULI_CLOSURE_TOL),
            coincidence: COINCIDENCE_TOL,
            event_isolation: EVENT_ISOLATION,
            delaunay_disk: DISK_REL_TOL,
            antipode_guard: ANTIPODE_GUARD,
        }
    }
}

/// A one-line summary of a trajectory inside a larger report.
#[derive(Serialize)]
pub struct TrajectorySummary {
    pub mode: &'static str,
    pub n: u8,
    pub samples: usize,
    #[serde(rename = "loop")]
    pub is_loop: bool,
}

impl TrajectorySummary {
    pub fn of(tr: &Trajectory) -> Self {
        TrajectorySummary {
            mode: match tr.mode() {
                wallcross_core::TrackMode::Plane => "plane",
                wallcross_core::TrackMode::Sphere => "sphere",
            },
            n: tr.n(),
            samples: tr.sample_count(),
            is_loop: tr.is_loop(),
        }
    }
}

/// Braid extraction stage: the crossing word, the projection axis
/// that turned out generic, and the raw event log.
#[derive(Serialize)]
pub struct BraidStage {
    pub word: Vec<String>,
    pub axis_angle: f64,
    pub events: Vec<Event>,
}

impl BraidStage {
    pub fn of(tb: &TrackedBraid) -> Self {
        BraidStage {
            word: tb.braid.word().texts(),
            axis_angle: tb.axis_angle,
            events: tb.events.clone(),
        }
    }
}

/// Combing stage: the pure-braid word and its linking numbers.
#[derive(Serialize)]
pub struct PureStage {
    pub word: Vec<String>,
    pub linking_numbers: BTreeMap<String, i64>,
}

impl PureStage {
    pub fn of(pure: &PureBraidWord) -> Self {
        PureStage {
            word: pure.word().texts(),
            linking_numbers: lk_map(&pure.linking_numbers()),
        }
    }
}

/// Linking numbers keyed as `"i,j"` so they serialize to a JSON
/// object with a deterministic key order.
pub fn lk_map(lk: &BTreeMap<(u8, u8), i64>) -> BTreeMap<String, i64> {
    lk.iter()
        .map(|(&(i, j), &v)| (format!("{i},{j}"), v))
        .collect()
}

/// Homomorphism stage of a pipeline run.
#[derive(Serialize)]
pub struct HomStage {
    pub kind: String,
    pub n: u8,
    pub strict: bool,
    pub word: Vec<String>,
    pub skipped_factors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Final invariant of a pipeline run: the F2 vector (for `xi`, the
/// canonical pentagon-quotient representative) as a bitstring.
#[derive(Serialize)]
pub struct InvariantStage {
    pub f2_vector: String,
    pub length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f2_vector_raw: Option<String>,
}

/// Everything the hom stage of a run produces.
pub struct HomOutcome {
    pub image_texts: Vec<String>,
    pub skipped: usize,
    pub vector: F2Vector,
    pub vector_raw: Option<F2Vector>,
    pub note: Option<String>,
}

impl HomOutcome {
    pub fn stage(&self, kind: HomKind, n: u8, strict: bool) -> HomStage {
        HomStage {
            kind: kind.to_string(),
            n,
            strict,
            word: self.image_texts.clone(),
            skipped_factors: self.skipped,
            note: self.note.clone(),
        }
    }

    pub fn invariant(&self) -> InvariantStage {
        InvariantStage {
            f2_vector: self.vector.to_bitstring(),
            length: self.vector.len(),
            f2_vector_raw: self.vector_raw.as_ref().map(F2Vector::to_bitstring),
        }
    }
}

fn hom_error(e: HomError) -> CmdError {
    match e {
        HomError::InvalidFactor(_) => CmdError::rejected(e),
        _ => CmdError::malformed(e),
    }
}

/// Applies the chosen homomorphism to a combed pure braid and
/// abelianizes the image. Below the map's smallest strand count the
/// target group has no generators, so the image is the empty word and
/// the vector is empty; the note says so.
pub fn run_hom(
    kind: HomKind,
    strict: bool,
    pure: &PureBraidWord,
) -> Result<HomOutcome, CmdError> {
    let n = pure.n();
    let min = kind.min_n();
    if n < min {
        return Ok(HomOutcome {
            image_texts: Vec::new(),
            skipped: 0,
            vector: F2Vector::zeros(0),
            vector_raw: matches!(kind, HomKind::Xi).then(|| F2Vector::zeros(0)),
            note: Some(format!(
                "{kind} needs at least {min} strands; on {n} strands the target \
                 group has no generators and the image is empty"
            )),
        });
    }
    let spec = HomSpec::new(kind, n, strict).map_err(hom_error)?;
    let app = apply_hom(&spec, pure).map_err(hom_error)?;
    match (kind, &app.image) {
        (HomKind::Phi, HomImage::Gnk(w)) => Ok(HomOutcome {
            image_texts: w.texts(),
            skipped: app.skipped,
            vector: parity_vector(n, 3, w).map_err(CmdError::malformed)?,
            vector_raw: None,
            note: None,
        }),
        (HomKind::Psi, HomImage::Gnk(w)) => Ok(HomOutcome {
            image_texts: w.texts(),
            skipped: app.skipped,
            vector: parity_vector(n, 4, w).map_err(CmdError::malformed)?,
            vector_raw: None,
            note: None,
        }),
        (HomKind::Xi, HomImage::Gamma(w)) => {
            let p = GammaPresentation::new(n).map_err(CmdError::malformed)?;
            Ok(HomOutcome {
                image_texts: w.texts(),
                skipped: app.skipped,
                vector: p
                    .abelianize_mod_pentagons(w)
                    .map_err(CmdError::malformed)?,
                vector_raw: Some(p.abelianize_raw(w).map_err(CmdError::malformed)?),
                note: None,
            })
        }
        _ => Err(CmdError::malformed(
            "homomorphism image landed in an unexpected alphabet",
        )),
    }
}

pub fn braid_error(e: BraidError) -> CmdError {
    match e {
        BraidError::NotPure { .. } | BraidError::Comb(_) => CmdError::rejected(e),
        _ => CmdError::malformed(e),
    }
}

/// Descent stage of a pipeline run: the route taken and the per-level
/// certificates and projection margins.
#[derive(Serialize)]
pub struct DescentStage {
    pub route: Vec<u8>,
    pub seed: u64,
    pub levels: Vec<DescentLevel>,
}
