//! Command-line front end for the wallcross toolkit.
//!
//! Every subcommand reads JSON (inline or from a file), runs the
//! corresponding core operations, and prints one pretty-printed JSON
//! report to stdout. Stdout is byte-identical for identical
//! configuration and seed; timings go to stderr. Exit codes: 0 on
//! success, 2 when validation or genericity rejects the input, 3 when
//! the input or the command line is malformed.

pub mod demos;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wallcross_core::gamma::GammaPresentation;
use wallcross_core::gnk::{parity_vector, GnkPresentation};
use wallcross_core::homs::HomKind;
use wallcross_core::moduli::VALIDATE_TOL;
use wallcross_core::tracker::{braid_word, g3_word, g4_word, gamma4_word, spherical_reduce};
use wallcross_core::words::parse_word;
use wallcross_core::{
    comb, Event, GammaGenerator, GnkGenerator, GroupWord, HyperplaneLoop, ModuliCertificate,
    PureBraidGen, PureBraidWord, RawHyperplaneLoop, RawTrajectory, SearchBudget, TrackMode,
    Trajectory, Verdict,
};

use report::{
    lk_map, render, BraidStage, DescentStage, HomStage, InvariantStage, PureStage,
    Tolerances, TrajectorySummary,
};

// ---------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------

/// A command failure carrying the process exit code: 2 for
/// validation/genericity rejections, 3 for malformed input.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    pub fn malformed(msg: impl Display) -> Self {
        CmdError {
            code: 3,
            message: msg.to_string(),
        }
    }

    pub fn rejected(msg: impl Display) -> Self {
        CmdError {
            code: 2,
            message: msg.to_string(),
        }
    }
}

// ---------------------------------------------------------------
// Command-line grammar
// ---------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "wallcross",
    version,
    about = "Involutive wall-crossing groups, braid extraction, and hyperplane-moduli pipelines",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect the finitely presented target groups.
    Groups {
        #[command(subcommand)]
        cmd: GroupsCmd,
    },
    /// Normalize, abelianize, or compare words in the target groups.
    Word {
        #[command(subcommand)]
        cmd: WordCmd,
    },
    /// Apply one of the braid homomorphisms to a pure-braid word.
    Hom(HomArgs),
    /// Extract event words from a trajectory document.
    Track(TrackArgs),
    /// Validate or descend a loop of hyperplanes.
    Moduli {
        #[command(subcommand)]
        cmd: ModuliCmd,
    },
    /// Run the full loop-to-invariant pipeline on one document.
    Pipeline(PipelineArgs),
}

#[derive(Subcommand)]
enum GroupsCmd {
    /// Print generator and relation counts.
    Info(GroupsInfoArgs),
}

#[derive(Args)]
struct GroupsInfoArgs {
    /// Index count n.
    #[arg(long)]
    n: u8,
    /// Subset size k of the plain involutive group.
    #[arg(long, conflicts_with = "gamma")]
    k: Option<u8>,
    /// Inspect the oriented quadruple group instead.
    #[arg(long)]
    gamma: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GroupChoice {
    Gnk,
    Gamma,
}

#[derive(Subcommand)]
enum WordCmd {
    /// Reduce a word to its normal form.
    Normalize(WordArgs),
    /// Letter-parity vector of a word (for gamma: raw and pentagon-quotient).
    Abelianize(WordArgs),
    /// Bounded-search equivalence of two words.
    Equiv(EquivArgs),
}

#[derive(Args)]
struct WordArgs {
    /// Which alphabet the word lives in.
    #[arg(long, value_enum)]
    group: GroupChoice,
    /// Index count n.
    #[arg(long)]
    n: u8,
    /// Subset size k (gnk only).
    #[arg(long)]
    k: Option<u8>,
    /// The word as a JSON array of letters, e.g. '["a_1_2_3"]'.
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct EquivArgs {
    #[command(flatten)]
    word: WordArgs,
    /// The word to compare against, same format as --word.
    #[arg(long)]
    other: String,
    /// Search budget: maximum distinct states.
    #[arg(long, default_value_t = SearchBudget::default().max_states)]
    max_states: usize,
    /// Search budget: maximum breadth-first rounds.
    #[arg(long, default_value_t = SearchBudget::default().max_depth)]
    max_depth: usize,
    /// Search budget: letters a candidate may exceed the inputs by.
    #[arg(long, default_value_t = SearchBudget::default().len_slack)]
    len_slack: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum HomChoice {
    Phi,
    Psi,
    Xi,
}

impl From<HomChoice> for HomKind {
    fn from(c: HomChoice) -> HomKind {
        match c {
            HomChoice::Phi => HomKind::Phi,
            HomChoice::Psi => HomKind::Psi,
            HomChoice::Xi => HomKind::Xi,
        }
    }
}

#[derive(Args)]
struct HomArgs {
    /// Which homomorphism to apply.
    #[arg(long, value_enum)]
    kind: HomChoice,
    /// Strand count of the pure braid group.
    #[arg(long)]
    n: u8,
    /// Pure-braid word as a JSON array, e.g. '["b_1_2", "b_2_3^-1"]'.
    #[arg(long)]
    word: String,
    /// Error on colliding factor indices instead of skipping them.
    #[arg(long)]
    strict: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EmitChoice {
    G3,
    G4,
    Gamma4,
    Braid,
}

#[derive(Args)]
struct TrackArgs {
    /// Trajectory JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Which word to extract.
    #[arg(long, value_enum)]
    emit: EmitChoice,
}

#[derive(Subcommand)]
enum ModuliCmd {
    /// Check the general-position certificate of a hyperplane loop.
    Validate(ModuliValidateArgs),
    /// Restrict a loop down to base points on the sphere.
    Descend(ModuliDescendArgs),
}

#[derive(Args)]
struct ModuliValidateArgs {
    /// Hyperplane-loop JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Margin below which a determinant counts as degenerate.
    #[arg(long, default_value_t = VALIDATE_TOL)]
    tol: f64,
}

#[derive(Args)]
struct ModuliDescendArgs {
    /// Hyperplane-loop JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Hyperplane to drop at each level, e.g. 5,4. Default: n, n-1, ...
    #[arg(long, value_delimiter = ',')]
    route: Option<Vec<u8>>,
    /// Seed for the projection-point draws.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Validation tolerance at every level.
    #[arg(long, default_value_t = VALIDATE_TOL)]
    tol: f64,
    /// Also reduce to the plane and extract this word.
    #[arg(long, value_enum)]
    emit: Option<EmitChoice>,
}

#[derive(Args)]
struct PipelineArgs {
    /// Hyperplane-loop or trajectory JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Hyperplane to drop at each level (moduli input only).
    #[arg(long, value_delimiter = ',')]
    route: Option<Vec<u8>>,
    /// Seed for the projection-point draws (moduli input only).
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Homomorphism applied to the combed braid.
    #[arg(long, value_enum, default_value_t = HomChoice::Phi)]
    hom: HomChoice,
    /// Error on colliding factor indices instead of skipping them.
    #[arg(long)]
    strict: bool,
    /// Moduli validation tolerance.
    #[arg(long, default_value_t = VALIDATE_TOL)]
    tol: f64,
}

// ---------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------

/// Parses `argv` and runs the selected command, returning the process
/// exit code. Reports go to stdout, diagnostics and timings to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
        }
    };
    let started = Instant::now();
    match dispatch(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            eprintln!("# total: {:.3} ms", started.elapsed().as_secs_f64() * 1e3);
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<String, CmdError> {
    match cmd {
        Cmd::Groups {
            cmd: GroupsCmd::Info(a),
        } => cmd_groups_info(a),
        Cmd::Word { cmd } => match cmd {
            WordCmd::Normalize(a) => cmd_word_normalize(a),
            WordCmd::Abelianize(a) => cmd_word_abelianize(a),
            WordCmd::Equiv(a) => cmd_word_equiv(a),
        },
        Cmd::Hom(a) => cmd_hom(a),
        Cmd::Track(a) => cmd_track(a),
        Cmd::Moduli { cmd } => match cmd {
            ModuliCmd::Validate(a) => cmd_moduli_validate(a),
            ModuliCmd::Descend(a) => cmd_moduli_descend(a),
        },
        Cmd::Pipeline(a) => cmd_pipeline(a),
    }
}

// ---------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------

fn load_value(path: &Path) -> Result<serde_json::Value, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CmdError::malformed(format!("{} is not JSON: {e}", path.display())))
}

fn trajectory_from_value(v: serde_json::Value) -> Result<Trajectory, CmdError> {
    let raw: RawTrajectory = serde_json::from_value(v)
        .map_err(|e| CmdError::malformed(format!("not a trajectory document: {e}")))?;
    Trajectory::try_from(raw).map_err(CmdError::rejected)
}

fn loop_from_value(v: serde_json::Value) -> Result<HyperplaneLoop, CmdError> {
    let raw: RawHyperplaneLoop = serde_json::from_value(v)
        .map_err(|e| CmdError::malformed(format!("not a hyperplane-loop document: {e}")))?;
    HyperplaneLoop::try_from(raw).map_err(CmdError::rejected)
}

fn parse_texts(json: &str) -> Result<Vec<String>, CmdError> {
    serde_json::from_str(json).map_err(|e| {
        CmdError::malformed(format!("expected a JSON array of letter strings: {e}"))
    })
}

fn parse_gnk_word(json: &str) -> Result<GroupWord<GnkGenerator>, CmdError> {
    parse_word(&parse_texts(json)?).map_err(CmdError::malformed)
}

fn parse_gamma_word(json: &str) -> Result<GroupWord<GammaGenerator>, CmdError> {
    parse_word(&parse_texts(json)?).map_err(CmdError::malformed)
}

fn parse_pure_word(json: &str, n: u8) -> Result<PureBraidWord, CmdError> {
    let w: GroupWord<PureBraidGen> =
        parse_word(&parse_texts(json)?).map_err(CmdError::malformed)?;
    PureBraidWord::new(n, w).map_err(CmdError::malformed)
}

// ---------------------------------------------------------------
// groups info
// ---------------------------------------------------------------

#[derive(Serialize)]
struct GnkRelationReport {
    involution: usize,
    far_commutativity: usize,
    tetrahedral: usize,
}

#[derive(Serialize)]
struct GnkInfoReport {
    group: &'static str,
    n: u8,
    k: u8,
    generators: usize,
    relations: GnkRelationReport,
}

#[derive(Serialize)]
struct GammaRelationReport {
    involution: usize,
    far_commutativity: usize,
    pentagon: usize,
}

#[derive(Serialize)]
struct GammaInfoReport {
    group: &'static str,
    n: u8,
    generators: usize,
    relations: GammaRelationReport,
    f2_quotient_dim: usize,
}

fn cmd_groups_info(a: GroupsInfoArgs) -> Result<String, CmdError> {
    match (a.k, a.gamma) {
        (Some(k), false) => {
            let p = GnkPresentation::new(a.n, k).map_err(CmdError::malformed)?;
            let c = p.relation_counts();
            render(&GnkInfoReport {
                group: "gnk",
                n: a.n,
                k,
                generators: p.generators().len(),
                relations: GnkRelationReport {
                    involution: c.involution,
                    far_commutativity: c.far_commutativity,
                    tetrahedral: c.tetrahedral,
                },
            })
        }
        (None, true) => {
            let p = GammaPresentation::new(a.n).map_err(CmdError::malformed)?;
            let c = p.relation_counts();
            render(&GammaInfoReport {
                group: "gamma4",
                n: a.n,
                generators: p.generators().len(),
                relations: GammaRelationReport {
                    involution: c.involution,
                    far_commutativity: c.far_commutativity,
                    pentagon: c.pentagon,
                },
                f2_quotient_dim: p.quotient_dim(),
            })
        }
        _ => Err(CmdError::malformed(
            "pass exactly one of --k <K> or --gamma",
        )),
    }
}

// ---------------------------------------------------------------
// word normalize / abelianize / equiv
// ---------------------------------------------------------------

fn need_k(a: &WordArgs) -> Result<u8, CmdError> {
    match (a.group, a.k) {
        (GroupChoice::Gnk, Some(k)) => Ok(k),
        (GroupChoice::Gnk, None) => Err(CmdError::malformed("--group gnk needs --k")),
        (GroupChoice::Gamma, Some(_)) => {
            Err(CmdError::malformed("--group gamma does not take --k"))
        }
        (GroupChoice::Gamma, None) => Ok(4),
    }
}

#[derive(Serialize)]
struct NormalizeReport {
    group: &'static str,
    n: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u8>,
    input: Vec<String>,
    normalized: Vec<String>,
    length: usize,
}

fn cmd_word_normalize(a: WordArgs) -> Result<String, CmdError> {
    let k = need_k(&a)?;
    let input = parse_texts(&a.word)?;
    match a.group {
        GroupChoice::Gnk => {
            let w = parse_gnk_word(&a.word)?;
            // Parity lookup doubles as an index-range check.
            parity_vector(a.n, k, &w).map_err(CmdError::malformed)?;
            render(&NormalizeReport {
                group: "gnk",
                n: a.n,
                k: Some(k),
                input,
                normalized: w.texts(),
                length: w.len(),
            })
        }
        GroupChoice::Gamma => {
            let p = GammaPresentation::new(a.n).map_err(CmdError::malformed)?;
            let w = parse_gamma_word(&a.word)?;
            p.validate_word(&w).map_err(CmdError::malformed)?;
            render(&NormalizeReport {
                group: "gamma4",
                n: a.n,
                k: None,
                input,
                normalized: w.texts(),
                length: w.len(),
            })
        }
    }
}

#[derive(Serialize)]
struct AbelianizeReport {
    group: &'static str,
    n: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u8>,
    word: Vec<String>,
    abelianization: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    abelianization_raw: Option<String>,
    support: Vec<String>,
}

fn cmd_word_abelianize(a: WordArgs) -> Result<String, CmdError> {
    let k = need_k(&a)?;
    match a.group {
        GroupChoice::Gnk => {
            let w = parse_gnk_word(&a.word)?;
            let v = parity_vector(a.n, k, &w).map_err(CmdError::malformed)?;
            let gens =
                wallcross_core::enumerate_generators(a.n, k).map_err(CmdError::malformed)?;
            let support = v
                .ones_positions()
                .into_iter()
                .map(|i| wallcross_core::Generator::text(&gens[i]))
                .collect();
            render(&AbelianizeReport {
                group: "gnk",
                n: a.n,
                k: Some(k),
                word: w.texts(),
                abelianization: v.to_bitstring(),
                abelianization_raw: None,
                support,
            })
        }
        GroupChoice::Gamma => {
            let p = GammaPresentation::new(a.n).map_err(CmdError::malformed)?;
            let w = parse_gamma_word(&a.word)?;
            let raw = p.abelianize_raw(&w).map_err(CmdError::malformed)?;
            let quo = p.abelianize_mod_pentagons(&w).map_err(CmdError::malformed)?;
            let support = quo
                .ones_positions()
                .into_iter()
                .map(|i| wallcross_core::Generator::text(&p.generators()[i]))
                .collect();
            render(&AbelianizeReport {
                group: "gamma4",
                n: a.n,
                k: None,
                word: w.texts(),
                abelianization: quo.to_bitstring(),
                abelianization_raw: Some(raw.to_bitstring()),
                support,
            })
        }
    }
}

#[derive(Serialize)]
struct BudgetReport {
    max_states: usize,
    max_depth: usize,
    len_slack: usize,
}

#[derive(Serialize)]
struct EquivReport {
    group: &'static str,
    n: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u8>,
    word: Vec<String>,
    other: Vec<String>,
    verdict: &'static str,
    budget: BudgetReport,
}

fn cmd_word_equiv(a: EquivArgs) -> Result<String, CmdError> {
    let k = need_k(&a.word)?;
    let budget = SearchBudget {
        max_states: a.max_states,
        max_depth: a.max_depth,
        len_slack: a.len_slack,
    };
    let (group, kk, w1t, w2t, verdict) = match a.word.group {
        GroupChoice::Gnk => {
            let p = GnkPresentation::new(a.word.n, k).map_err(CmdError::malformed)?;
            let w1 = parse_gnk_word(&a.word.word)?;
            let w2 = parse_gnk_word(&a.other)?;
            let v = p
                .equivalent_bounded(&w1, &w2, budget)
                .map_err(CmdError::malformed)?;
            ("gnk", Some(k), w1.texts(), w2.texts(), v)
        }
        GroupChoice::Gamma => {
            let p = GammaPresentation::new(a.word.n).map_err(CmdError::malformed)?;
            let w1 = parse_gamma_word(&a.word.word)?;
            let w2 = parse_gamma_word(&a.other)?;
            let v = p
                .equivalent_bounded(&w1, &w2, budget)
                .map_err(CmdError::malformed)?;
            ("gamma4", None, w1.texts(), w2.texts(), v)
        }
    };
    render(&EquivReport {
        group,
        n: a.word.n,
        k: kk,
        word: w1t,
        other: w2t,
        verdict: match verdict {
            Verdict::Equal => "equal",
            Verdict::Unknown => "unknown",
        },
        budget: BudgetReport {
            max_states: a.max_states,
            max_depth: a.max_depth,
            len_slack: a.len_slack,
        },
    })
}

// ---------------------------------------------------------------
// hom
// ---------------------------------------------------------------

#[derive(Serialize)]
struct HomReport {
    kind: String,
    n: u8,
    strict: bool,
    input: Vec<String>,
    word: Vec<String>,
    abelianization: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    abelianization_raw: Option<String>,
    skipped_factors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn cmd_hom(a: HomArgs) -> Result<String, CmdError> {
    let kind: HomKind = a.kind.into();
    let pure = parse_pure_word(&a.word, a.n)?;
    let out = report::run_hom(kind, a.strict, &pure)?;
    render(&HomReport {
        kind: kind.to_string(),
        n: a.n,
        strict: a.strict,
        input: pure.word().texts(),
        word: out.image_texts.clone(),
        abelianization: out.vector.to_bitstring(),
        abelianization_raw: out.vector_raw.as_ref().map(|v| v.to_bitstring()),
        skipped_factors: out.skipped,
        note: out.note.clone(),
    })
}

// ---------------------------------------------------------------
// track
// ---------------------------------------------------------------

#[derive(Serialize)]
struct TrackReport {
    emit: &'static str,
    trajectory: TrajectorySummary,
    tolerances: Tolerances,
    word: Vec<String>,
    events: Vec<Event>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis_angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pure: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    combed: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    linking_numbers: Option<BTreeMap<String, i64>>,
}

fn emit_name(e: EmitChoice) -> &'static str {
    match e {
        EmitChoice::G3 => "g3",
        EmitChoice::G4 => "g4",
        EmitChoice::Gamma4 => "gamma4",
        EmitChoice::Braid => "braid",
    }
}

fn cmd_track(a: TrackArgs) -> Result<String, CmdError> {
    let tr = trajectory_from_value(load_value(&a.input)?)?;
    let summary = TrajectorySummary::of(&tr);
    let mut rep = TrackReport {
        emit: emit_name(a.emit),
        trajectory: summary,
        tolerances: Tolerances::tracker_only(),
        word: Vec::new(),
        events: Vec::new(),
        axis_angle: None,
        pure: None,
        combed: None,
        linking_numbers: None,
    };
    match a.emit {
        EmitChoice::G3 => {
            let out = g3_word(&tr).map_err(CmdError::rejected)?;
            rep.word = out.word.texts();
            rep.events = out.events;
        }
        EmitChoice::G4 => {
            let out = g4_word(&tr).map_err(CmdError::rejected)?;
            rep.word = out.word.texts();
            rep.events = out.events;
        }
        EmitChoice::Gamma4 => {
            let out = gamma4_word(&tr).map_err(CmdError::rejected)?;
            rep.word = out.word.texts();
            rep.events = out.events;
        }
        EmitChoice::Braid => {
            let out = braid_word(&tr).map_err(CmdError::rejected)?;
            rep.word = out.braid.word().texts();
            rep.axis_angle = Some(out.axis_angle);
            rep.pure = Some(out.braid.is_pure());
            if out.braid.is_pure() {
                let combed = comb(&out.braid).map_err(report::braid_error)?;
                rep.combed = Some(combed.word().texts());
                rep.linking_numbers = Some(lk_map(&combed.linking_numbers()));
            }
            rep.events = out.events;
        }
    }
    render(&rep)
}

// ---------------------------------------------------------------
// moduli validate / descend
// ---------------------------------------------------------------

#[derive(Serialize)]
struct ValidateReport {
    n: u8,
    m: u8,
    samples: usize,
    valid: bool,
    #[serde(flatten)]
    certificate: ModuliCertificate,
}

fn cmd_moduli_validate(a: ModuliValidateArgs) -> Result<String, CmdError> {
    let lp = loop_from_value(load_value(&a.input)?)?;
    let cert = wallcross_core::validate(&lp, a.tol);
    let valid = cert.is_valid();
    let out = render(&ValidateReport {
        n: lp.n(),
        m: lp.m(),
        samples: lp.times().len(),
        valid,
        certificate: cert,
    })?;
    if valid {
        Ok(out)
    } else {
        // The report still goes to stdout; the exit code says no.
        print!("{out}");
        Err(CmdError::rejected("general-position validation failed"))
    }
}

fn default_route(lp: &HyperplaneLoop) -> Vec<u8> {
    (0..lp.m()).map(|l| lp.n() - l).collect()
}

#[derive(Serialize)]
struct DescendReport {
    n: u8,
    m: u8,
    route: Vec<u8>,
    seed: u64,
    tolerance: f64,
    levels: Vec<wallcross_core::DescentLevel>,
    trajectory: Trajectory,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced: Option<Trajectory>,
    #[serde(skip_serializing_if = "Option::is_none")]
    emit: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    events: Option<Vec<Event>>,
}

fn cmd_moduli_descend(a: ModuliDescendArgs) -> Result<String, CmdError> {
    let lp = loop_from_value(load_value(&a.input)?)?;
    let route = a.route.unwrap_or_else(|| default_route(&lp));
    let descent = lp
        .descend(&route, a.seed, a.tol)
        .map_err(CmdError::rejected)?;
    let mut rep = DescendReport {
        n: lp.n(),
        m: lp.m(),
        route,
        seed: a.seed,
        tolerance: a.tol,
        levels: descent.levels,
        trajectory: descent.trajectory.clone(),
        reduced: None,
        emit: None,
        word: None,
        events: None,
    };
    if let Some(emit) = a.emit {
        let flat = spherical_reduce(&descent.trajectory).map_err(CmdError::rejected)?;
        rep.emit = Some(emit_name(emit));
        match emit {
            EmitChoice::G3 => {
                let out = g3_word(&flat).map_err(CmdError::rejected)?;
                rep.word = Some(out.word.texts());
                rep.events = Some(out.events);
            }
            EmitChoice::G4 => {
                let out = g4_word(&flat).map_err(CmdError::rejected)?;
                rep.word = Some(out.word.texts());
                rep.events = Some(out.events);
            }
            EmitChoice::Gamma4 => {
                let out = gamma4_word(&flat).map_err(CmdError::rejected)?;
                rep.word = Some(out.word.texts());
                rep.events = Some(out.events);
            }
            EmitChoice::Braid => {
                let out = braid_word(&flat).map_err(CmdError::rejected)?;
                rep.word = Some(out.braid.word().texts());
                rep.events = Some(out.events);
            }
        }
        rep.reduced = Some(flat);
    }
    render(&rep)
}

// ---------------------------------------------------------------
// pipeline
// ---------------------------------------------------------------

#[derive(Serialize)]
struct PipelineConfig {
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    route: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    hom: String,
    strict: bool,
    tolerances: Tolerances,
}

#[derive(Serialize)]
struct PipelineReport {
    config: PipelineConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    descent: Option<DescentStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spherical: Option<TrajectorySummary>,
    planar: TrajectorySummary,
    braid: BraidStage,
    pure: PureStage,
    hom: HomStage,
    invariant: InvariantStage,
}

fn stage<T>(name: &str, f: impl FnOnce() -> Result<T, CmdError>) -> Result<T, CmdError> {
    let t0 = Instant::now();
    let out = f().map_err(|e| CmdError {
        code: e.code,
        message: format!("stage {name}: {}", e.message),
    })?;
    eprintln!("# {name}: {:.3} ms", t0.elapsed().as_secs_f64() * 1e3);
    Ok(out)
}

fn cmd_pipeline(a: PipelineArgs) -> Result<String, CmdError> {
    let value = load_value(&a.input)?;
    let kind: HomKind = a.hom.into();
    let is_moduli = value
        .as_object()
        .map(|o| o.contains_key("covectors"))
        .unwrap_or(false);

    let (config_route, config_seed, descent_stage, spherical, planar);
    if is_moduli {
        let lp = loop_from_value(value)?;
        let route = a.route.clone().unwrap_or_else(|| default_route(&lp));
        let descent = stage("descent", || {
            lp.descend(&route, a.seed, a.tol).map_err(CmdError::rejected)
        })?;
        let flat = stage("spherical_reduce", || {
            spherical_reduce(&descent.trajectory).map_err(CmdError::rejected)
        })?;
        config_route = Some(route.clone());
        config_seed = Some(a.seed);
        spherical = Some(TrajectorySummary::of(&descent.trajectory));
        descent_stage = Some(DescentStage {
            route,
            seed: a.seed,
            levels: descent.levels,
        });
        planar = flat;
    } else {
        let tr = trajectory_from_value(value)?;
        config_route = None;
        config_seed = None;
        descent_stage = None;
        match tr.mode() {
            TrackMode::Sphere => {
                spherical = Some(TrajectorySummary::of(&tr));
                planar = stage("spherical_reduce", || {
                    spherical_reduce(&tr).map_err(CmdError::rejected)
                })?;
            }
            TrackMode::Plane => {
                spherical = None;
                planar = tr;
            }
        }
    }

    if !planar.is_loop() {
        return Err(CmdError::rejected(
            "pipeline needs a loop trajectory: open paths give impure braids",
        ));
    }

    let tracked = stage("braid_word", || {
        braid_word(&planar).map_err(CmdError::rejected)
    })?;
    let pure = stage("comb", || comb(&tracked.braid).map_err(report::braid_error))?;
    let out = stage("hom", || report::run_hom(kind, a.strict, &pure))?;

    render(&PipelineReport {
        config: PipelineConfig {
            source: if is_moduli { "moduli" } else { "trajectory" },
            route: config_route,
            seed: config_seed,
            hom: kind.to_string(),
            strict: a.strict,
            tolerances: if is_moduli {
                Tolerances::with_moduli(a.tol)
            } else {
                Tolerances::tracker_only()
            },
        },
        descent: descent_stage,
        spherical,
        planar: TrajectorySummary::of(&planar),
        braid: BraidStage::of(&tracked),
        pure: PureStage::of(&pure),
        hom: out.stage(kind, pure.n(), a.strict),
        invariant: out.invariant(),
    })
}
