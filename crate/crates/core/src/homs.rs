//! Homomorphisms from planar pure braid groups into the involutive
//! target groups.
//!
//! Three maps are provided, all defined on the standard pure braid
//! generators `b_{ij}` (1 ≤ i < j ≤ n) and extended multiplicatively:
//!
//! * `phi` — lands in the triple-index group (k = 3),
//! * `psi` — lands in the quadruple-index group (k = 4),
//! * `xi`  — lands in the oriented quadruple-index group Γ.
//!
//! The generator images are built from explicit product formulas whose
//! index bounds are implemented verbatim. Some factor slots produced
//! by those bounds carry repeated or out-of-range indices; such slots
//! do not name a generator. In [`Mode::Lenient`] they are skipped and
//! counted (the `skipped` field of [`HomWord`]), in [`Mode::Strict`]
//! the first such slot aborts with [`HomError::InvalidFactor`]. The
//! skip count is per *instantiated* factor slot: a squared inner word
//! contributes its skips twice, a conjugating word once per side.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::braid::PureBraidWord;
use crate::gamma::GammaGenerator;
use crate::gnk::{GnkGenerator, GroupError, MAX_N};
use crate::words::{Generator, GroupWord, WordError};

#[derive(Debug, Error)]
pub enum HomError {
    #[error("{kind} expects {min} <= n <= {max}, got n = {n}")]
    UnsupportedN {
        kind: HomKind,
        min: u8,
        max: u8,
        n: u8,
    },
    #[error("index pair ({i}, {j}) needs distinct 1-based entries at most {n}")]
    BadPair { i: u8, j: u8, n: u8 },
    #[error("expected an ascending pair, got ({i}, {j})")]
    NotAscending { i: u8, j: u8 },
    #[error("strict mode: factor {0} has colliding or out-of-range indices")]
    InvalidFactor(String),
    #[error("word is on {got} strands but the homomorphism expects {expected}")]
    StrandMismatch { expected: u8, got: u8 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Which of the three homomorphisms to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomKind {
    Phi,
    Psi,
    Xi,
}

impl HomKind {
    /// Smallest strand count on which the map is defined.
    pub const fn min_n(self) -> u8 {
        match self {
            HomKind::Phi => 3,
            HomKind::Psi | HomKind::Xi => 4,
        }
    }
}

impl fmt::Display for HomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HomKind::Phi => "phi",
            HomKind::Psi => "psi",
            HomKind::Xi => "xi",
        })
    }
}

impl FromStr for HomKind {
    type Err = HomError;

    fn from_str(s: &str) -> Result<Self, HomError> {
        match s.trim() {
            "phi" => Ok(HomKind::Phi),
            "psi" => Ok(HomKind::Psi),
            "xi" => Ok(HomKind::Xi),
            other => Err(HomError::InvalidFactor(format!(
                "unknown homomorphism kind {other:?} (expected phi, psi, or xi)"
            ))),
        }
    }
}

/// How to treat factor slots with colliding or out-of-range indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Skip the slot and count it.
    #[default]
    Lenient,
    /// Abort on the first such slot.
    Strict,
}

impl From<bool> for Mode {
    fn from(strict: bool) -> Self {
        if strict {
            Mode::Strict
        } else {
            Mode::Lenient
        }
    }
}

/// A fully specified homomorphism: which map, how many strands, and
/// the factor-slot policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomSpec {
    pub kind: HomKind,
    pub n: u8,
    pub strict: bool,
}

impl HomSpec {
    pub fn new(kind: HomKind, n: u8, strict: bool) -> Result<Self, HomError> {
        let spec = HomSpec { kind, n, strict };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HomError> {
        let min = self.kind.min_n();
        if self.n < min || self.n > MAX_N {
            return Err(HomError::UnsupportedN {
                kind: self.kind,
                min,
                max: MAX_N,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        Mode::from(self.strict)
    }
}

/// A word in the target group together with the number of factor
/// slots that were skipped while expanding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomWord<G: Generator> {
    pub word: GroupWord<G>,
    pub skipped: usize,
}

/// Image of a whole braid word under [`apply_hom`]. The target
/// alphabet depends on the homomorphism kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomImage {
    Gnk(GroupWord<GnkGenerator>),
    Gamma(GroupWord<GammaGenerator>),
}

impl HomImage {
    pub fn texts(&self) -> Vec<String> {
        match self {
            HomImage::Gnk(w) => w.texts(),
            HomImage::Gamma(w) => w.texts(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            HomImage::Gnk(w) => w.len(),
            HomImage::Gamma(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Image of a braid word plus the total skip count across all letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomApplication {
    pub image: HomImage,
    pub skipped: usize,
}

fn require_range_pair(i: u8, j: u8, n: u8) -> Result<(), HomError> {
    if i == 0 || j == 0 || i > n || j > n || i == j {
        return Err(HomError::BadPair { i, j, n });
    }
    Ok(())
}

fn require_ascending(i: u8, j: u8, n: u8) -> Result<(), HomError> {
    require_range_pair(i, j, n)?;
    if i > j {
        return Err(HomError::NotAscending { i, j });
    }
    Ok(())
}

/// Validates a raw factor slot: every index in `1..=n` and all
/// pairwise distinct. Returns the indices as `u8` on success.
fn checked_indices(raw: &[i32], n: u8) -> Option<Vec<u8>> {
    let mut out = Vec::with_capacity(raw.len());
    for &x in raw {
        if x < 1 || x > i32::from(n) {
            return None;
        }
        out.push(x as u8);
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(out)
}

fn slot_text(prefix: &str, raw: &[i32]) -> String {
    let parts: Vec<String> = raw.iter().map(|x| x.to_string()).collect();
    format!("{prefix}_({})", parts.join(","))
}

/// Pushes the generator named by `raw` onto `out`, or skips/errors
/// per `mode` when the slot is invalid.
fn gnk_slot(
    raw: &[i32],
    n: u8,
    mode: Mode,
    skipped: &mut usize,
    out: &mut Vec<GnkGenerator>,
) -> Result<(), HomError> {
    match checked_indices(raw, n) {
        Some(v) => {
            let g = GnkGenerator::new(v)?;
            out.push(g);
            Ok(())
        }
        None => match mode {
            Mode::Lenient => {
                *skipped += 1;
                Ok(())
            }
            Mode::Strict => Err(HomError::InvalidFactor(slot_text("a", raw))),
        },
    }
}

/// The triple-index inner word
/// `c_{i,j} = prod_{k=j+1}^{n} a_{i,j,k} * prod_{k=1}^{j-1} a_{i,j,k}`.
///
/// The slot with `k = i` never names a generator, so every call skips
/// (or, in strict mode, errors on) at least one factor.
pub fn c3(i: u8, j: u8, n: u8, mode: Mode) -> Result<HomWord<GnkGenerator>, HomError> {
    require_range_pair(i, j, n)?;
    let (i, j, n) = (i32::from(i), i32::from(j), i32::from(n));
    let mut skipped = 0usize;
    let mut gens = Vec::new();
    for k in (j + 1)..=n {
        gnk_slot(&[i, j, k], n as u8, mode, &mut skipped, &mut gens)?;
    }
    for k in 1..j {
        gnk_slot(&[i, j, k], n as u8, mode, &mut skipped, &mut gens)?;
    }
    Ok(HomWord {
        word: GroupWord::from_generators(gens)?,
        skipped,
    })
}

/// Image of the pure braid generator `b_{ij}` in the triple-index
/// group:
/// `phi(b_{ij}) = c_{i,i+1}^{-1} ... c_{i,j-1}^{-1} c_{i,j}^2 c_{i,j-1} ... c_{i,i+1}`.
pub fn phi(i: u8, j: u8, n: u8, mode: Mode) -> Result<HomWord<GnkGenerator>, HomError> {
    if n < HomKind::Phi.min_n() || n > MAX_N {
        return Err(HomError::UnsupportedN {
            kind: HomKind::Phi,
            min: HomKind::Phi.min_n(),
            max: MAX_N,
            n,
        });
    }
    require_ascending(i, j, n)?;
    let mut guards = Vec::new();
    for m in (i + 1)..j {
        guards.push(c3(i, m, n, mode)?);
    }
    let core = c3(i, j, n, mode)?;
    let skipped =
        2 * core.skipped + 2 * guards.iter().map(|g| g.skipped).sum::<usize>();
    let mut w = GroupWord::empty();
    for g in &guards {
        w = w.concat(&g.word.inverse())?;
    }
    w = w.concat(&core.word)?.concat(&core.word)?;
    for g in guards.iter().rev() {
        w = w.concat(&g.word)?;
    }
    Ok(HomWord { word: w, skipped })
}

/// The three parts `[I, II, III]` of the quadruple-index inner word:
///
/// * part I:   `prod_{p=2}^{j-1} prod_{q=1}^{p-1}   a_{i,j,p,q}`
/// * part II:  `prod_{p=1}^{j-1} prod_{q=1}^{n-j}   a_{i,(j-p),j,(j+q)}`
/// * part III: `prod_{p=1}^{n-j+1} prod_{q=0}^{n-p+1} a_{i,j,(n-p),(n-q)}`
///
/// The bounds are implemented exactly as stated; slots they produce
/// with colliding or out-of-range indices are handled per `mode`.
pub fn c4_parts(
    i: u8,
    j: u8,
    n: u8,
    mode: Mode,
) -> Result<[HomWord<GnkGenerator>; 3], HomError> {
    require_range_pair(i, j, n)?;
    if n < 4 {
        return Err(HomError::UnsupportedN {
            kind: HomKind::Psi,
            min: 4,
            max: MAX_N,
            n,
        });
    }
    let nn = n;
    let (i, j, n) = (i32::from(i), i32::from(j), i32::from(n));

    let mut s1 = 0usize;
    let mut g1 = Vec::new();
    for p in 2..j {
        for q in 1..p {
            gnk_slot(&[i, j, p, q], nn, mode, &mut s1, &mut g1)?;
        }
    }

    let mut s2 = 0usize;
    let mut g2 = Vec::new();
    for p in 1..j {
        for q in 1..=(n - j) {
            gnk_slot(&[i, j - p, j, j + q], nn, mode, &mut s2, &mut g2)?;
        }
    }

    let mut s3 = 0usize;
    let mut g3 = Vec::new();
    for p in 1..=(n - j + 1) {
        for q in 0..=(n - p + 1) {
            gnk_slot(&[i, j, n - p, n - q], nn, mode, &mut s3, &mut g3)?;
        }
    }

    Ok([
        HomWord {
            word: GroupWord::from_generators(g1)?,
            skipped: s1,
        },
        HomWord {
            word: GroupWord::from_generators(g2)?,
            skipped: s2,
        },
        HomWord {
            word: GroupWord::from_generators(g3)?,
            skipped: s3,
        },
    ])
}

/// The quadruple-index inner word `c4_{i,j} = II * I * III`.
pub fn c4(i: u8, j: u8, n: u8, mode: Mode) -> Result<HomWord<GnkGenerator>, HomError> {
    let [p1, p2, p3] = c4_parts(i, j, n, mode)?;
    Ok(HomWord {
        word: p2.word.concat(&p1.word)?.concat(&p3.word)?,
        skipped: p1.skipped + p2.skipped + p3.skipped,
    })
}

/// Image of `b_{ij}` in the quadruple-index group:
/// `psi(b_{ij}) = c4_{i,i+1} ... c4_{i,j-1} c4_{i,j}^2 c4_{i,j-1}^{-1} ... c4_{i,i+1}^{-1}`.
pub fn psi(i: u8, j: u8, n: u8, mode: Mode) -> Result<HomWord<GnkGenerator>, HomError> {
    if n < HomKind::Psi.min_n() || n > MAX_N {
        return Err(HomError::UnsupportedN {
            kind: HomKind::Psi,
            min: HomKind::Psi.min_n(),
            max: MAX_N,
            n,
        });
    }
    require_ascending(i, j, n)?;
    let mut guards = Vec::new();
    for m in (i + 1)..j {
        guards.push(c4(i, m, n, mode)?);
    }
    let core = c4(i, j, n, mode)?;
    let skipped =
        2 * core.skipped + 2 * guards.iter().map(|g| g.skipped).sum::<usize>();
    let mut w = GroupWord::empty();
    for g in &guards {
        w = w.concat(&g.word)?;
    }
    w = w.concat(&core.word)?.concat(&core.word)?;
    for g in guards.iter().rev() {
        w = w.concat(&g.word.inverse())?;
    }
    Ok(HomWord { word: w, skipped })
}

/// The oriented-quadruple letter `d_{p,q,(r,s)}`, resolved to a
/// canonical Γ generator by the relative order of `p`, `q`, `s`:
///
/// ```text
/// p<q<s -> (p,q,r,s)    p<s<q -> (p,r,s,q)    s<p<q -> (r,s,p,q)
/// q<p<s -> (q,p,r,s)    q<s<p -> (q,r,s,p)    s<q<p -> (r,s,q,p)
/// ```
///
/// Errors when the four indices are not pairwise distinct.
pub fn d_oriented(p: u8, q: u8, r: u8, s: u8) -> Result<GammaGenerator, HomError> {
    let tuple = if p < q && q < s {
        [p, q, r, s]
    } else if p < s && s < q {
        [p, r, s, q]
    } else if s < p && p < q {
        [r, s, p, q]
    } else if q < p && p < s {
        [q, p, r, s]
    } else if q < s && s < p {
        [q, r, s, p]
    } else if s < q && q < p {
        [r, s, q, p]
    } else {
        return Err(HomError::InvalidFactor(slot_text(
            "d",
            &[i32::from(p), i32::from(q), i32::from(r), i32::from(s)],
        )));
    };
    Ok(GammaGenerator::new(tuple)?)
}

/// The factor `gamma_{p,q,(i,j)}` of the Γ-valued expansion: either a
/// single oriented letter or the empty word, decided by where `i`
/// sits relative to the sorted triple `{p, q, j}` and by the selector
/// `min - mid + max - 2`:
///
/// * `i` strictly between min and mid, or above max: emit iff the
///   selector is 0;
/// * `i` below min, or strictly between mid and max: emit iff the
///   selector is 1.
///
/// Slots whose four indices collide or leave `1..=n` are skipped (or
/// error in strict mode); a slot that merely evaluates to the empty
/// word is *not* counted as skipped.
pub fn gamma_factor(
    p: u8,
    q: u8,
    i: u8,
    j: u8,
    n: u8,
    mode: Mode,
) -> Result<HomWord<GammaGenerator>, HomError> {
    let raw = [i32::from(p), i32::from(q), i32::from(i), i32::from(j)];
    if checked_indices(&raw, n).is_none() {
        return match mode {
            Mode::Lenient => Ok(HomWord {
                word: GroupWord::empty(),
                skipped: 1,
            }),
            Mode::Strict => Err(HomError::InvalidFactor(format!(
                "gamma_({p},{q})^(({i},{j}))"
            ))),
        };
    }
    let mut m = [p, q, j];
    m.sort_unstable();
    let (mn, md, mx) = (m[0], m[1], m[2]);
    let selector = i32::from(mn) - i32::from(md) + i32::from(mx) - 2;
    let inner_or_above = (mn < i && i < md) || i > mx;
    let emit = if inner_or_above {
        selector == 0
    } else {
        // The remaining positions: below min, or between mid and max.
        selector == 1
    };
    let word = if emit {
        GroupWord::from_generators([d_oriented(p, q, i, j)?])?
    } else {
        GroupWord::empty()
    };
    Ok(HomWord { word, skipped: 0 })
}

/// The Γ-valued inner word `Delta_{(u,v)} = II * I * III` where, with
/// `j := v` (the *second* entry of the pair, also when the pair is
/// reversed):
///
/// * part I:   `prod_{p=2}^{j-1}   prod_{q=1}^{p-1} gamma_{p,q,(u,v)}`
/// * part II:  `prod_{p=1}^{j-1}   prod_{q=1}^{n-j} gamma_{(j-p),(j+q),(u,v)}`
/// * part III: `prod_{p=1}^{n-j-1} prod_{q=0}^{p-1} gamma_{(n-p),(n-q),(u,v)}`
pub fn delta(pair: (u8, u8), n: u8, mode: Mode) -> Result<HomWord<GammaGenerator>, HomError> {
    let (u, v) = pair;
    require_range_pair(u, v, n)?;
    let j = i32::from(v);
    let nn = i32::from(n);
    let mut skipped = 0usize;
    let mut w = GroupWord::empty();

    let push = |w: &mut GroupWord<GammaGenerator>,
                    skipped: &mut usize,
                    p: i32,
                    q: i32|
     -> Result<(), HomError> {
        if p < 1 || p > nn || q < 1 || q > nn {
            return match mode {
                Mode::Lenient => {
                    *skipped += 1;
                    Ok(())
                }
                Mode::Strict => Err(HomError::InvalidFactor(format!(
                    "gamma_({p},{q})^(({u},{v}))"
                ))),
            };
        }
        let f = gamma_factor(p as u8, q as u8, u, v, n, mode)?;
        *skipped += f.skipped;
        *w = w.concat(&f.word)?;
        Ok(())
    };

    for p in 1..j {
        for q in 1..=(nn - j) {
            push(&mut w, &mut skipped, j - p, j + q)?;
        }
    }
    for p in 2..j {
        for q in 1..p {
            push(&mut w, &mut skipped, p, q)?;
        }
    }
    for p in 1..(nn - j) {
        for q in 0..p {
            push(&mut w, &mut skipped, nn - p, nn - q)?;
        }
    }
    Ok(HomWord { word: w, skipped })
}

/// Image of `b_{ij}` in the oriented quadruple-index group:
/// `xi(b_{ij}) = Delta_{(i,i+1)} ... Delta_{(i,j)} Delta_{(j,i)}
///  Delta_{(j-1,i)}^{-1} ... Delta_{(i+1,i)}^{-1}`.
pub fn xi(i: u8, j: u8, n: u8, mode: Mode) -> Result<HomWord<GammaGenerator>, HomError> {
    if n < HomKind::Xi.min_n() || n > MAX_N {
        return Err(HomError::UnsupportedN {
            kind: HomKind::Xi,
            min: HomKind::Xi.min_n(),
            max: MAX_N,
            n,
        });
    }
    require_ascending(i, j, n)?;
    let mut skipped = 0usize;
    let mut w = GroupWord::empty();
    for m in (i + 1)..=j {
        let d = delta((i, m), n, mode)?;
        skipped += d.skipped;
        w = w.concat(&d.word)?;
    }
    let turn = delta((j, i), n, mode)?;
    skipped += turn.skipped;
    w = w.concat(&turn.word)?;
    for m in ((i + 1)..j).rev() {
        let d = delta((m, i), n, mode)?;
        skipped += d.skipped;
        w = w.concat(&d.word.inverse())?;
    }
    Ok(HomWord { word: w, skipped })
}

/// Applies the homomorphism named by `spec` to a whole pure braid
/// word, letter by letter; an inverse braid letter contributes the
/// inverse of the generator image.
pub fn apply_hom(spec: &HomSpec, w: &PureBraidWord) -> Result<HomApplication, HomError> {
    spec.validate()?;
    if w.n() != spec.n {
        return Err(HomError::StrandMismatch {
            expected: spec.n,
            got: w.n(),
        });
    }
    let mode = spec.mode();
    match spec.kind {
        HomKind::Phi => {
            let (word, skipped) = fold_image(w, |i, j| phi(i, j, spec.n, mode))?;
            Ok(HomApplication {
                image: HomImage::Gnk(word),
                skipped,
            })
        }
        HomKind::Psi => {
            let (word, skipped) = fold_image(w, |i, j| psi(i, j, spec.n, mode))?;
            Ok(HomApplication {
                image: HomImage::Gnk(word),
                skipped,
            })
        }
        HomKind::Xi => {
            let (word, skipped) = fold_image(w, |i, j| xi(i, j, spec.n, mode))?;
            Ok(HomApplication {
                image: HomImage::Gamma(word),
                skipped,
            })
        }
    }
}

fn fold_image<G, F>(w: &PureBraidWord, mut f: F) -> Result<(GroupWord<G>, usize), HomError>
where
    G: Generator,
    F: FnMut(u8, u8) -> Result<HomWord<G>, HomError>,
{
    let mut acc = GroupWord::empty();
    let mut skipped = 0usize;
    for l in w.word().letters() {
        let img = f(l.generator().i(), l.generator().j())?;
        skipped += img.skipped;
        let piece = if l.exponent() == -1 {
            img.word.inverse()
        } else {
            img.word
        };
        acc = acc.concat(&piece)?;
    }
    Ok((acc, skipped))
}
