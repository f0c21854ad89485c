//! The quadrilateral-symmetry quotient family on 4-element index sets.
//!
//! For `n ≥ 4` the group has involutive generators `d_(i,j,k,l)` indexed
//! by cyclic 4-tuples of distinct indices up to dihedral symmetry:
//!
//! ```text
//! d_(ijkl) = d_(jkli) = d_(klij) = d_(lijk)        (rotations)
//!          = d_(lkji) = d_(kjil) = d_(jilk) = d_(ilkj)   (reversals)
//! ```
//!
//! so the pair partition `{{i,k}, {j,l}}` ("opposite" positions) is the
//! actual index. Each 4-subset `{a<b<c<d}` carries exactly three
//! generators, with canonical tuples `(a,b,c,d)`, `(a,b,d,c)`, `(a,c,b,d)`.
//!
//! Relations:
//! * involutivity `d² = 1`;
//! * far commutativity when the supports share fewer than 3 indices;
//! * the pentagonal relation, for any 5 distinct indices `i,j,k,l,m`:
//!   `d_(ijkl) d_(ijlm) d_(jklm) d_(ijkm) d_(iklm) = 1`.
//!
//! Pentagonal relators are enumerated over all orderings of each
//! 5-subset and deduplicated up to cyclic rotation and inversion of the
//! relator word (10 variants), which leaves 12 relators per 5-subset.

use std::collections::HashMap;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::combi::{k_subsets, permutations};
use crate::f2::{EchelonBasis, F2Vector};
use crate::gnk::{GroupError, MAX_N};
use crate::search::{bounded_equivalent, RewriteSystem, SearchBudget, Verdict};
use crate::words::{Generator, GroupWord};

/// Generator stored as the canonical representative of its dihedral
/// orbit: the lexicographically least of the 8 equivalent tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaGenerator {
    tuple: [u8; 4],
}

impl GammaGenerator {
    pub fn new(tuple: [u8; 4]) -> Result<Self, GroupError> {
        if tuple.contains(&0) {
            return Err(GroupError::BadGenerator("indices are 1-based".into()));
        }
        let mut sorted = tuple;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GroupError::BadGenerator(format!(
                "indices must be distinct, got {tuple:?}"
            )));
        }
        Ok(GammaGenerator {
            tuple: canonical_tuple(tuple),
        })
    }

    /// The canonical cyclic tuple.
    pub fn tuple(&self) -> [u8; 4] {
        self.tuple
    }

    /// The underlying 4-element index set, sorted.
    pub fn support(&self) -> [u8; 4] {
        let mut s = self.tuple;
        s.sort_unstable();
        s
    }

    /// Size of the support intersection.
    pub fn intersection_size(&self, other: &GammaGenerator) -> usize {
        let (a, b) = (self.support(), other.support());
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < 4 && j < 4 {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// The invariant of the dihedral orbit: the two pairs of cyclically
    /// opposite indices, each sorted, smaller pair first.
    pub fn opposite_pairs(&self) -> [[u8; 2]; 2] {
        let [i, j, k, l] = self.tuple;
        let mut p = [i.min(k), i.max(k)];
        let mut q = [j.min(l), j.max(l)];
        if q < p {
            std::mem::swap(&mut p, &mut q);
        }
        [p, q]
    }
}

/// Lexicographically least tuple among the 8 dihedral variants.
fn canonical_tuple(t: [u8; 4]) -> [u8; 4] {
    let mut best = t;
    let mut rot = t;
    let mut rev = [t[3], t[2], t[1], t[0]];
    for _ in 0..4 {
        rot = [rot[1], rot[2], rot[3], rot[0]];
        if rot < best {
            best = rot;
        }
        if rev < best {
            best = rev;
        }
        rev = [rev[1], rev[2], rev[3], rev[0]];
    }
    best
}

impl Generator for GammaGenerator {
    const INVOLUTIVE: bool = true;
    type Key = ();

    fn key(&self) {}

    fn text(&self) -> String {
        let [i, j, k, l] = self.tuple;
        format!("d_({i},{j},{k},{l})")
    }
}

impl fmt::Display for GammaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl FromStr for GammaGenerator {
    type Err = GroupError;

    /// Accepts `d_(1,2,3,4)`; the tuple is canonicalized on input.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::BadGenerator(format!("unparsable generator {s:?}"));
        let body = s
            .strip_prefix("d_(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let mut tuple = [0u8; 4];
        for (slot, part) in tuple.iter_mut().zip(&parts) {
            *slot = part.parse::<u8>().map_err(|_| bad())?;
        }
        GammaGenerator::new(tuple)
    }
}

/// One relation of the presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaRelation {
    /// `g·g = 1`.
    Involution(GammaGenerator),
    /// `g·h = h·g`, supports sharing fewer than 3 indices; `g < h`.
    FarCommutativity(GammaGenerator, GammaGenerator),
    /// Pentagonal relator, stored as the canonical letter sequence
    /// (least among its 10 rotation/inversion variants).
    Pentagon { letters: [GammaGenerator; 5] },
}

impl GammaRelation {
    /// The two equal sides as unreduced letter sequences.
    pub fn sides(&self) -> (Vec<GammaGenerator>, Vec<GammaGenerator>) {
        match self {
            GammaRelation::Involution(g) => (vec![g.clone(), g.clone()], vec![]),
            GammaRelation::FarCommutativity(g, h) => {
                (vec![g.clone(), h.clone()], vec![h.clone(), g.clone()])
            }
            GammaRelation::Pentagon { letters } => (letters.to_vec(), vec![]),
        }
    }

    /// The reduced relator word `lhs·rhs⁻¹`.
    pub fn relator(&self) -> GroupWord<GammaGenerator> {
        let (lhs, rhs) = self.sides();
        let l = GroupWord::from_generators(lhs).expect("uniform alphabet");
        let r = GroupWord::from_generators(rhs).expect("uniform alphabet");
        l.concat(&r.inverse()).expect("uniform alphabet")
    }
}

/// The five pentagon letters for an ordered 5-tuple `(i,j,k,l,m)`.
fn pentagon_letters(p: &[u8]) -> [GammaGenerator; 5] {
    let d = |a: u8, b: u8, c: u8, e: u8| GammaGenerator::new([a, b, c, e]).expect("distinct");
    let (i, j, k, l, m) = (p[0], p[1], p[2], p[3], p[4]);
    [
        d(i, j, k, l),
        d(i, j, l, m),
        d(j, k, l, m),
        d(i, j, k, m),
        d(i, k, l, m),
    ]
}

/// Least sequence among the 10 rotation/inversion variants of a
/// pentagonal relator (letters are involutive, so the inverse relator
/// is the reversed sequence).
fn pentagon_canonical(letters: &[GammaGenerator; 5]) -> [GammaGenerator; 5] {
    let mut best = letters.clone();
    let mut fwd = letters.clone();
    let mut rev = letters.clone();
    rev.reverse();
    for _ in 0..5 {
        fwd.rotate_left(1);
        rev.rotate_left(1);
        if fwd < best {
            best = fwd.clone();
        }
        if rev < best {
            best = rev.clone();
        }
    }
    best
}

/// Per-family relation totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GammaRelationCounts {
    pub involution: usize,
    pub far_commutativity: usize,
    pub pentagon: usize,
}

/// The presentation for fixed `n ≥ 4`. Generators are enumerated in
/// lexicographic tuple order; relations and the pentagonal parity span
/// are computed lazily and cached.
#[derive(Debug)]
pub struct GammaPresentation {
    n: u8,
    generators: Vec<GammaGenerator>,
    index: HashMap<GammaGenerator, usize>,
    relations: OnceLock<Vec<GammaRelation>>,
    pentagon_span: OnceLock<EchelonBasis>,
}

/// All generators for a given `n`, in lexicographic tuple order: three
/// per 4-subset.
pub fn enumerate_gamma_generators(n: u8) -> Result<Vec<GammaGenerator>, GroupError> {
    if !(4 <= n && n <= MAX_N) {
        return Err(GroupError::BadParameters { n, k: 4 });
    }
    let mut out = Vec::new();
    for s in k_subsets(n, 4) {
        let (a, b, c, d) = (s[0], s[1], s[2], s[3]);
        for t in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
            out.push(GammaGenerator::new(t).expect("distinct"));
        }
    }
    out.sort();
    Ok(out)
}

impl GammaPresentation {
    pub fn new(n: u8) -> Result<Self, GroupError> {
        let generators = enumerate_gamma_generators(n)?;
        let index = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        Ok(GammaPresentation {
            n,
            generators,
            index,
            relations: OnceLock::new(),
            pentagon_span: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn generators(&self) -> &[GammaGenerator] {
        &self.generators
    }

    pub fn generator_index(&self, g: &GammaGenerator) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// All relations: involutions, far commutativity, then the deduped
    /// pentagonal relators in sorted order.
    pub fn relations(&self) -> &[GammaRelation] {
        self.relations.get_or_init(|| {
            let mut out: Vec<GammaRelation> = Vec::new();
            for g in &self.generators {
                out.push(GammaRelation::Involution(g.clone()));
            }
            for i in 0..self.generators.len() {
                for j in i + 1..self.generators.len() {
                    let (g, h) = (&self.generators[i], &self.generators[j]);
                    if g.intersection_size(h) < 3 {
                        out.push(GammaRelation::FarCommutativity(g.clone(), h.clone()));
                    }
                }
            }
            let mut seen: BTreeSet<[GammaGenerator; 5]> = BTreeSet::new();
            for subset in k_subsets(self.n, 5) {
                for perm in permutations(&subset) {
                    let letters = pentagon_letters(&perm);
                    seen.insert(pentagon_canonical(&letters));
                }
            }
            out.extend(
                seen.into_iter()
                    .map(|letters| GammaRelation::Pentagon { letters }),
            );
            out
        })
    }

    pub fn relation_counts(&self) -> GammaRelationCounts {
        let mut c = GammaRelationCounts {
            involution: 0,
            far_commutativity: 0,
            pentagon: 0,
        };
        for r in self.relations() {
            match r {
                GammaRelation::Involution(_) => c.involution += 1,
                GammaRelation::FarCommutativity(..) => c.far_commutativity += 1,
                GammaRelation::Pentagon { .. } => c.pentagon += 1,
            }
        }
        c
    }

    pub fn validate_word(&self, w: &GroupWord<GammaGenerator>) -> Result<(), GroupError> {
        for l in w.letters() {
            if self.generator_index(l.generator()).is_none() {
                return Err(GroupError::ForeignLetter {
                    letter: l.generator().text(),
                    n: self.n,
                    k: 4,
                });
            }
        }
        Ok(())
    }

    /// Raw parity vector over the generators, in enumeration order.
    /// This is *not* invariant under the pentagonal relation; see
    /// [`GammaPresentation::abelianize_mod_pentagons`].
    pub fn abelianize_raw(&self, w: &GroupWord<GammaGenerator>) -> Result<F2Vector, GroupError> {
        self.validate_word(w)?;
        let mut v = F2Vector::zeros(self.generators.len());
        for l in w.letters() {
            let i = self.generator_index(l.generator()).expect("validated");
            v.flip(i);
        }
        Ok(v)
    }

    /// Span of the pentagonal relators' parity vectors.
    pub fn pentagon_span(&self) -> &EchelonBasis {
        self.pentagon_span.get_or_init(|| {
            let mut basis = EchelonBasis::new(self.generators.len());
            for r in self.relations() {
                if let GammaRelation::Pentagon { .. } = r {
                    let v = self
                        .abelianize_raw(&r.relator())
                        .expect("relator letters are in the presentation");
                    basis.insert(v);
                }
            }
            basis
        })
    }

    /// The group invariant: the parity vector reduced to the canonical
    /// coset representative modulo the pentagonal span.
    pub fn abelianize_mod_pentagons(
        &self,
        w: &GroupWord<GammaGenerator>,
    ) -> Result<F2Vector, GroupError> {
        let mut v = self.abelianize_raw(w)?;
        self.pentagon_span().reduce(&mut v);
        Ok(v)
    }

    /// Dimension of the abelianized quotient over F₂.
    pub fn quotient_dim(&self) -> usize {
        self.generators.len() - self.pentagon_span().rank()
    }

    /// Bounded equivalence via bidirectional search; pentagonal moves
    /// replace a window matching a relator segment by the inverse of the
    /// complementary segment.
    pub fn equivalent_bounded(
        &self,
        w1: &GroupWord<GammaGenerator>,
        w2: &GroupWord<GammaGenerator>,
        budget: SearchBudget,
    ) -> Result<Verdict, GroupError> {
        self.validate_word(w1)?;
        self.validate_word(w2)?;
        let sys = self.moves();
        Ok(bounded_equivalent(&sys, w1, w2, budget)?)
    }

    /// Builds the split table used by the search engine.
    fn moves(&self) -> GammaMoves {
        let mut splits: HashMap<Vec<GammaGenerator>, Vec<Vec<GammaGenerator>>> = HashMap::new();
        for r in self.relations() {
            let GammaRelation::Pentagon { letters } = r else {
                continue;
            };
            // All rotations of the relator and of its inverse are
            // relators too; splitting r = u·v gives the move u → v⁻¹,
            // i.e. u → reversed(v) for involutive letters.
            let mut variants: Vec<[GammaGenerator; 5]> = Vec::with_capacity(10);
            let mut fwd = letters.clone();
            let mut rev = letters.clone();
            rev.reverse();
            for _ in 0..5 {
                variants.push(fwd.clone());
                variants.push(rev.clone());
                fwd.rotate_left(1);
                rev.rotate_left(1);
            }
            for var in variants {
                for cut in 2..=5usize {
                    let u: Vec<GammaGenerator> = var[..cut].to_vec();
                    let mut repl: Vec<GammaGenerator> = var[cut..].to_vec();
                    repl.reverse();
                    let entry = splits.entry(u).or_default();
                    if !entry.contains(&repl) {
                        entry.push(repl);
                    }
                }
            }
        }
        GammaMoves { splits }
    }
}

/// Relation moves for the search engine: far commutativity is consumed
/// by the trace normalizer; pentagonal moves come from the split table.
struct GammaMoves {
    splits: HashMap<Vec<GammaGenerator>, Vec<Vec<GammaGenerator>>>,
}

impl RewriteSystem for GammaMoves {
    type G = GammaGenerator;

    fn commutes(&self, a: &GammaGenerator, b: &GammaGenerator) -> bool {
        a.intersection_size(b) < 3
    }

    fn neighbors(&self, w: &[GammaGenerator], out: &mut Vec<Vec<GammaGenerator>>) {
        for len in 2..=5usize.min(w.len()) {
            for i in 0..=w.len() - len {
                let Some(repls) = self.splits.get(&w[i..i + len]) else {
                    continue;
                };
                for repl in repls {
                    let mut v: Vec<GammaGenerator> = Vec::with_capacity(w.len() - len + repl.len());
                    v.extend_from_slice(&w[..i]);
                    v.extend_from_slice(repl);
                    v.extend_from_slice(&w[i + len..]);
                    out.push(v);
                }
            }
        }
    }
}
