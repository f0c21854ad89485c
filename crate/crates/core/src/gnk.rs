//! Finitely presented involutive groups on k-element index sets.
//!
//! For `n > k ≥ 2` the group has one involutive generator per k-subset
//! of `{1, …, n}` and three relation families:
//!
//! * involutivity `a² = 1`;
//! * far commutativity `[a_m, a_{m'}] = 1` whenever `|m ∩ m'| < k − 1`;
//! * palindromic (k+1)-tuple relations: for an ordered tuple
//!   `U = (u_1, …, u_{k+1})` of distinct indices, writing
//!   `m^j = U \ {u_j}`, the products `a_{m^1} ⋯ a_{m^{k+1}}` and
//!   `a_{m^{k+1}} ⋯ a_{m^1}` are equal. A tuple and its reversal give
//!   the same relation, so tuples are enumerated up to reversal
//!   (keeping the lexicographically smaller one), which yields
//!   `(k+1)!·C(n,k+1)/2` relations of this family.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::combi::{k_subsets, permutations};
use crate::f2::F2Vector;
use crate::search::{bounded_equivalent, RewriteSystem, SearchBudget, SearchError, Verdict};
use crate::words::{Generator, GroupWord, WordError};

/// Largest supported index-set size; enumeration is desk scale by design.
pub const MAX_N: u8 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid presentation parameters: need {MAX_N} ≥ n > k ≥ 2, got n={n}, k={k}")]
    BadParameters { n: u8, k: u8 },
    #[error("invalid generator: {0}")]
    BadGenerator(String),
    #[error("letter {letter} does not belong to the presentation (n={n}, k={k})")]
    ForeignLetter { letter: String, n: u8, k: u8 },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Generator indexed by a sorted k-subset, e.g. `a_1_2_3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GnkGenerator {
    indices: Vec<u8>,
}

impl GnkGenerator {
    /// Sorts the indices; rejects duplicates, zeros, and fewer than two.
    pub fn new(mut indices: Vec<u8>) -> Result<Self, GroupError> {
        indices.sort_unstable();
        if indices.len() < 2 {
            return Err(GroupError::BadGenerator(format!(
                "need at least 2 indices, got {indices:?}"
            )));
        }
        if indices[0] == 0 {
            return Err(GroupError::BadGenerator("indices are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(GroupError::BadGenerator(format!(
                "indices must be distinct, got {indices:?}"
            )));
        }
        Ok(GnkGenerator { indices })
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    /// Size of the intersection of the two index sets (both sorted).
    pub fn intersection_size(&self, other: &GnkGenerator) -> usize {
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
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
}

impl Generator for GnkGenerator {
    const INVOLUTIVE: bool = true;
    /// Words may not mix different k.
    type Key = usize;

    fn key(&self) -> usize {
        self.indices.len()
    }

    fn text(&self) -> String {
        let parts: Vec<String> = self.indices.iter().map(u8::to_string).collect();
        format!("a_{}", parts.join("_"))
    }
}

impl fmt::Display for GnkGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl FromStr for GnkGenerator {
    type Err = GroupError;

    /// Accepts `a_1_2_3`; a single all-digit token such as `a_123` is
    /// read as a list of single-digit indices.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix("a_")
            .ok_or_else(|| GroupError::BadGenerator(format!("expected a_…, got {s:?}")))?;
        let tokens: Vec<&str> = body.split('_').collect();
        let bad = || GroupError::BadGenerator(format!("unparsable generator {s:?}"));
        let indices: Vec<u8> = if tokens.len() == 1 {
            let t = tokens[0];
            if t.len() < 2 || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.bytes().map(|b| b - b'0').collect()
        } else {
            tokens
                .iter()
                .map(|t| t.parse::<u8>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        GnkGenerator::new(indices)
    }
}

/// One relation, stored structurally; `sides` gives the two equal words
/// as raw letter sequences and `relator` the reduced word `lhs·rhs⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GnkRelation {
    /// `g·g = 1`.
    Involution(GnkGenerator),
    /// `g·h = h·g` with `|g ∩ h| < k − 1`; stored with `g < h`.
    FarCommutativity(GnkGenerator, GnkGenerator),
    /// Ordered tuple `U` in canonical orientation (lex-smaller than its
    /// reversal); asserts `a_{m^1}⋯a_{m^{k+1}} = a_{m^{k+1}}⋯a_{m^1}`.
    Tetrahedral { tuple: Vec<u8> },
}

impl GnkRelation {
    /// The two equal sides as unreduced letter sequences.
    pub fn sides(&self) -> (Vec<GnkGenerator>, Vec<GnkGenerator>) {
        match self {
            GnkRelation::Involution(g) => (vec![g.clone(), g.clone()], vec![]),
            GnkRelation::FarCommutativity(g, h) => {
                (vec![g.clone(), h.clone()], vec![h.clone(), g.clone()])
            }
            GnkRelation::Tetrahedral { tuple } => {
                let fwd = tuple_factors(tuple);
                let mut rev = fwd.clone();
                rev.reverse();
                (fwd, rev)
            }
        }
    }

    /// The reduced relator word `lhs·rhs⁻¹` (empty for involutions,
    /// whose cancellation is built into the word representation).
    pub fn relator(&self) -> GroupWord<GnkGenerator> {
        let (lhs, rhs) = self.sides();
        let l = GroupWord::from_generators(lhs).expect("uniform alphabet");
        let r = GroupWord::from_generators(rhs).expect("uniform alphabet");
        l.concat(&r.inverse()).expect("uniform alphabet")
    }
}

/// Factors `a_{m^j}`, `m^j = U \ {u_j}`, in tuple order.
fn tuple_factors(tuple: &[u8]) -> Vec<GnkGenerator> {
    tuple
        .iter()
        .map(|u| {
            let m: Vec<u8> = tuple.iter().copied().filter(|v| v != u).collect();
            GnkGenerator::new(m).expect("distinct indices")
        })
        .collect()
}

/// Per-family relation totals, as reported by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GnkRelationCounts {
    pub involution: usize,
    pub far_commutativity: usize,
    pub tetrahedral: usize,
}

/// The presentation for fixed `(n, k)`; generators are enumerated in
/// lexicographic order and relations are computed lazily and cached.
#[derive(Debug)]
pub struct GnkPresentation {
    n: u8,
    k: u8,
    generators: Vec<GnkGenerator>,
    index: HashMap<GnkGenerator, usize>,
    relations: OnceLock<Vec<GnkRelation>>,
}

/// All generators of the `(n, k)` presentation in lexicographic order.
pub fn enumerate_generators(n: u8, k: u8) -> Result<Vec<GnkGenerator>, GroupError> {
    check_parameters(n, k)?;
    Ok(k_subsets(n, k)
        .into_iter()
        .map(|s| GnkGenerator::new(s).expect("subset indices are distinct"))
        .collect())
}

fn check_parameters(n: u8, k: u8) -> Result<(), GroupError> {
    if !(2 <= k && k < n && n <= MAX_N) {
        return Err(GroupError::BadParameters { n, k });
    }
    Ok(())
}

/// Parity vector of a word over the lexicographic k-subset basis,
/// without constructing a presentation. Unlike [`GnkPresentation`],
/// this accepts the degenerate case `n = k` (a single generator),
/// which arises for homomorphism images at minimal index counts.
pub fn parity_vector(
    n: u8,
    k: u8,
    w: &GroupWord<GnkGenerator>,
) -> Result<F2Vector, GroupError> {
    if !(2 <= k && k <= n && n <= MAX_N) {
        return Err(GroupError::BadParameters { n, k });
    }
    let subsets = k_subsets(n, k);
    let mut v = F2Vector::zeros(subsets.len());
    for l in w.letters() {
        let idx = subsets
            .binary_search_by(|s| s.as_slice().cmp(l.generator().indices()))
            .map_err(|_| GroupError::ForeignLetter {
                letter: l.generator().text(),
                n,
                k,
            })?;
        v.flip(idx);
    }
    Ok(v)
}

impl GnkPresentation {
    pub fn new(n: u8, k: u8) -> Result<Self, GroupError> {
        let generators = enumerate_generators(n, k)?;
        let index = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        Ok(GnkPresentation {
            n,
            k,
            generators,
            index,
            relations: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn generators(&self) -> &[GnkGenerator] {
        &self.generators
    }

    /// Position of `g` in the lexicographic generator enumeration.
    pub fn generator_index(&self, g: &GnkGenerator) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// All relations: involutions, far commutativity, then the
    /// tetrahedral family per canonically oriented tuple.
    pub fn relations(&self) -> &[GnkRelation] {
        self.relations.get_or_init(|| {
            let mut out: Vec<GnkRelation> = Vec::new();
            for g in &self.generators {
                out.push(GnkRelation::Involution(g.clone()));
            }
            for i in 0..self.generators.len() {
                for j in i + 1..self.generators.len() {
                    let (g, h) = (&self.generators[i], &self.generators[j]);
                    if g.intersection_size(h) < self.k as usize - 1 {
                        out.push(GnkRelation::FarCommutativity(g.clone(), h.clone()));
                    }
                }
            }
            let mut tuples: Vec<Vec<u8>> = Vec::new();
            for subset in k_subsets(self.n, self.k + 1) {
                for perm in permutations(&subset) {
                    let mut rev = perm.clone();
                    rev.reverse();
                    if perm < rev {
                        tuples.push(perm);
                    }
                }
            }
            tuples.sort();
            out.extend(tuples.into_iter().map(|tuple| GnkRelation::Tetrahedral { tuple }));
            out
        })
    }

    pub fn relation_counts(&self) -> GnkRelationCounts {
        let mut c = GnkRelationCounts {
            involution: 0,
            far_commutativity: 0,
            tetrahedral: 0,
        };
        for r in self.relations() {
            match r {
                GnkRelation::Involution(_) => c.involution += 1,
                GnkRelation::FarCommutativity(..) => c.far_commutativity += 1,
                GnkRelation::Tetrahedral { .. } => c.tetrahedral += 1,
            }
        }
        c
    }

    /// Checks that every letter of `w` belongs to this presentation.
    pub fn validate_word(&self, w: &GroupWord<GnkGenerator>) -> Result<(), GroupError> {
        for l in w.letters() {
            if self.generator_index(l.generator()).is_none() {
                return Err(GroupError::ForeignLetter {
                    letter: l.generator().text(),
                    n: self.n,
                    k: self.k,
                });
            }
        }
        Ok(())
    }

    /// Image in the abelianization `F2^{C(n,k)}`: the per-generator
    /// letter-count parity vector, in generator enumeration order.
    pub fn abelianize(&self, w: &GroupWord<GnkGenerator>) -> Result<F2Vector, GroupError> {
        self.validate_word(w)?;
        let mut v = F2Vector::zeros(self.generators.len());
        for l in w.letters() {
            let i = self.generator_index(l.generator()).expect("validated");
            v.flip(i);
        }
        Ok(v)
    }

    /// Bounded equivalence via bidirectional search over relation moves.
    /// `Equal` is definitive; `Unknown` means the budget was exhausted.
    pub fn equivalent_bounded(
        &self,
        w1: &GroupWord<GnkGenerator>,
        w2: &GroupWord<GnkGenerator>,
        budget: SearchBudget,
    ) -> Result<Verdict, GroupError> {
        self.validate_word(w1)?;
        self.validate_word(w2)?;
        let sys = GnkMoves { k: self.k as usize };
        Ok(bounded_equivalent(&sys, w1, w2, budget)?)
    }
}

/// Relation moves for the search engine.
struct GnkMoves {
    k: usize,
}

/// Window gathering bound for non-contiguous tetrahedral matches.
fn span_bound(k: usize) -> usize {
    3 * (k + 1)
}

impl GnkMoves {
    /// If `letters` form a complete delete-one family of some
    /// (k+1)-subset `U`, returns `U`.
    fn family_union(&self, letters: &[&GnkGenerator]) -> Option<Vec<u8>> {
        debug_assert_eq!(letters.len(), self.k + 1);
        let mut union: Vec<u8> = Vec::with_capacity(self.k + 1);
        for g in letters {
            for &i in g.indices() {
                if let Err(pos) = union.binary_search(&i) {
                    union.insert(pos, i);
                    if union.len() > self.k + 1 {
                        return None;
                    }
                }
            }
        }
        if union.len() != self.k + 1 {
            return None;
        }
        // Each letter omits exactly one element of the union; letters must
        // be pairwise distinct so that every element is omitted once.
        for a in 0..letters.len() {
            for b in a + 1..letters.len() {
                if letters[a] == letters[b] {
                    return None;
                }
            }
        }
        Some(union)
    }

    /// The family member missing from `letters` (which must be k distinct
    /// delete-one subsets of a common (k+1)-set).
    fn missing_member(&self, letters: &[&GnkGenerator]) -> Option<GnkGenerator> {
        let mut union: Vec<u8> = Vec::with_capacity(self.k + 1);
        for g in letters {
            for &i in g.indices() {
                if let Err(pos) = union.binary_search(&i) {
                    union.insert(pos, i);
                    if union.len() > self.k + 1 {
                        return None;
                    }
                }
            }
        }
        if union.len() != self.k + 1 {
            return None;
        }
        for a in 0..letters.len() {
            for b in a + 1..letters.len() {
                if letters[a] == letters[b] {
                    return None;
                }
            }
        }
        // Omitted elements used so far:
        let mut omitted: Vec<u8> = Vec::new();
        for g in letters {
            let o = union
                .iter()
                .copied()
                .find(|u| !g.indices().contains(u))?;
            if omitted.contains(&o) {
                return None;
            }
            omitted.push(o);
        }
        let u_star = union.iter().copied().find(|u| !omitted.contains(u))?;
        let m: Vec<u8> = union.iter().copied().filter(|&u| u != u_star).collect();
        GnkGenerator::new(m).ok()
    }
}

impl RewriteSystem for GnkMoves {
    type G = GnkGenerator;

    fn commutes(&self, a: &GnkGenerator, b: &GnkGenerator) -> bool {
        a.intersection_size(b) < self.k - 1
    }

    fn neighbors(&self, w: &[GnkGenerator], out: &mut Vec<Vec<GnkGenerator>>) {
        let k = self.k;
        let len = w.len();

        // Full-window reversal: a_{m^1}…a_{m^{k+1}} → reversed.
        if len >= k + 1 {
            for i in 0..=len - (k + 1) {
                let window: Vec<&GnkGenerator> = w[i..i + k + 1].iter().collect();
                if self.family_union(&window).is_some() {
                    let mut v = w.to_vec();
                    v[i..i + k + 1].reverse();
                    out.push(v);
                }
            }
        }

        // Growth: a k-run M of a family with missing member h rewrites to
        // h·reverse(M)·h (cyclic consequence of the palindromic relation).
        if len >= k {
            for i in 0..=len - k {
                let window: Vec<&GnkGenerator> = w[i..i + k].iter().collect();
                if let Some(h) = self.missing_member(&window) {
                    let mut v: Vec<GnkGenerator> = Vec::with_capacity(len + 2);
                    v.extend_from_slice(&w[..i]);
                    v.push(h.clone());
                    v.extend(w[i..i + k].iter().rev().cloned());
                    v.push(h);
                    v.extend_from_slice(&w[i + k..]);
                    out.push(v);
                }
            }
        }

        // Shrink: h·M·h with {h} ∪ M a full family rewrites to reverse(M).
        if len >= k + 2 {
            for i in 0..=len - (k + 2) {
                if w[i] != w[i + k + 1] {
                    continue;
                }
                let mut fam: Vec<&GnkGenerator> = w[i + 1..i + k + 1].iter().collect();
                fam.push(&w[i]);
                if self.family_union(&fam).is_some() {
                    let mut v: Vec<GnkGenerator> = Vec::with_capacity(len - 2);
                    v.extend_from_slice(&w[..i]);
                    v.extend(w[i + 1..i + k + 1].iter().rev().cloned());
                    v.extend_from_slice(&w[i + k + 2..]);
                    out.push(v);
                }
            }
        }

        // Scattered full windows: positions within a bounded span whose
        // letters form a family and whose intervening letters commute with
        // the whole family may be reversed in place.
        self.scattered_reversals(w, out);
    }
}

impl GnkMoves {
    fn scattered_reversals(&self, w: &[GnkGenerator], out: &mut Vec<Vec<GnkGenerator>>) {
        let k = self.k;
        let span = span_bound(k);
        if w.len() < k + 1 {
            return;
        }
        let mut positions: Vec<usize> = Vec::with_capacity(k + 1);
        for start in 0..w.len() - k {
            positions.clear();
            positions.push(start);
            let limit = (start + span).min(w.len());
            self.extend_family(w, limit, &mut positions, out);
        }
    }

    /// Depth-first extension of a candidate scattered family.
    fn extend_family(
        &self,
        w: &[GnkGenerator],
        limit: usize,
        positions: &mut Vec<usize>,
        out: &mut Vec<Vec<GnkGenerator>>,
    ) {
        if positions.len() == self.k + 1 {
            // Skip fully contiguous windows; the contiguous pass emits them.
            let contiguous = positions[self.k] - positions[0] == self.k;
            if contiguous {
                return;
            }
            let letters: Vec<&GnkGenerator> = positions.iter().map(|&p| &w[p]).collect();
            if self.family_union(&letters).is_none() {
                return;
            }
            // Every intervening letter must commute with the whole family.
            for q in positions[0]..positions[self.k] {
                if positions.contains(&q) {
                    continue;
                }
                if !letters.iter().all(|g| self.commutes(&w[q], g)) {
                    return;
                }
            }
            let mut v = w.to_vec();
            for (a, &p) in positions.iter().enumerate() {
                v[p] = letters[self.k - a].clone();
            }
            out.push(v);
            return;
        }
        let next_start = positions.last().unwrap() + 1;
        for q in next_start..limit {
            // Prune: the union of chosen letters plus w[q] must stay ≤ k+1.
            positions.push(q);
            let letters: Vec<&GnkGenerator> = positions.iter().map(|&p| &w[p]).collect();
            if union_at_most(&letters, self.k + 1) {
                self.extend_family(w, limit, positions, out);
            }
            positions.pop();
        }
    }
}

/// True when the union of the letters' index sets has at most `cap` elements.
fn union_at_most(letters: &[&GnkGenerator], cap: usize) -> bool {
    let mut union: Vec<u8> = Vec::with_capacity(cap + 1);
    for g in letters {
        for &i in g.indices() {
            if let Err(pos) = union.binary_search(&i) {
                union.insert(pos, i);
                if union.len() > cap {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combi::binomial;

    fn gen(ids: &[u8]) -> GnkGenerator {
        GnkGenerator::new(ids.to_vec()).unwrap()
    }

    fn word(gens: &[&[u8]]) -> GroupWord<GnkGenerator> {
        GroupWord::from_generators(gens.iter().map(|g| gen(g))).unwrap()
    }

    #[test]
    fn generator_text_and_parse() {
        let g = gen(&[3, 1, 2]);
        assert_eq!(g.text(), "a_1_2_3");
        assert_eq!("a_1_2_3".parse::<GnkGenerator>().unwrap(), g);
        assert_eq!("a_123".parse::<GnkGenerator>().unwrap(), g);
        assert_eq!("a_10_2_3".parse::<GnkGenerator>().unwrap(), gen(&[2, 3, 10]));
        assert!("a_1_1_2".parse::<GnkGenerator>().is_err());
        assert!("b_1_2".parse::<GnkGenerator>().is_err());
    }

    #[test]
    fn generator_enumeration_lex() {
        let gens = enumerate_generators(4, 2).unwrap();
        let texts: Vec<String> = gens.iter().map(|g| g.text()).collect();
        assert_eq!(texts, vec!["a_1_2", "a_1_3", "a_1_4", "a_2_3", "a_2_4", "a_3_4"]);
        assert!(enumerate_generators(3, 3).is_err());
        assert!(enumerate_generators(5, 1).is_err());
    }

    #[test]
    fn relation_counts_match_formulas() {
        for (n, k) in [(4u8, 2u8), (5, 3), (6, 3), (6, 4)] {
            let p = GnkPresentation::new(n, k).unwrap();
            let c = p.relation_counts();
            assert_eq!(c.involution as u64, binomial(n as u64, k as u64));
            let expect_tetra = (1..=k as u64 + 1).product::<u64>()
                * binomial(n as u64, k as u64 + 1)
                / 2;
            assert_eq!(c.tetrahedral as u64, expect_tetra, "n={n} k={k}");
        }
        // n = k + 1 leaves no room for far commutativity.
        let p = GnkPresentation::new(4, 3).unwrap();
        assert_eq!(p.relation_counts().far_commutativity, 0);
        let p = GnkPresentation::new(5, 3).unwrap();
        assert!(p.relation_counts().far_commutativity > 0);
    }

    #[test]
    fn tetrahedral_tuples_canonically_oriented() {
        let p = GnkPresentation::new(4, 2).unwrap();
        for r in p.relations() {
            if let GnkRelation::Tetrahedral { tuple } = r {
                let mut rev = tuple.clone();
                rev.reverse();
                assert!(*tuple < rev);
            }
        }
    }

    #[test]
    fn abelianize_relators_to_zero() {
        let p = GnkPresentation::new(5, 3).unwrap();
        for r in p.relations() {
            let v = p.abelianize(&r.relator()).unwrap();
            assert!(v.is_zero(), "relator {:?} has nonzero parity vector", r);
        }
    }

    #[test]
    fn abelianize_counts_parity() {
        let p = GnkPresentation::new(5, 3).unwrap();
        let w = word(&[&[1, 2, 3], &[1, 2, 4], &[1, 2, 3]]);
        let v = p.abelianize(&w).unwrap();
        // The two a_1_2_3 letters are not adjacent, so the word stays
        // length 3; their counts still cancel mod 2.
        assert_eq!(v.ones_positions().len(), 1);
        assert!(v.get(p.generator_index(&gen(&[1, 2, 4])).unwrap()));
    }

    #[test]
    fn parity_vector_matches_presentation_abelianize() {
        let p = GnkPresentation::new(6, 3).unwrap();
        let w = word(&[&[1, 2, 3], &[2, 5, 6], &[1, 2, 4], &[2, 5, 6], &[3, 4, 5]]);
        assert_eq!(
            parity_vector(6, 3, &w).unwrap(),
            p.abelianize(&w).unwrap()
        );
    }

    #[test]
    fn parity_vector_handles_single_generator_case() {
        // n = k is rejected by GnkPresentation but allowed here: the
        // group on one involutive generator has a 1-dimensional
        // parity space counting word length mod 2.
        let w = word(&[&[1, 2, 3]]);
        let v = parity_vector(3, 3, &w).unwrap();
        assert_eq!(v.to_bitstring(), "1");
        let ww = w.concat(&word(&[&[1, 2, 3]])).unwrap();
        assert!(ww.is_empty());
        assert!(parity_vector(3, 3, &ww).unwrap().is_zero());
        assert!(matches!(
            parity_vector(3, 4, &GroupWord::empty()),
            Err(GroupError::BadParameters { .. })
        ));
    }

    #[test]
    fn foreign_letters_rejected() {
        let p = GnkPresentation::new(5, 3).unwrap();
        let w = word(&[&[1, 2, 6]]); // index 6 > n
        assert!(matches!(p.abelianize(&w), Err(GroupError::ForeignLetter { .. })));
        let w4 = word(&[&[1, 2, 3, 4]]); // wrong k
        assert!(p.abelianize(&w4).is_err());
    }

    #[test]
    fn far_commutativity_is_equal() {
        let p = GnkPresentation::new(5, 3).unwrap();
        let w1 = word(&[&[1, 2, 3], &[1, 4, 5]]);
        let w2 = word(&[&[1, 4, 5], &[1, 2, 3]]);
        let v = p.equivalent_bounded(&w1, &w2, SearchBudget::default()).unwrap();
        assert_eq!(v, Verdict::Equal);
    }

    #[test]
    fn tetrahedral_reversal_is_equal() {
        let p = GnkPresentation::new(4, 3).unwrap();
        let fwd = tuple_factors(&[1, 2, 3, 4]);
        let mut rev = fwd.clone();
        rev.reverse();
        let w1 = GroupWord::from_generators(fwd).unwrap();
        let w2 = GroupWord::from_generators(rev).unwrap();
        let v = p.equivalent_bounded(&w1, &w2, SearchBudget::default()).unwrap();
        assert_eq!(v, Verdict::Equal);
    }

    #[test]
    fn relators_equal_empty() {
        let p = GnkPresentation::new(5, 3).unwrap();
        let empty = GroupWord::empty();
        for r in p.relations() {
            let v = p
                .equivalent_bounded(&r.relator(), &empty, SearchBudget::default())
                .unwrap();
            assert_eq!(v, Verdict::Equal, "relator {:?} not reduced to 1", r);
        }
    }

    #[test]
    fn distinct_generators_not_identified() {
        let p = GnkPresentation::new(5, 3).unwrap();
        let w1 = word(&[&[1, 2, 3]]);
        let w2 = word(&[&[1, 2, 4]]);
        let v = p.equivalent_bounded(&w1, &w2, SearchBudget::default()).unwrap();
        assert_eq!(v, Verdict::Unknown);
    }
}
