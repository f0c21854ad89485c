//! Bounded word-equivalence search for involutive presentations.
//!
//! States are words canonicalized by a trace-monoid normal form: the
//! lexicographically least representative under the presentation's
//! partial commutation relation, interleaved with involutive reduction
//! until a fixpoint. A bidirectional breadth-first search then applies
//! sound relation moves supplied by the presentation. The search never
//! reports a false `Equal`; exhausting the budget yields `Unknown`.

use std::collections::HashSet;
use std::hash::Hash;

use thiserror::Error;

use crate::words::{Generator, GroupWord};

/// Resource limits for [`bounded_equivalent`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of distinct canonical states across both frontiers.
    pub max_states: usize,
    /// Maximum number of breadth-first expansion rounds (both sides total).
    pub max_depth: usize,
    /// Explored words may exceed the longer input by at most this many letters.
    pub len_slack: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_states: 100_000,
            max_depth: 12,
            len_slack: 4,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("budget malformed: {0}")]
    BadBudget(&'static str),
}

/// Verdict of a bounded search; `Unknown` means the budget ran out
/// before the words could be connected, not that they differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unknown,
}

/// Relation moves of one presentation, consumed by the search engine.
pub(crate) trait RewriteSystem {
    type G: Generator + Hash;

    /// Far-commutativity: true when the two generators commute.
    fn commutes(&self, a: &Self::G, b: &Self::G) -> bool;

    /// Pushes every word reachable from `w` by one (non-commutation)
    /// relation move. Moves must be sound for the presentation.
    fn neighbors(&self, w: &[Self::G], out: &mut Vec<Vec<Self::G>>);
}

/// Involutive reduction: adjacent equal letters cancel.
fn reduce_involutive<G: Eq>(mut v: Vec<G>) -> Vec<G> {
    let mut out: Vec<G> = Vec::with_capacity(v.len());
    for g in v.drain(..) {
        if out.last() == Some(&g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// Lexicographically least representative of the trace class of `v`:
/// repeatedly extract the smallest letter that can commute to the front.
fn trace_least<R: RewriteSystem>(sys: &R, v: &[R::G]) -> Vec<R::G> {
    let mut rem: Vec<R::G> = v.to_vec();
    let mut out: Vec<R::G> = Vec::with_capacity(rem.len());
    while !rem.is_empty() {
        let mut best: Option<usize> = None;
        for p in 0..rem.len() {
            let frontable = rem[..p].iter().all(|x| sys.commutes(x, &rem[p]));
            if frontable {
                match best {
                    Some(b) if rem[b] <= rem[p] => {}
                    _ => best = Some(p),
                }
            }
        }
        let b = best.expect("position 0 is always frontable");
        out.push(rem.remove(b));
    }
    out
}

/// Canonical state key: alternate trace normalization and involutive
/// reduction until stable. Constant on trace classes, hence sound.
pub(crate) fn canonicalize<R: RewriteSystem>(sys: &R, v: Vec<R::G>) -> Vec<R::G> {
    let mut cur = reduce_involutive(v);
    loop {
        let normalized = trace_least(sys, &cur);
        let reduced = reduce_involutive(normalized);
        if reduced == cur {
            return cur;
        }
        cur = reduced;
    }
}

/// Extracts the bare generator sequence of an involutive word.
fn letters_of<G: Generator>(w: &GroupWord<G>) -> Vec<G> {
    debug_assert!(G::INVOLUTIVE);
    w.letters().iter().map(|l| l.generator().clone()).collect()
}

pub(crate) fn bounded_equivalent<R: RewriteSystem>(
    sys: &R,
    w1: &GroupWord<R::G>,
    w2: &GroupWord<R::G>,
    budget: SearchBudget,
) -> Result<Verdict, SearchError> {
    if budget.max_states == 0 {
        return Err(SearchError::BadBudget("max_states must be positive"));
    }
    if budget.max_depth == 0 {
        return Err(SearchError::BadBudget("max_depth must be positive"));
    }
    if budget.len_slack > 64 {
        return Err(SearchError::BadBudget("len_slack above 64 is unsupported"));
    }

    let a = canonicalize(sys, letters_of(w1));
    let b = canonicalize(sys, letters_of(w2));
    if a == b {
        return Ok(Verdict::Equal);
    }
    let cap = a.len().max(b.len()) + budget.len_slack;

    struct Side<G> {
        frontier: Vec<Vec<G>>,
        seen: HashSet<Vec<G>>,
    }
    let mut sides = [
        Side { frontier: vec![a.clone()], seen: HashSet::from([a]) },
        Side { frontier: vec![b.clone()], seen: HashSet::from([b]) },
    ];
    let mut states = 2usize;
    let mut scratch: Vec<Vec<R::G>> = Vec::new();

    for _round in 0..budget.max_depth {
        // Expand the smaller live frontier; ties expand the first side.
        let (idx, other) = if sides[0].frontier.is_empty() {
            (1, 0)
        } else if sides[1].frontier.is_empty() {
            (0, 1)
        } else if sides[0].frontier.len() <= sides[1].frontier.len() {
            (0, 1)
        } else {
            (1, 0)
        };
        if sides[idx].frontier.is_empty() {
            return Ok(Verdict::Unknown); // both frontiers exhausted
        }

        let frontier = std::mem::take(&mut sides[idx].frontier);
        let mut next: Vec<Vec<R::G>> = Vec::new();
        for w in &frontier {
            scratch.clear();
            sys.neighbors(w, &mut scratch);
            for nb in scratch.drain(..) {
                let c = canonicalize(sys, nb);
                if c.len() > cap {
                    continue;
                }
                if sides[other].seen.contains(&c) {
                    return Ok(Verdict::Equal);
                }
                if sides[idx].seen.insert(c.clone()) {
                    states += 1;
                    if states > budget.max_states {
                        return Ok(Verdict::Unknown);
                    }
                    next.push(c);
                }
            }
        }
        sides[idx].frontier = next;
        if sides[0].frontier.is_empty() && sides[1].frontier.is_empty() {
            return Ok(Verdict::Unknown);
        }
    }
    Ok(Verdict::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Generator;

    /// Alphabet {0..9} where letters commute iff their distance is ≥ 2;
    /// the only extra move reverses a contiguous ascending run of 3.
    #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
    struct T(u8);

    impl Generator for T {
        const INVOLUTIVE: bool = true;
        type Key = ();
        fn key(&self) {}
        fn text(&self) -> String {
            format!("t{}", self.0)
        }
    }

    struct Sys;

    impl RewriteSystem for Sys {
        type G = T;
        fn commutes(&self, a: &T, b: &T) -> bool {
            a.0.abs_diff(b.0) >= 2
        }
        fn neighbors(&self, w: &[T], out: &mut Vec<Vec<T>>) {
            for i in 0..w.len().saturating_sub(2) {
                if w[i + 1].0 == w[i].0 + 1 && w[i + 2].0 == w[i].0 + 2 {
                    let mut v = w.to_vec();
                    v.swap(i, i + 2);
                    out.push(v);
                }
            }
        }
    }

    fn word(ids: &[u8]) -> GroupWord<T> {
        GroupWord::from_generators(ids.iter().map(|&i| T(i))).unwrap()
    }

    #[test]
    fn commuting_letters_identified_at_depth_zero() {
        let v = bounded_equivalent(&Sys, &word(&[1, 3]), &word(&[3, 1]), SearchBudget::default());
        assert_eq!(v.unwrap(), Verdict::Equal);
    }

    #[test]
    fn trace_class_cancellation() {
        // t1 t3 t1 ~ t1 t1 t3 → t3
        let v = bounded_equivalent(&Sys, &word(&[1, 3, 1]), &word(&[3]), SearchBudget::default());
        assert_eq!(v.unwrap(), Verdict::Equal);
    }

    #[test]
    fn one_move_needed() {
        let v = bounded_equivalent(&Sys, &word(&[1, 2, 3]), &word(&[3, 2, 1]), SearchBudget::default());
        assert_eq!(v.unwrap(), Verdict::Equal);
    }

    #[test]
    fn unrelated_words_stay_unknown() {
        let v = bounded_equivalent(&Sys, &word(&[1]), &word(&[2]), SearchBudget::default());
        assert_eq!(v.unwrap(), Verdict::Unknown);
    }

    #[test]
    fn malformed_budget_rejected() {
        let bad = SearchBudget { max_states: 0, ..Default::default() };
        assert!(bounded_equivalent(&Sys, &word(&[1]), &word(&[1]), bad).is_err());
    }

    #[test]
    fn canonical_form_constant_on_trace_classes() {
        // 5 2 4 1: 2 and 4 commute, 1 commutes with 4 and 5 but not 2.
        let a = canonicalize(&Sys, vec![T(5), T(2), T(4), T(1)]);
        let b = canonicalize(&Sys, vec![T(5), T(4), T(2), T(1)]);
        assert_eq!(a, b);
    }
}
