//! Braid words on a fixed strand count, both in crossing generators
//! `s_i` (strands at positions i, i+1 cross) and in pure-braid
//! generators `b_ij` (strand j loops once around strand i), together
//! with the expansion `b_ij = s_{j−1}⋯s_{i+1}·s_i²·s_{i+1}⁻¹⋯s_{j−1}⁻¹`,
//! permutation and linking-number computation, and combing of pure
//! words into the `b` alphabet.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artin;
use crate::words::{Generator, GroupWord, Letter, WordError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("strand count must be between 1 and 64, got {0}")]
    BadStrandCount(u8),
    #[error("letter {letter} is out of range for {n} strands")]
    LetterOutOfRange { letter: String, n: u8 },
    #[error("braid is not pure: strand {strand} ends at position {position}")]
    NotPure { strand: u8, position: u8 },
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(u8, u8),
    #[error("combing failed: {0}")]
    Comb(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Crossing generator `s_i`, exchanging the strands at positions
/// `i` and `i+1` (positive: the strand moving leftward passes in front).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SigmaGen {
    i: u8,
}

impl SigmaGen {
    pub fn new(i: u8) -> Result<Self, BraidError> {
        if i == 0 {
            return Err(BraidError::LetterOutOfRange {
                letter: format!("s{i}"),
                n: 0,
            });
        }
        Ok(SigmaGen { i })
    }

    pub fn index(&self) -> u8 {
        self.i
    }
}

impl Generator for SigmaGen {
    const INVOLUTIVE: bool = false;
    type Key = ();

    fn key(&self) {}

    fn text(&self) -> String {
        format!("s{}", self.i)
    }
}

impl fmt::Display for SigmaGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl FromStr for SigmaGen {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BraidError::LetterOutOfRange {
            letter: s.to_string(),
            n: 0,
        };
        let body = s.strip_prefix('s').ok_or_else(bad)?;
        let i: u8 = body.parse().map_err(|_| bad())?;
        SigmaGen::new(i)
    }
}

/// Pure-braid generator `b_i_j` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureBraidGen {
    i: u8,
    j: u8,
}

impl PureBraidGen {
    pub fn new(i: u8, j: u8) -> Result<Self, BraidError> {
        if i == 0 || j <= i {
            return Err(BraidError::LetterOutOfRange {
                letter: format!("b_{i}_{j}"),
                n: 0,
            });
        }
        Ok(PureBraidGen { i, j })
    }

    pub fn i(&self) -> u8 {
        self.i
    }

    pub fn j(&self) -> u8 {
        self.j
    }
}

impl Generator for PureBraidGen {
    const INVOLUTIVE: bool = false;
    type Key = ();

    fn key(&self) {}

    fn text(&self) -> String {
        format!("b_{}_{}", self.i, self.j)
    }
}

impl fmt::Display for PureBraidGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl FromStr for PureBraidGen {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BraidError::LetterOutOfRange {
            letter: s.to_string(),
            n: 0,
        };
        let body = s.strip_prefix("b_").ok_or_else(bad)?;
        let (a, b) = body.split_once('_').ok_or_else(bad)?;
        let i: u8 = a.parse().map_err(|_| bad())?;
        let j: u8 = b.parse().map_err(|_| bad())?;
        PureBraidGen::new(i, j)
    }
}

pub const MAX_STRANDS: u8 = 64;

/// A braid word in crossing generators, with explicit strand count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBraidWord")]
pub struct BraidWord {
    n: u8,
    word: GroupWord<SigmaGen>,
}

#[derive(Deserialize)]
struct RawBraidWord {
    n: u8,
    word: GroupWord<SigmaGen>,
}

impl TryFrom<RawBraidWord> for BraidWord {
    type Error = BraidError;

    fn try_from(raw: RawBraidWord) -> Result<Self, Self::Error> {
        BraidWord::new(raw.n, raw.word)
    }
}

impl BraidWord {
    pub fn new(n: u8, word: GroupWord<SigmaGen>) -> Result<Self, BraidError> {
        if n == 0 || n > MAX_STRANDS {
            return Err(BraidError::BadStrandCount(n));
        }
        for l in word.letters() {
            if l.generator().index() + 1 > n {
                return Err(BraidError::LetterOutOfRange {
                    letter: l.text(),
                    n,
                });
            }
        }
        Ok(BraidWord { n, word })
    }

    pub fn identity(n: u8) -> Result<Self, BraidError> {
        BraidWord::new(n, GroupWord::empty())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn word(&self) -> &GroupWord<SigmaGen> {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.n != other.n {
            return Err(BraidError::StrandMismatch(self.n, other.n));
        }
        Ok(BraidWord {
            n: self.n,
            word: self.word.concat(&other.word)?,
        })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            n: self.n,
            word: self.word.inverse(),
        }
    }

    /// Final position of each strand: entry `s − 1` is where strand `s`
    /// (numbered by starting position) ends.
    pub fn permutation(&self) -> Vec<u8> {
        let mut at: Vec<u8> = (1..=self.n).collect();
        for l in self.word.letters() {
            let p = l.generator().index() as usize;
            at.swap(p - 1, p);
        }
        let mut perm = vec![0u8; self.n as usize];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand as usize - 1] = pos as u8 + 1;
        }
        perm
    }

    /// Whether every strand returns to its starting position.
    pub fn is_pure(&self) -> bool {
        self.permutation()
            .iter()
            .enumerate()
            .all(|(s, &p)| p == s as u8 + 1)
    }

    fn require_pure(&self) -> Result<(), BraidError> {
        let perm = self.permutation();
        for (s, &p) in perm.iter().enumerate() {
            if p != s as u8 + 1 {
                return Err(BraidError::NotPure {
                    strand: s as u8 + 1,
                    position: p,
                });
            }
        }
        Ok(())
    }

    /// Linking numbers of a pure braid: half the signed count of
    /// crossings between each pair of strands.
    pub fn linking_numbers(&self) -> Result<BTreeMap<(u8, u8), i64>, BraidError> {
        self.require_pure()?;
        let mut at: Vec<u8> = (1..=self.n).collect();
        let mut doubled: BTreeMap<(u8, u8), i64> = BTreeMap::new();
        for l in self.word.letters() {
            let p = l.generator().index() as usize;
            let (a, b) = (at[p - 1], at[p]);
            let key = (a.min(b), a.max(b));
            *doubled.entry(key).or_insert(0) += l.exponent() as i64;
            at.swap(p - 1, p);
        }
        // Pure braids cross each pair an even number of times.
        let mut out = BTreeMap::new();
        for (key, d) in doubled {
            debug_assert_eq!(d.rem_euclid(2), 0, "odd crossing parity in pure braid");
            if d != 0 {
                out.insert(key, d / 2);
            }
        }
        Ok(out)
    }

    /// Removes the last strand: crossings involving it are dropped and
    /// the remaining crossing indices are shifted past its position.
    pub(crate) fn peel_last(&self) -> BraidWord {
        let n = self.n;
        let mut pos = n; // current position of strand n
        let mut letters: Vec<Letter<SigmaGen>> = Vec::with_capacity(self.word.len());
        for l in self.word.letters() {
            let p = l.generator().index();
            if pos == p {
                pos = p + 1;
            } else if pos == p + 1 {
                pos = p;
            } else {
                let idx = if pos < p { p - 1 } else { p };
                let g = SigmaGen::new(idx).expect("index stays positive");
                letters.push(Letter::new(g, l.exponent()).expect("valid exponent"));
            }
        }
        let word = GroupWord::from_letters(letters).expect("uniform alphabet");
        BraidWord::new(n - 1, word).expect("indices shifted below n-1")
    }
}

/// A word in pure-braid generators, with explicit strand count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPureBraidWord")]
pub struct PureBraidWord {
    n: u8,
    word: GroupWord<PureBraidGen>,
}

#[derive(Deserialize)]
struct RawPureBraidWord {
    n: u8,
    word: GroupWord<PureBraidGen>,
}

impl TryFrom<RawPureBraidWord> for PureBraidWord {
    type Error = BraidError;

    fn try_from(raw: RawPureBraidWord) -> Result<Self, Self::Error> {
        PureBraidWord::new(raw.n, raw.word)
    }
}

impl PureBraidWord {
    pub fn new(n: u8, word: GroupWord<PureBraidGen>) -> Result<Self, BraidError> {
        if n == 0 || n > MAX_STRANDS {
            return Err(BraidError::BadStrandCount(n));
        }
        for l in word.letters() {
            if l.generator().j() > n {
                return Err(BraidError::LetterOutOfRange {
                    letter: l.text(),
                    n,
                });
            }
        }
        Ok(PureBraidWord { n, word })
    }

    pub fn identity(n: u8) -> Result<Self, BraidError> {
        PureBraidWord::new(n, GroupWord::empty())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn word(&self) -> &GroupWord<PureBraidGen> {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn concat(&self, other: &PureBraidWord) -> Result<PureBraidWord, BraidError> {
        if self.n != other.n {
            return Err(BraidError::StrandMismatch(self.n, other.n));
        }
        Ok(PureBraidWord {
            n: self.n,
            word: self.word.concat(&other.word)?,
        })
    }

    pub fn inverse(&self) -> PureBraidWord {
        PureBraidWord {
            n: self.n,
            word: self.word.inverse(),
        }
    }

    /// Exponent sum per generator, dropping zeros.
    pub fn linking_numbers(&self) -> BTreeMap<(u8, u8), i64> {
        let mut out: BTreeMap<(u8, u8), i64> = BTreeMap::new();
        for l in self.word.letters() {
            let g = l.generator();
            *out.entry((g.i(), g.j())).or_insert(0) += l.exponent() as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Expansion into crossing generators.
    pub fn expand(&self) -> BraidWord {
        let mut letters: Vec<Letter<SigmaGen>> = Vec::new();
        for l in self.word.letters() {
            let (i, j) = (l.generator().i(), l.generator().j());
            let e = l.exponent();
            // prefix s_{j-1} … s_{i+1}
            for p in (i + 1..j).rev() {
                letters.push(Letter::positive(SigmaGen::new(p).expect("positive")));
            }
            // middle s_i^{2e}
            let mid = SigmaGen::new(i).expect("positive");
            letters.push(Letter::new(mid, e).expect("valid"));
            letters.push(Letter::new(mid, e).expect("valid"));
            // suffix s_{i+1}^{-1} … s_{j-1}^{-1}
            for p in i + 1..j {
                let g = SigmaGen::new(p).expect("positive");
                letters.push(Letter::new(g, -1).expect("valid"));
            }
        }
        let word = GroupWord::from_letters(letters).expect("uniform alphabet");
        BraidWord::new(self.n, word).expect("indices below n")
    }
}

/// The full-twist word `(s_1 ⋯ s_{n−1})ⁿ`, generating the center.
pub fn center_word(n: u8) -> Result<BraidWord, BraidError> {
    if n == 0 || n > MAX_STRANDS {
        return Err(BraidError::BadStrandCount(n));
    }
    let mut letters = Vec::with_capacity((n as usize) * (n as usize - 1));
    for _ in 0..n {
        for i in 1..n {
            letters.push(Letter::positive(SigmaGen::new(i).expect("positive")));
        }
    }
    let word = GroupWord::from_letters(letters).expect("uniform alphabet");
    BraidWord::new(n, word)
}

/// Combs a pure braid into the `b_i_j` alphabet by peeling the last
/// strand: the word splits as (loops of strand n around the others) ·
/// (a braid not involving strand n), and recursion on the latter yields
/// the normal form. The result is validated against the input through
/// the faithful free-group action; on success the two are equal as
/// braids, not merely as invariants.
pub fn comb(w: &BraidWord) -> Result<PureBraidWord, BraidError> {
    w.require_pure()?;
    let combed = comb_rec(w)?;
    if !artin::artin_equal(&combed.expand(), w)? {
        return Err(BraidError::Comb(
            "internal validation failed: combed word differs from input".into(),
        ));
    }
    Ok(combed)
}

fn comb_rec(w: &BraidWord) -> Result<PureBraidWord, BraidError> {
    let n = w.n;
    if n == 1 {
        return PureBraidWord::identity(1);
    }
    // Split w = u · ι(v) with v on n−1 strands and u in the kernel of
    // strand deletion.
    let v = w.peel_last();
    let iota_v = BraidWord::new(n, v.word.clone()).expect("letters stay in range");
    let u = w.concat(&iota_v.inverse())?;
    // Coordinates of u in the free kernel basis b_1n, …, b_{n−1,n}.
    let coords = artin::kernel_coordinates(n, &u)?;
    let mut letters: Vec<Letter<PureBraidGen>> = Vec::with_capacity(coords.len());
    for (i, e) in coords {
        let g = PureBraidGen::new(i, n).expect("i < n");
        letters.push(Letter::new(g, e).expect("valid exponent"));
    }
    let head = PureBraidWord::new(n, GroupWord::from_letters(letters)?)?;
    // Recurse on the peeled braid and re-embed.
    let tail_small = comb_rec(&v)?;
    let tail = PureBraidWord::new(n, tail_small.word.clone()).expect("letters stay in range");
    head.concat(&tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_word(n: u8, letters: &[(u8, i8)]) -> BraidWord {
        let ls = letters
            .iter()
            .map(|&(i, e)| Letter::new(SigmaGen::new(i).unwrap(), e).unwrap());
        BraidWord::new(n, GroupWord::from_letters(ls).unwrap()).unwrap()
    }

    fn b_word(n: u8, letters: &[(u8, u8, i8)]) -> PureBraidWord {
        let ls = letters
            .iter()
            .map(|&(i, j, e)| Letter::new(PureBraidGen::new(i, j).unwrap(), e).unwrap());
        PureBraidWord::new(n, GroupWord::from_letters(ls).unwrap()).unwrap()
    }

    #[test]
    fn texts_and_parsing() {
        assert_eq!(SigmaGen::new(3).unwrap().text(), "s3");
        assert_eq!("s3".parse::<SigmaGen>().unwrap(), SigmaGen::new(3).unwrap());
        assert_eq!(PureBraidGen::new(1, 4).unwrap().text(), "b_1_4");
        assert_eq!(
            "b_1_4".parse::<PureBraidGen>().unwrap(),
            PureBraidGen::new(1, 4).unwrap()
        );
        assert!("b_4_1".parse::<PureBraidGen>().is_err());
        assert!("s0".parse::<SigmaGen>().is_err());
    }

    #[test]
    fn out_of_range_letters_rejected() {
        let w = GroupWord::from_generators(vec![SigmaGen::new(3).unwrap()]).unwrap();
        assert!(BraidWord::new(3, w).is_err()); // s3 needs 4 strands
        let p = GroupWord::from_generators(vec![PureBraidGen::new(1, 4).unwrap()]).unwrap();
        assert!(PureBraidWord::new(3, p).is_err());
    }

    #[test]
    fn permutation_and_purity() {
        let w = sigma_word(3, &[(1, 1)]);
        assert_eq!(w.permutation(), vec![2, 1, 3]);
        assert!(!w.is_pure());
        let sq = sigma_word(3, &[(1, 1), (1, 1)]);
        assert!(sq.is_pure());
    }

    #[test]
    fn expansion_of_b13_matches_formula() {
        let b13 = b_word(3, &[(1, 3, 1)]);
        let expanded = b13.expand();
        assert_eq!(expanded, sigma_word(3, &[(2, 1), (1, 1), (1, 1), (2, -1)]));
        // Inverse letter flips only the middle square.
        let inv = b_word(3, &[(1, 3, -1)]).expand();
        assert_eq!(inv, sigma_word(3, &[(2, 1), (1, -1), (1, -1), (2, -1)]));
    }

    #[test]
    fn linking_numbers_of_expanded_generators() {
        for n in 3..=5u8 {
            for i in 1..n {
                for j in i + 1..=n {
                    let w = b_word(n, &[(i, j, 1)]).expand();
                    let lk = w.linking_numbers().unwrap();
                    assert_eq!(lk.len(), 1);
                    assert_eq!(lk[&(i, j)], 1);
                }
            }
        }
    }

    #[test]
    fn linking_numbers_require_purity() {
        let w = sigma_word(3, &[(1, 1)]);
        assert!(matches!(
            w.linking_numbers(),
            Err(BraidError::NotPure { .. })
        ));
    }

    #[test]
    fn pure_word_linking_is_exponent_sum() {
        let w = b_word(4, &[(1, 2, 1), (3, 4, -1), (1, 2, 1)]);
        let lk = w.linking_numbers();
        assert_eq!(lk[&(1, 2)], 2);
        assert_eq!(lk[&(3, 4)], -1);
        assert_eq!(lk.len(), 2);
    }

    #[test]
    fn center_is_pure_with_unit_linking() {
        for n in 2..=5u8 {
            let z = center_word(n).unwrap();
            assert!(z.is_pure(), "n={n}");
            let lk = z.linking_numbers().unwrap();
            for i in 1..n {
                for j in i + 1..=n {
                    assert_eq!(lk[&(i, j)], 1, "n={n}, pair ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn peel_last_drops_strand() {
        // b_13 on 3 strands involves strand 3: peeling leaves nothing.
        let w = b_word(3, &[(1, 3, 1)]).expand();
        assert!(w.peel_last().is_empty());
        // b_12 on 3 strands does not involve strand 3.
        let w = b_word(3, &[(1, 2, 1)]).expand();
        let peeled = w.peel_last();
        assert_eq!(peeled, sigma_word(2, &[(1, 1), (1, 1)]));
    }

    #[test]
    fn comb_roundtrips_generators() {
        for n in 2..=5u8 {
            for i in 1..n {
                for j in i + 1..=n {
                    for e in [1i8, -1] {
                        let w = b_word(n, &[(i, j, e)]);
                        let combed = comb(&w.expand()).unwrap();
                        assert_eq!(combed.linking_numbers(), w.linking_numbers());
                    }
                }
            }
        }
    }

    #[test]
    fn comb_of_center_has_unit_linking() {
        for n in 2..=4u8 {
            let z = center_word(n).unwrap();
            let combed = comb(&z).unwrap();
            let lk = combed.linking_numbers();
            for i in 1..n {
                for j in i + 1..=n {
                    assert_eq!(lk[&(i, j)], 1);
                }
            }
        }
    }

    #[test]
    fn comb_rejects_impure_input() {
        let w = sigma_word(3, &[(1, 1), (2, 1)]);
        assert!(matches!(comb(&w), Err(BraidError::NotPure { .. })));
    }
}
