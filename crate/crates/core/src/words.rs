//! Words over generator alphabets, stored in reduced form.
//!
//! A [`GroupWord`] is a sequence of letters `g^±1` that is always kept
//! freely reduced. Alphabets whose generators are involutions (`g² = 1`)
//! additionally cancel adjacent equal letters and store every exponent
//! as `+1`. Reduction is confluent, so the stored form is independent of
//! the order in which cancellations are applied.

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::str::FromStr;

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A generator symbol usable as the letter type of a [`GroupWord`].
///
/// `Key` discriminates sub-alphabets sharing one Rust type (for example
/// triple-index and quadruple-index generators); words never mix keys.
pub trait Generator: Clone + Eq + Ord + Hash + fmt::Debug {
    /// True when every generator of this alphabet satisfies `g² = 1`.
    const INVOLUTIVE: bool;

    /// Sub-alphabet discriminator; `concat` rejects mismatched keys.
    type Key: PartialEq + Copy + fmt::Debug;

    fn key(&self) -> Self::Key;

    /// Canonical text form of the bare generator (no exponent suffix).
    fn text(&self) -> String;
}

/// Errors raised while building or combining words.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("mismatched alphabets: {0}")]
    MismatchedAlphabets(String),
    #[error("exponent must be +1 or -1, got {0}")]
    BadExponent(i32),
    #[error("unparsable letter {0:?}")]
    BadLetter(String),
}

/// One letter `generator^exponent`; involutive alphabets always store `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter<G: Generator> {
    gen: G,
    exp: i8,
}

impl<G: Generator> Letter<G> {
    pub fn new(gen: G, exp: i8) -> Result<Self, WordError> {
        if exp != 1 && exp != -1 {
            return Err(WordError::BadExponent(exp as i32));
        }
        let exp = if G::INVOLUTIVE { 1 } else { exp };
        Ok(Letter { gen, exp })
    }

    pub fn positive(gen: G) -> Self {
        Letter { gen, exp: 1 }
    }

    pub fn generator(&self) -> &G {
        &self.gen
    }

    pub fn exponent(&self) -> i8 {
        self.exp
    }

    pub fn inverse(&self) -> Self {
        Letter {
            gen: self.gen.clone(),
            exp: if G::INVOLUTIVE { 1 } else { -self.exp },
        }
    }

    /// True when `self · other` cancels to the identity.
    fn cancels(&self, other: &Self) -> bool {
        self.gen == other.gen && (G::INVOLUTIVE || self.exp + other.exp == 0)
    }

    pub fn text(&self) -> String {
        if self.exp == 1 {
            self.gen.text()
        } else {
            format!("{}^-1", self.gen.text())
        }
    }
}

/// A reduced word over the alphabet `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupWord<G: Generator> {
    letters: Vec<Letter<G>>,
}

impl<G: Generator> Default for GroupWord<G> {
    fn default() -> Self {
        GroupWord { letters: Vec::new() }
    }
}

impl<G: Generator> GroupWord<G> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word from letters, checking alphabet uniformity and reducing.
    pub fn from_letters<I>(letters: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = Letter<G>>,
    {
        let mut out: Vec<Letter<G>> = Vec::new();
        let mut key: Option<G::Key> = None;
        for l in letters {
            match key {
                None => key = Some(l.gen.key()),
                Some(k) => {
                    if k != l.gen.key() {
                        return Err(WordError::MismatchedAlphabets(format!(
                            "{:?} vs {:?}",
                            k,
                            l.gen.key()
                        )));
                    }
                }
            }
            push_reduced(&mut out, l);
        }
        Ok(GroupWord { letters: out })
    }

    /// Word consisting of the given generators, all with exponent `+1`.
    pub fn from_generators<I>(gens: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = G>,
    {
        Self::from_letters(gens.into_iter().map(Letter::positive))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter<G>] {
        &self.letters
    }

    fn alphabet_key(&self) -> Option<G::Key> {
        self.letters.first().map(|l| l.gen.key())
    }

    /// Concatenation followed by reduction across the junction.
    pub fn concat(&self, other: &Self) -> Result<Self, WordError> {
        if let (Some(a), Some(b)) = (self.alphabet_key(), other.alphabet_key()) {
            if a != b {
                return Err(WordError::MismatchedAlphabets(format!("{:?} vs {:?}", a, b)));
            }
        }
        let mut out = self.letters.clone();
        for l in &other.letters {
            push_reduced(&mut out, l.clone());
        }
        Ok(GroupWord { letters: out })
    }

    /// The group inverse: reversed letters with flipped exponents.
    pub fn inverse(&self) -> Self {
        GroupWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// Word length parity; the mod-2 class is invariant under the relations
    /// of the involutive presentations used throughout this crate.
    pub fn parity(&self) -> bool {
        self.letters.len() % 2 == 1
    }

    pub fn texts(&self) -> Vec<String> {
        self.letters.iter().map(Letter::text).collect()
    }
}

/// Push one letter onto a reduced stack, cancelling if possible.
fn push_reduced<G: Generator>(stack: &mut Vec<Letter<G>>, l: Letter<G>) {
    match stack.last() {
        Some(top) if top.cancels(&l) => {
            stack.pop();
        }
        _ => stack.push(l),
    }
}

impl<G: Generator> fmt::Display for GroupWord<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.texts();
        write!(f, "{}", parts.join(" "))
    }
}

/// Splits an optional `^-1` suffix off a letter spelling.
pub fn split_exponent(s: &str) -> (&str, i8) {
    match s.strip_suffix("^-1") {
        Some(base) => (base, -1),
        None => (s, 1),
    }
}

/// Parses one letter like `a_1_2_3`, `d_(1,2,3,4)^-1`, `s3`, `b_1_4^-1`.
pub fn parse_letter<G>(s: &str) -> Result<Letter<G>, WordError>
where
    G: Generator + FromStr,
{
    let (base, exp) = split_exponent(s);
    let gen = base
        .parse::<G>()
        .map_err(|_| WordError::BadLetter(s.to_string()))?;
    Letter::new(gen, exp)
}

/// Parses a full word from letter spellings, reducing as it goes.
pub fn parse_word<G>(texts: &[String]) -> Result<GroupWord<G>, WordError>
where
    G: Generator + FromStr,
{
    let letters: Result<Vec<_>, _> = texts.iter().map(|s| parse_letter(s)).collect();
    GroupWord::from_letters(letters?)
}

impl<G: Generator> Serialize for GroupWord<G> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.letters.len()))?;
        for l in &self.letters {
            seq.serialize_element(&l.text())?;
        }
        seq.end()
    }
}

impl<'de, G> Deserialize<'de> for GroupWord<G>
where
    G: Generator + FromStr,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WordVisitor<G>(PhantomData<G>);

        impl<'de, G> Visitor<'de> for WordVisitor<G>
        where
            G: Generator + FromStr,
        {
            type Value = GroupWord<G>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an array of letter strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut texts: Vec<String> = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    texts.push(s);
                }
                parse_word(&texts).map_err(serde::de::Error::custom)
            }
        }

        deserializer.deserialize_seq(WordVisitor(PhantomData))
    }
}
