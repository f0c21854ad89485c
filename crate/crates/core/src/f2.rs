//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed; the only operations needed by the group
//! quotients are XOR, rank via Gaussian elimination, and reduction of a
//! vector against a row-echelon basis (canonical coset representative).

use serde::{Deserialize, Serialize};

/// A fixed-length vector over F2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    bits: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            bits: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.bits[i / 64] |= mask;
        } else {
            self.bits[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.bits[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first set bit, if any.
    pub fn leading(&self) -> Option<usize> {
        for (i, &w) in self.bits.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Bit string such as `"0110"`, most significant coordinate first in
    /// index order (coordinate 0 leftmost).
    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Option<Self> {
        let mut v = F2Vector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn ones_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

impl Serialize for F2Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for F2Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        F2Vector::from_bitstring(&s)
            .ok_or_else(|| serde::de::Error::custom("bitstring must contain only 0/1"))
    }
}

/// A row-echelon basis of a subspace of F2^n, kept sorted by pivot.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    cols: usize,
    /// Rows in strictly increasing pivot order; each row's pivot column is
    /// zero in every other row (reduced row echelon form).
    rows: Vec<F2Vector>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis { cols, rows: Vec::new() }
    }

    /// Builds the reduced echelon basis of the span of `vectors`.
    pub fn from_vectors<'a, I>(cols: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a F2Vector>,
    {
        let mut basis = EchelonBasis::new(cols);
        for v in vectors {
            basis.insert(v.clone());
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Inserts a vector into the span; returns true when it was independent.
    pub fn insert(&mut self, mut v: F2Vector) -> bool {
        assert_eq!(v.len(), self.cols, "column count mismatch");
        self.reduce(&mut v);
        let pivot = match v.leading() {
            Some(p) => p,
            None => return false,
        };
        // Clear the new pivot from existing rows to stay fully reduced.
        for row in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        let pos = self
            .rows
            .binary_search_by_key(&pivot, |r| r.leading().expect("nonzero row"))
            .unwrap_err();
        self.rows.insert(pos, v);
        true
    }

    /// Reduces `v` to the canonical representative of `v + span(self)`:
    /// the unique coset element with zeros in every pivot column.
    pub fn reduce(&self, v: &mut F2Vector) {
        assert_eq!(v.len(), self.cols, "column count mismatch");
        for row in &self.rows {
            let pivot = row.leading().expect("nonzero row");
            if v.get(pivot) {
                v.xor_assign(row);
            }
        }
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }
}
