//! The faithful action of braids on a free group, used as an exact
//! equality oracle and to extract kernel coordinates while combing.
//!
//! A braid on `n` strands acts on the free group `F(x_1, …, x_n)` by
//!
//! ```text
//! s_i:   x_i ↦ x_i x_{i+1} x_i⁻¹,   x_{i+1} ↦ x_i
//! s_i⁻¹: x_i ↦ x_{i+1},             x_{i+1} ↦ x_{i+1}⁻¹ x_i x_{i+1}
//! ```
//!
//! with a word acting by composition, last letter innermost. The action
//! is faithful, so equality of the induced endomorphisms decides the
//! word problem exactly. A pure braid sends each `x_i` to a conjugate
//! `A x_i A⁻¹`; the conjugator of `x_n`, with `x_n` deleted, linearizes
//! the kernel of last-strand removal and yields the coordinates of a
//! kernel element in the free basis `b_1n, …, b_{n−1,n}`.

use crate::braid::{BraidError, BraidWord, SigmaGen};
use crate::words::GroupWord;

/// Reduced word in a free group; letters are `(index, ±1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FreeWord {
    letters: Vec<(u8, i8)>,
}

impl FreeWord {
    pub(crate) fn empty() -> Self {
        FreeWord { letters: Vec::new() }
    }

    pub(crate) fn generator(i: u8) -> Self {
        FreeWord {
            letters: vec![(i, 1)],
        }
    }

    pub(crate) fn letters(&self) -> &[(u8, i8)] {
        &self.letters
    }

    fn push(&mut self, l: (u8, i8)) {
        match self.letters.last() {
            Some(&(i, e)) if i == l.0 && e == -l.1 => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }

    fn extend_reduced<I: IntoIterator<Item = (u8, i8)>>(&mut self, it: I) {
        for l in it {
            self.push(l);
        }
    }

    /// The homomorphism deleting every occurrence of `x_i`.
    fn delete_index(&self, i: u8) -> FreeWord {
        let mut out = FreeWord::empty();
        out.extend_reduced(self.letters.iter().copied().filter(|&(j, _)| j != i));
        out
    }
}

/// Image of the reduced word `f` under the action of `s_i^sign`.
fn subst_sigma(i: u8, sign: i8, f: &FreeWord) -> FreeWord {
    let mut out = FreeWord::empty();
    for &(j, e) in f.letters() {
        let image: &[(u8, i8)] = if sign == 1 {
            if j == i {
                &[(i, 1), (i + 1, 1), (i, -1)]
            } else if j == i + 1 {
                &[(i, 1)]
            } else {
                &[(j, 1)]
            }
        } else if j == i {
            &[(i + 1, 1)]
        } else if j == i + 1 {
            &[(i + 1, -1), (i, 1), (i + 1, 1)]
        } else {
            &[(j, 1)]
        };
        if e == 1 {
            out.extend_reduced(image.iter().copied());
        } else {
            out.extend_reduced(image.iter().rev().map(|&(a, b)| (a, -b)));
        }
    }
    out
}

/// Applies the action of a crossing word to `f`, last letter first.
pub(crate) fn act(word: &GroupWord<SigmaGen>, f: &FreeWord) -> FreeWord {
    let mut cur = f.clone();
    for l in word.letters().iter().rev() {
        cur = subst_sigma(l.generator().index(), l.exponent(), &cur);
    }
    cur
}

/// Exact equality of two braid words via the faithful action.
pub fn artin_equal(a: &BraidWord, b: &BraidWord) -> Result<bool, BraidError> {
    if a.n() != b.n() {
        return Err(BraidError::StrandMismatch(a.n(), b.n()));
    }
    for i in 1..=a.n() {
        let x = FreeWord::generator(i);
        if act(a.word(), &x) != act(b.word(), &x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a pure braid `u`, the reduced image of `x_n` is exactly
/// `A · x_n · A⁻¹`; extracts `A`. Errors when the image does not have
/// that shape, which signals non-pure input.
fn conjugator_of_last(n: u8, u: &BraidWord) -> Result<FreeWord, BraidError> {
    let g = act(u.word(), &FreeWord::generator(n));
    let len = g.letters().len();
    if len % 2 == 0 {
        return Err(BraidError::Comb(format!(
            "image of x_{n} has even length {len}"
        )));
    }
    let t = len / 2;
    if g.letters()[t] != (n, 1) {
        return Err(BraidError::Comb(format!(
            "image of x_{n} has middle letter {:?}, expected x_{n}",
            g.letters()[t]
        )));
    }
    for s in 0..t {
        let (a, ea) = g.letters()[t - 1 - s];
        let (b, eb) = g.letters()[t + 1 + s];
        if a != b || ea != -eb {
            return Err(BraidError::Comb(format!(
                "image of x_{n} is not a conjugate of x_{n}"
            )));
        }
    }
    let mut out = FreeWord::empty();
    out.extend_reduced(g.letters()[..t].iter().copied());
    Ok(out)
}

/// Mixed letters during back-substitution: the original free basis and
/// the kernel basis being introduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mixed {
    X(u8),
    Z(u8),
}

fn reduce_mixed(letters: Vec<(Mixed, i8)>) -> Vec<(Mixed, i8)> {
    let mut out: Vec<(Mixed, i8)> = Vec::with_capacity(letters.len());
    for l in letters {
        match out.last() {
            Some(&(m, e)) if m == l.0 && e == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// Coordinates of a kernel element `u` (a pure braid on `n` strands
/// whose last-strand removal is trivial) in the free kernel basis:
/// returns `[(i_1, e_1), …]` meaning `u = b_{i_1,n}^{e_1} ⋯`.
///
/// Method: the conjugator `A` of `x_n` under `u`, with `x_n` deleted,
/// determines `u` through an anti-isomorphism onto a free subgroup with
/// basis `z_i = (x_{i+1}⋯x_{n−1})⁻¹ · x_i · (x_{i+1}⋯x_{n−1})`; solving
/// `x_i = E_i z_i E_i⁻¹` by ascending substitution rewrites the deleted
/// conjugator as a word in the `z_i`, whose reversal gives `u`.
pub(crate) fn kernel_coordinates(n: u8, u: &BraidWord) -> Result<Vec<(u8, i8)>, BraidError> {
    let a = conjugator_of_last(n, u)?.delete_index(n);
    let mut mixed: Vec<(Mixed, i8)> = a
        .letters()
        .iter()
        .map(|&(i, e)| (Mixed::X(i), e))
        .collect();
    for i in 1..n {
        let mut next: Vec<(Mixed, i8)> = Vec::with_capacity(mixed.len());
        for &(m, e) in &mixed {
            if m != Mixed::X(i) {
                next.push((m, e));
                continue;
            }
            // x_i = E_i z_i E_i⁻¹ with E_i = x_{i+1} ⋯ x_{n−1};
            // for e = −1 the replacement is E_i z_i⁻¹ E_i⁻¹.
            for p in i + 1..n {
                next.push((Mixed::X(p), 1));
            }
            next.push((Mixed::Z(i), e));
            for p in (i + 1..n).rev() {
                next.push((Mixed::X(p), -1));
            }
        }
        mixed = reduce_mixed(next);
    }
    let mut zs: Vec<(u8, i8)> = Vec::with_capacity(mixed.len());
    for (m, e) in mixed {
        match m {
            Mixed::Z(i) => zs.push((i, e)),
            Mixed::X(i) => {
                return Err(BraidError::Comb(format!(
                    "back-substitution left x_{i}; input was not a kernel element"
                )))
            }
        }
    }
    zs.reverse();
    Ok(zs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::PureBraidGen;
    use crate::words::{GroupWord, Letter};

    fn sigma_word(n: u8, letters: &[(u8, i8)]) -> BraidWord {
        let ls = letters
            .iter()
            .map(|&(i, e)| Letter::new(SigmaGen::new(i).unwrap(), e).unwrap());
        BraidWord::new(n, GroupWord::from_letters(ls).unwrap()).unwrap()
    }

    fn expand_b(n: u8, i: u8, j: u8, e: i8) -> BraidWord {
        let g = PureBraidGen::new(i, j).unwrap();
        let w = GroupWord::from_letters([Letter::new(g, e).unwrap()]).unwrap();
        crate::braid::PureBraidWord::new(n, w).unwrap().expand()
    }

    #[test]
    fn braid_relation_holds() {
        let a = sigma_word(3, &[(1, 1), (2, 1), (1, 1)]);
        let b = sigma_word(3, &[(2, 1), (1, 1), (2, 1)]);
        assert!(artin_equal(&a, &b).unwrap());
    }

    #[test]
    fn far_generators_commute() {
        let a = sigma_word(4, &[(1, 1), (3, 1)]);
        let b = sigma_word(4, &[(3, 1), (1, 1)]);
        assert!(artin_equal(&a, &b).unwrap());
    }

    #[test]
    fn adjacent_generators_do_not_commute() {
        let a = sigma_word(3, &[(1, 1), (2, 1)]);
        let b = sigma_word(3, &[(2, 1), (1, 1)]);
        assert!(!artin_equal(&a, &b).unwrap());
    }

    #[test]
    fn action_preserves_product_of_generators() {
        // The braid group fixes x_1 x_2 ⋯ x_n.
        let w = sigma_word(4, &[(1, 1), (3, -1), (2, 1), (1, -1), (2, 1)]);
        let mut prod = FreeWord::empty();
        for i in 1..=4 {
            prod.extend_reduced([(i as u8, 1)]);
        }
        assert_eq!(act(w.word(), &prod), prod);
    }

    #[test]
    fn conjugator_formula_for_kernel_generators() {
        // Ā(b_in) = E_i⁻¹ x_i E_i with E_i = x_{i+1} ⋯ x_{n−1}.
        for n in 3..=5u8 {
            for i in 1..n {
                let u = expand_b(n, i, n, 1);
                let a = conjugator_of_last(n, &u).unwrap().delete_index(n);
                let mut expected = FreeWord::empty();
                for p in (i + 1..n).rev() {
                    expected.extend_reduced([(p, -1)]);
                }
                expected.extend_reduced([(i, 1)]);
                for p in i + 1..n {
                    expected.extend_reduced([(p, 1)]);
                }
                assert_eq!(a, expected, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn kernel_coordinates_of_generators() {
        for n in 2..=5u8 {
            for i in 1..n {
                for e in [1i8, -1] {
                    let u = expand_b(n, i, n, e);
                    assert_eq!(kernel_coordinates(n, &u).unwrap(), vec![(i, e)]);
                }
            }
        }
    }

    #[test]
    fn kernel_coordinates_of_products_preserve_order() {
        // u = b_{1n} b_{2n} must come back in that order.
        let n = 4u8;
        let u = expand_b(n, 1, n, 1).concat(&expand_b(n, 2, n, 1)).unwrap();
        assert_eq!(kernel_coordinates(n, &u).unwrap(), vec![(1, 1), (2, 1)]);
        let v = expand_b(n, 2, n, 1).concat(&expand_b(n, 1, n, -1)).unwrap();
        assert_eq!(kernel_coordinates(n, &v).unwrap(), vec![(2, 1), (1, -1)]);
    }

    #[test]
    fn moving_last_strand_is_rejected() {
        // A braid that moves strand n cannot be a kernel element; the
        // conjugator extraction must fail rather than fabricate output.
        let moving = sigma_word(3, &[(2, 1)]);
        assert!(kernel_coordinates(3, &moving).is_err());
    }
}
