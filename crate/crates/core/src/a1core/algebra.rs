//! The algebra A(1) = ⟨Sq¹, Sq²⟩ with its fixed monomial basis.
//!
//! Words in the generators are written as operator products (the rightmost
//! letter acts first).  The table is generated by rewriting words modulo
//! Sq¹Sq¹ = 0 and Sq²Sq² = Sq¹Sq²Sq¹; the rule Sq²Sq¹Sq²Sq¹ → Sq¹Sq²Sq¹Sq²
//! is the one consequence (both sides equal Sq²Sq²Sq²) needed to make the
//! rewriting confluent.

use std::sync::OnceLock;

/// Number of basis elements of A(1).
pub const A1_DIM: usize = 8;

/// Degree of the top class.
pub const TOP_DEGREE: i32 = 6;

/// Index of the unit.
pub const UNIT: usize = 0;
/// Index of Sq¹.
pub const SQ1: usize = 1;
/// Index of Sq².
pub const SQ2: usize = 2;
/// Index of Sq¹Sq².
pub const SQ1SQ2: usize = 3;
/// Index of Sq²Sq¹.
pub const SQ2SQ1: usize = 4;
/// Index of Sq²Sq² (= Sq¹Sq²Sq¹).
pub const SQ2SQ2: usize = 5;
/// Index of Sq²Sq¹Sq².
pub const SQ2SQ1SQ2: usize = 6;
/// Index of the top class Sq²Sq²Sq².
pub const TOP: usize = 7;

/// Display names of the basis, in index order.
pub const BASIS_NAMES: [&str; A1_DIM] =
    ["1", "Sq1", "Sq2", "Sq1Sq2", "Sq2Sq1", "Sq2Sq2", "Sq2Sq1Sq2", "Sq2Sq2Sq2"];

/// Degree of each basis element.
pub const BASIS_DEGREES: [i32; A1_DIM] = [0, 1, 2, 3, 3, 4, 5, 6];

/// Normal-form words of the basis (operator order, leftmost acts last).
const NORMAL_WORDS: [&[u8]; A1_DIM] = [&[], &[1], &[2], &[1, 2], &[2, 1], &[1, 2, 1], &[2, 1, 2], &[1, 2, 1, 2]];

/// Generator sequence of each basis element in application order (first
/// element acts first).  Used to evaluate basis elements on modules: e.g.
/// Sq¹Sq² applies Sq² and then Sq¹.
pub const APPLICATION_ORDER: [&[u8]; A1_DIM] =
    [&[], &[1], &[2], &[2, 1], &[1, 2], &[2, 2], &[2, 1, 2], &[2, 2, 2]];

/// Rewrites a word (operator order) to normal form; `None` means zero.
pub fn normalize(word: &[u8]) -> Option<Vec<u8>> {
    let mut w: Vec<u8> = word.to_vec();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < w.len() {
            if i + 1 < w.len() && w[i] == 1 && w[i + 1] == 1 {
                return None;
            }
            if i + 1 < w.len() && w[i] == 2 && w[i + 1] == 2 {
                w.splice(i..i + 2, [1, 2, 1]);
                changed = true;
                break;
            }
            if i + 3 < w.len() && w[i..i + 4] == [2, 1, 2, 1] {
                w.splice(i..i + 4, [1, 2, 1, 2]);
                changed = true;
                break;
            }
            i += 1;
        }
        if !changed {
            return Some(w);
        }
    }
}

/// Index of a normal-form word in the basis.
fn index_of_normal(word: &[u8]) -> Option<usize> {
    NORMAL_WORDS.iter().position(|w| *w == word)
}

/// Index of the basis element equal to the given word, or `None` when the
/// word vanishes.  Panics if the rewriting produces a non-basis word, which
/// would signal an incomplete rewriting system.
pub fn word_to_basis(word: &[u8]) -> Option<usize> {
    let n = normalize(word)?;
    if n.iter().map(|&g| g as i32).sum::<i32>() > TOP_DEGREE {
        return None;
    }
    Some(index_of_normal(&n).unwrap_or_else(|| panic!("word {n:?} is not a normal form of A(1)")))
}

/// The multiplication table: `product(i, j)` is `b_i · b_j` (apply `b_j` first).
pub fn product(i: usize, j: usize) -> Option<usize> {
    table()[i][j]
}

fn table() -> &'static [[Option<usize>; A1_DIM]; A1_DIM] {
    static TABLE: OnceLock<[[Option<usize>; A1_DIM]; A1_DIM]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[None; A1_DIM]; A1_DIM];
        for i in 0..A1_DIM {
            for j in 0..A1_DIM {
                let mut w = NORMAL_WORDS[i].to_vec();
                w.extend_from_slice(NORMAL_WORDS[j]);
                t[i][j] = word_to_basis(&w);
            }
        }
        t
    })
}

/// An element of A(1) as a bitmask over the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct A1Elt(pub u8);

impl A1Elt {
    pub const ZERO: A1Elt = A1Elt(0);

    pub fn basis(i: usize) -> Self {
        A1Elt(1 << i)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    pub fn terms(self) -> impl Iterator<Item = usize> {
        (0..A1_DIM).filter(move |&i| self.contains(i))
    }

    pub fn add(self, other: A1Elt) -> A1Elt {
        A1Elt(self.0 ^ other.0)
    }

    /// The product `self · other`.
    pub fn mul(self, other: A1Elt) -> A1Elt {
        let mut r = 0u8;
        for i in self.terms() {
            for j in other.terms() {
                if let Some(k) = product(i, j) {
                    r ^= 1 << k;
                }
            }
        }
        A1Elt(r)
    }

    /// Whether the element has nonzero unit coefficient (is invertible).
    pub fn is_unit(self) -> bool {
        self.contains(UNIT)
    }
}

/// Basis indices of a given degree.
pub fn basis_in_degree(d: i32) -> impl Iterator<Item = usize> {
    (0..A1_DIM).filter(move |&i| BASIS_DEGREES[i] == d)
}

/// Dimension of A(1) in degree `d`.
pub fn dim_in_degree(d: i32) -> usize {
    basis_in_degree(d).count()
}

/// The coefficient of the top class in `b_i · b_j`; the nondegenerate
/// Frobenius pairing of A(1).
pub fn frobenius_pairing(i: usize, j: usize) -> bool {
    product(i, j) == Some(TOP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_dimension_eight_and_relations() {
        // Every basis element is a normal word and degrees add.
        for i in 0..A1_DIM {
            assert_eq!(word_to_basis(NORMAL_WORDS[i]), Some(i));
            let deg: i32 = NORMAL_WORDS[i].iter().map(|&g| g as i32).sum();
            assert_eq!(deg, BASIS_DEGREES[i]);
        }
        assert_eq!(product(SQ1, SQ1), None);
        assert_eq!(word_to_basis(&[2, 2]), word_to_basis(&[1, 2, 1]));
        assert_eq!(word_to_basis(&[2, 2]), Some(SQ2SQ2));
        assert_eq!(word_to_basis(&[2, 2, 2]), Some(TOP));
        assert_eq!(word_to_basis(&[2, 1, 2]), Some(SQ2SQ1SQ2));
        assert_eq!(word_to_basis(&[1, 2, 2]), None);
        assert_eq!(word_to_basis(&[2, 2, 1]), None);
    }

    #[test]
    fn associativity() {
        for i in 0..A1_DIM {
            for j in 0..A1_DIM {
                for k in 0..A1_DIM {
                    let a = A1Elt::basis(i);
                    let b = A1Elt::basis(j);
                    let c = A1Elt::basis(k);
                    assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
                }
            }
        }
    }

    #[test]
    fn application_order_matches_words() {
        for i in 0..A1_DIM {
            let mut w: Vec<u8> = APPLICATION_ORDER[i].to_vec();
            w.reverse();
            assert_eq!(word_to_basis(&w), Some(i), "basis element {}", BASIS_NAMES[i]);
        }
    }

    #[test]
    fn frobenius_pairing_is_nondegenerate() {
        for d in 0..=TOP_DEGREE {
            let left: Vec<usize> = basis_in_degree(d).collect();
            let right: Vec<usize> = basis_in_degree(TOP_DEGREE - d).collect();
            assert_eq!(left.len(), right.len());
            let m = crate::gf2::BitMatrix::from_fn(left.len(), right.len(), |r, c| {
                frobenius_pairing(left[r], right[c])
            });
            assert!(m.is_invertible(), "degree {d}");
        }
    }

    #[test]
    fn word_enumeration_closes_at_eight() {
        // Enumerate all words up to length 8 and collect distinct nonzero results.
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..8 {
            let mut next = Vec::new();
            for w in &frontier {
                if let Some(i) = word_to_basis(w) {
                    seen.insert(i);
                }
                for g in [1u8, 2] {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            frontier = next;
        }
        assert_eq!(seen.len(), A1_DIM);
    }
}
