//! Functorial induced representations of GL(E): dual, symmetric powers,
//! exterior powers, tensor products; their weight decompositions under a
//! Hermitian generator; and Plücker coordinates of subspaces.
//!
//! Index orders are fixed once and for all so file formats and oracles agree
//! bit-for-bit: p-subsets in lexicographic order for exterior powers,
//! monomials in descending graded-lex order for symmetric powers, row-major
//! products for tensors. The inner product on an induced space is the one
//! making the canonical monomial/wedge basis orthogonal with the standard
//! combinatorial normalization, so induced unitaries stay unitary.

mod descriptor;
mod induce;
mod plucker;
mod weights;

pub use descriptor::RepDescriptor;
pub use induce::{induce, induce_lie};
pub use plucker::{plucker, PluckerVector};
pub use weights::{induced_weights, WeightDecomposition};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepsError {
    #[error("induced dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("descriptor parameter out of range: {0}")]
    InvalidDescriptor(String),
    #[error("cannot parse representation descriptor `{0}`")]
    ParseError(String),
    #[error("operator must be invertible for the {0} representation")]
    SingularOperator(String),
    #[error("spanning vectors are numerically dependent (smallest singular value {sigma_min:.3e})")]
    DegenerateSpan { sigma_min: f64 },
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Monomials of total degree `k` in `m` variables, descending graded-lex:
/// `x1^k` first, `xm^k` last. Shared with the graded-ring module so both
/// sides index coefficient vectors identically.
pub fn monomials_desc_grlex_pub(m: usize, k: usize) -> Vec<Vec<u16>> {
    monomials_desc_grlex(m, k)
}

pub(crate) fn monomials_desc_grlex(m: usize, k: usize) -> Vec<Vec<u16>> {
    fn rec(m: usize, k: usize, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if m == 1 {
            let mut full = prefix.clone();
            full.push(k as u16);
            out.push(full);
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first as u16);
            rec(m - 1, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, &mut Vec::new(), &mut out);
    out
}

/// p-element subsets of {0, .., m-1} in lexicographic order.
pub(crate) fn subsets_lex(m: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(next: usize, m: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in next..=m - left {
            prefix.push(i);
            rec(i + 1, m, left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if p <= m {
        rec(0, m, p, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order_matches_the_documented_example() {
        let ms = monomials_desc_grlex(2, 2);
        assert_eq!(ms, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn subset_order_is_lex() {
        let ss = subsets_lex(4, 2);
        assert_eq!(
            ss,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn counts_match_binomials() {
        assert_eq!(monomials_desc_grlex(4, 3).len(), binomial(6, 3).unwrap());
        assert_eq!(subsets_lex(6, 3).len(), binomial(6, 3).unwrap());
    }
}
