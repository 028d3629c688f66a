//! Monomial bases and sparse homogeneous polynomials.
//!
//! Monomials of a fixed degree are enumerated in descending graded-lex
//! order; this order indexes every coefficient vector in the module.

use super::RingError;
use crate::CVec;
use num_complex::Complex64;
use std::collections::HashMap;

/// The monomial basis of `Sym^k` in `m` variables, with index lookup.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: usize,
    exps: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
}

impl MonomialBasis {
    pub fn new(num_vars: usize, degree: usize) -> Self {
        let exps = crate::reps::monomials_desc_grlex_pub(num_vars, degree);
        let index = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Self {
            num_vars,
            degree,
            exps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exponents(&self) -> &[Vec<u16>] {
        &self.exps
    }

    pub fn index_of(&self, exp: &[u16]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    /// Weight of each monomial under the given variable weights.
    pub fn weights(&self, var_weights: &[f64]) -> Vec<f64> {
        self.exps
            .iter()
            .map(|e| {
                e.iter()
                    .zip(var_weights)
                    .map(|(&a, &w)| a as f64 * w)
                    .sum()
            })
            .collect()
    }
}

/// A sparse homogeneous polynomial: exponent vectors with complex
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly {
    pub terms: Vec<(Vec<u16>, Complex64)>,
}

impl SparsePoly {
    pub fn new(terms: Vec<(Vec<u16>, Complex64)>) -> Result<Self, RingError> {
        if terms.is_empty() {
            return Err(RingError::Dimension("empty polynomial".into()));
        }
        let deg: usize = terms[0].0.iter().map(|&e| e as usize).sum();
        for (exp, _) in &terms {
            let d: usize = exp.iter().map(|&e| e as usize).sum();
            if d != deg {
                return Err(RingError::NotHomogeneous(deg, d));
            }
        }
        Ok(Self { terms })
    }

    /// Convenience constructor from (exponents, real coefficient) pairs.
    pub fn from_real(terms: &[(&[u16], f64)]) -> Result<Self, RingError> {
        Self::new(
            terms
                .iter()
                .map(|&(e, c)| (e.to_vec(), Complex64::new(c, 0.0)))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.terms[0].0.iter().map(|&e| e as usize).sum()
    }

    pub fn num_vars(&self) -> usize {
        self.terms[0].0.len()
    }

    /// Dense coefficient vector over the monomial basis of its degree.
    pub fn to_dense(&self, basis: &MonomialBasis) -> Result<CVec, RingError> {
        let mut v = CVec::zeros(basis.len());
        for (exp, coeff) in &self.terms {
            let idx = basis
                .index_of(exp)
                .ok_or_else(|| RingError::Dimension(format!("monomial {exp:?} out of basis")))?;
            v[idx] += *coeff;
        }
        Ok(v)
    }

    /// Multiply by a single monomial.
    pub fn shift_by(&self, mono: &[u16]) -> SparsePoly {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(exp, coeff)| {
                    let shifted: Vec<u16> =
                        exp.iter().zip(mono).map(|(&a, &b)| a + b).collect();
                    (shifted, *coeff)
                })
                .collect(),
        }
    }

    /// Product of two homogeneous polynomials.
    pub fn multiply(&self, other: &SparsePoly) -> SparsePoly {
        let mut acc: HashMap<Vec<u16>, Complex64> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u16> = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                *acc.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        let mut terms: Vec<(Vec<u16>, Complex64)> =
            acc.into_iter().filter(|(_, c)| c.norm() > 0.0).collect();
        // Deterministic term order.
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        SparsePoly { terms }
    }

    /// Rebuild from a dense coefficient vector, dropping zeros below `tol`.
    pub fn from_dense(v: &CVec, basis: &MonomialBasis, tol: f64) -> Option<SparsePoly> {
        let mut terms = Vec::new();
        for (i, exp) in basis.exponents().iter().enumerate() {
            if v[i].norm() > tol {
                terms.push((exp.clone(), v[i]));
            }
        }
        if terms.is_empty() {
            None
        } else {
            Some(SparsePoly { terms })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_poly() -> SparsePoly {
        // x*z - y^2 in three variables
        SparsePoly::from_real(&[(&[1, 0, 1], 1.0), (&[0, 2, 0], -1.0)]).unwrap()
    }

    #[test]
    fn basis_count_and_lookup() {
        let b = MonomialBasis::new(3, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.index_of(&[2, 0, 0]), Some(0));
        assert_eq!(b.index_of(&[0, 0, 2]), Some(5));
    }

    #[test]
    fn dense_round_trip() {
        let b = MonomialBasis::new(3, 2);
        let p = xy_poly();
        let v = p.to_dense(&b).unwrap();
        let q = SparsePoly::from_dense(&v, &b, 1e-15).unwrap();
        assert_eq!(p.degree(), q.degree());
        assert_eq!(q.terms.len(), 2);
    }

    #[test]
    fn multiplication_is_commutative_and_graded() {
        let p = xy_poly();
        let q = SparsePoly::from_real(&[(&[1, 0, 0], 2.0), (&[0, 1, 0], 1.0)]).unwrap();
        let pq = p.multiply(&q);
        let qp = q.multiply(&p);
        assert_eq!(pq, qp);
        assert_eq!(pq.degree(), 3);
    }

    #[test]
    fn inhomogeneous_input_is_rejected() {
        let r = SparsePoly::from_real(&[(&[1, 0, 0], 1.0), (&[2, 0, 0], 1.0)]);
        assert!(matches!(r, Err(RingError::NotHomogeneous(1, 2))));
    }
}
