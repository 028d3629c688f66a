//! Degree-truncated presentation of a graded ring `Sym(R₁)/I`.

use super::poly::{MonomialBasis, SparsePoly};
use super::RingError;
use crate::{CMat, CVec};
use num_complex::Complex64;

/// The ring `ℂ[x₁..x_m]/I` truncated at degree K: per-degree monomial
/// bases, echelonized bases of `I_k`, and the canonical complement
/// monomials whose classes form the working basis of `R_k`.
#[derive(Debug, Clone)]
pub struct GradedRingPresentation {
    num_vars: usize,
    trunc: usize,
    generators: Vec<SparsePoly>,
    bases: Vec<MonomialBasis>,
    /// Reduced row echelon basis of I_k (each with unit pivot coordinate
    /// and zeros at the other pivots), per degree.
    ideal_rref: Vec<Vec<CVec>>,
    /// Pivot monomial index of each RREF element, per degree.
    pivots: Vec<Vec<usize>>,
    /// Complement monomial indices (basis of R_k), per degree.
    complements: Vec<Vec<usize>>,
    hilbert: Option<Vec<usize>>,
}

impl GradedRingPresentation {
    pub fn new(
        num_vars: usize,
        generators: Vec<SparsePoly>,
        trunc: usize,
        hilbert: Option<Vec<usize>>,
    ) -> Result<Self, RingError> {
        for g in &generators {
            if g.num_vars() != num_vars {
                return Err(RingError::Dimension(format!(
                    "generator in {} variables, ring has {}",
                    g.num_vars(),
                    num_vars
                )));
            }
            if g.degree() == 0 {
                return Err(RingError::Dimension("degree-0 generator".into()));
            }
        }
        let bases: Vec<MonomialBasis> = (0..=trunc)
            .map(|k| MonomialBasis::new(num_vars, k))
            .collect();

        let mut ideal_rref = Vec::with_capacity(trunc + 1);
        let mut pivots = Vec::with_capacity(trunc + 1);
        let mut complements = Vec::with_capacity(trunc + 1);
        for k in 0..=trunc {
            let basis = &bases[k];
            // Span of (monomial)·(generator) products in degree k.
            let mut products: Vec<CVec> = Vec::new();
            for g in &generators {
                let d = g.degree();
                if d > k {
                    continue;
                }
                for mono in bases[k - d].exponents() {
                    products.push(g.shift_by(mono).to_dense(basis)?);
                }
            }
            let (rref, pivs) = rref_echelon(products, basis.len());
            let pivot_set: std::collections::BTreeSet<usize> = pivs.iter().copied().collect();
            let comp: Vec<usize> = (0..basis.len())
                .filter(|i| !pivot_set.contains(i))
                .collect();
            if let Some(h) = &hilbert {
                if k < h.len() && h[k] != comp.len() {
                    return Err(RingError::HilbertMismatch {
                        k,
                        declared: h[k],
                        computed: comp.len(),
                    });
                }
            }
            ideal_rref.push(rref);
            pivots.push(pivs);
            complements.push(comp);
        }

        Ok(Self {
            num_vars,
            trunc,
            generators,
            bases,
            ideal_rref,
            pivots,
            complements,
            hilbert,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    pub fn generators(&self) -> &[SparsePoly] {
        &self.generators
    }

    pub fn hilbert(&self) -> Option<&[usize]> {
        self.hilbert.as_deref()
    }

    pub fn check_degree(&self, k: usize) -> Result<(), RingError> {
        if k > self.trunc {
            Err(RingError::DegreeOverflow {
                k,
                trunc: self.trunc,
            })
        } else {
            Ok(())
        }
    }

    pub fn basis(&self, k: usize) -> &MonomialBasis {
        &self.bases[k]
    }

    pub fn ideal_dim(&self, k: usize) -> usize {
        self.ideal_rref[k].len()
    }

    /// Dimension of `R_k` at the truncation.
    pub fn rk_dim(&self, k: usize) -> usize {
        self.complements[k].len()
    }

    /// Orthonormalized column basis of `I_k`.
    pub fn ideal_basis_matrix(&self, k: usize) -> CMat {
        let n = self.bases[k].len();
        let cols = &self.ideal_rref[k];
        if cols.is_empty() {
            return CMat::zeros(n, 0);
        }
        let mut m = CMat::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        crate::linalg::subspace::orthonormalize(&m)
    }

    /// Raw RREF elements of `I_k`.
    pub fn ideal_rref_elements(&self, k: usize) -> &[CVec] {
        &self.ideal_rref[k]
    }

    /// Complement monomial indices whose classes form the `R_k` basis.
    pub fn complement(&self, k: usize) -> &[usize] {
        &self.complements[k]
    }

    /// Reduce a degree-k coefficient vector modulo `I_k` to its complement
    /// coordinates (the class in the `R_k` basis).
    pub fn reduce_to_class(&self, k: usize, v: &CVec) -> CVec {
        let mut work = v.clone();
        for (elem, &piv) in self.ideal_rref[k].iter().zip(&self.pivots[k]) {
            let c = work[piv];
            if c.norm() > 0.0 {
                work -= elem * c;
                work[piv] = Complex64::new(0.0, 0.0);
            }
        }
        let comp = &self.complements[k];
        CVec::from_fn(comp.len(), |i, _| work[comp[i]])
    }

    /// Canonical representative in `Sym^k` of a class given in complement
    /// coordinates.
    pub fn class_representative(&self, k: usize, class: &CVec) -> CVec {
        let n = self.bases[k].len();
        let mut v = CVec::zeros(n);
        for (i, &mono) in self.complements[k].iter().enumerate() {
            v[mono] = class[i];
        }
        v
    }

    /// Product of two classes, reduced into the complement basis of the sum
    /// degree.
    pub fn multiply_classes(
        &self,
        k1: usize,
        class1: &CVec,
        k2: usize,
        class2: &CVec,
    ) -> Result<CVec, RingError> {
        let k = k1 + k2;
        self.check_degree(k)?;
        let p1 = SparsePoly::from_dense(&self.class_representative(k1, class1), &self.bases[k1], 0.0);
        let p2 = SparsePoly::from_dense(&self.class_representative(k2, class2), &self.bases[k2], 0.0);
        let (p1, p2) = match (p1, p2) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(CVec::zeros(self.rk_dim(k))),
        };
        let prod = p1.multiply(&p2).to_dense(&self.bases[k])?;
        Ok(self.reduce_to_class(k, &prod))
    }
}

/// Reduced row echelon form of a list of coefficient vectors, pivoting on
/// the first (descending graded-lex) monomial with a numerically robust
/// partial pivot. Returns the reduced basis and pivot indices.
fn rref_echelon(mut rows: Vec<CVec>, width: usize) -> (Vec<CVec>, Vec<usize>) {
    let mut out: Vec<CVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..width {
        // Reduce candidates by existing echelon.
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in rows.iter().enumerate() {
            let mag = r[col].norm();
            if mag > best.map_or(0.0, |(_, m)| m) {
                best = Some((i, mag));
            }
        }
        let Some((idx, mag)) = best else { continue };
        // Scale-relative threshold against the whole row.
        let row_scale = rows[idx].norm();
        if mag <= 1e-10 * row_scale.max(1e-300) {
            continue;
        }
        let mut pivot_row = rows.swap_remove(idx);
        let lead = pivot_row[col];
        pivot_row /= lead;
        pivot_row[col] = Complex64::new(1.0, 0.0);
        // Eliminate this column from the remaining candidates.
        for r in rows.iter_mut() {
            let c = r[col];
            if c.norm() > 0.0 {
                *r -= &pivot_row * c;
                r[col] = Complex64::new(0.0, 0.0);
            }
        }
        // Back-substitute into the accepted rows.
        for (r, _) in out.iter_mut().zip(&pivots) {
            let c = r[col];
            if c.norm() > 0.0 {
                *r -= &pivot_row * c;
                r[col] = Complex64::new(0.0, 0.0);
            }
        }
        out.push(pivot_row);
        pivots.push(col);
        // Drop rows that became negligible.
        rows.retain(|r| r.norm() > 1e-12);
        if rows.is_empty() {
            break;
        }
    }
    // Sort by pivot for a canonical order.
    let mut paired: Vec<(usize, CVec)> = pivots.into_iter().zip(out).collect();
    paired.sort_by_key(|(p, _)| *p);
    let pivots: Vec<usize> = paired.iter().map(|(p, _)| *p).collect();
    let out: Vec<CVec> = paired.into_iter().map(|(_, r)| r).collect();
    (out, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn conic() -> GradedRingPresentation {
        let g = SparsePoly::from_real(&[(&[1, 0, 1], 1.0), (&[0, 2, 0], -1.0)]).unwrap();
        GradedRingPresentation::new(3, vec![g], 6, None).unwrap()
    }

    #[test]
    fn conic_dimensions_are_2k_plus_1() {
        let ring = conic();
        for k in 0..=6 {
            assert_eq!(ring.rk_dim(k), 2 * k + 1, "degree {k}");
        }
    }

    #[test]
    fn declared_hilbert_is_checked() {
        let g = SparsePoly::from_real(&[(&[1, 0, 1], 1.0), (&[0, 2, 0], -1.0)]).unwrap();
        let bad = GradedRingPresentation::new(3, vec![g], 4, Some(vec![1, 3, 5, 8, 9]));
        assert!(matches!(bad, Err(RingError::HilbertMismatch { k: 3, .. })));
    }

    #[test]
    fn twisted_cubic_dimensions_are_3k_plus_1() {
        let g1 = SparsePoly::from_real(&[(&[1, 0, 1, 0], 1.0), (&[0, 2, 0, 0], -1.0)]).unwrap();
        let g2 = SparsePoly::from_real(&[(&[0, 1, 0, 1], 1.0), (&[0, 0, 2, 0], -1.0)]).unwrap();
        let g3 = SparsePoly::from_real(&[(&[1, 0, 0, 1], 1.0), (&[0, 1, 1, 0], -1.0)]).unwrap();
        let ring = GradedRingPresentation::new(4, vec![g1, g2, g3], 4, None).unwrap();
        for k in 0..=4 {
            assert_eq!(ring.rk_dim(k), 3 * k + 1, "degree {k}");
        }
    }

    #[test]
    fn reduction_kills_ideal_elements_exactly() {
        let ring = conic();
        // xz - y² itself must reduce to the zero class.
        let g = SparsePoly::from_real(&[(&[1, 0, 1], 1.0), (&[0, 2, 0], -1.0)]).unwrap();
        let v = g.to_dense(ring.basis(2)).unwrap();
        let class = ring.reduce_to_class(2, &v);
        assert!(class.norm() < 1e-14);
    }

    #[test]
    fn class_multiplication_respects_relations() {
        let ring = conic();
        // [x][z] = [y²] in R_2.
        let x = ring.reduce_to_class(1, &SparsePoly::from_real(&[(&[1, 0, 0], 1.0)]).unwrap().to_dense(ring.basis(1)).unwrap());
        let z = ring.reduce_to_class(1, &SparsePoly::from_real(&[(&[0, 0, 1], 1.0)]).unwrap().to_dense(ring.basis(1)).unwrap());
        let y2 = ring.reduce_to_class(2, &SparsePoly::from_real(&[(&[0, 2, 0], 1.0)]).unwrap().to_dense(ring.basis(2)).unwrap());
        let xz = ring.multiply_classes(1, &x, 1, &z).unwrap();
        assert!((xz - y2).norm() < 1e-12);
    }
}
