//! Torus weight tables: per-degree lists of weight vectors of an
//! equivariant basis of the section spaces.

use super::polytope::PolytopeData;
use super::FutakiError;

/// Weight vectors of an equivariant basis per degree `k = 1..=kmax`.
#[derive(Debug, Clone)]
pub struct TorusWeightTable {
    rank: usize,
    complex_dim: usize,
    degrees: Vec<Vec<Vec<f64>>>,
}

impl TorusWeightTable {
    /// Validated constructor: counts must fit a degree-n polynomial in k
    /// (checked by exact finite differences on the tail when enough
    /// degrees are present).
    pub fn new(
        rank: usize,
        complex_dim: usize,
        degrees: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self, FutakiError> {
        if rank == 0 || degrees.is_empty() {
            return Err(FutakiError::Invalid(
                "table needs positive rank and at least one degree".into(),
            ));
        }
        for (k0, ws) in degrees.iter().enumerate() {
            if ws.is_empty() {
                return Err(FutakiError::Invalid(format!(
                    "degree {} has no weights",
                    k0 + 1
                )));
            }
            for w in ws {
                if w.len() != rank {
                    return Err(FutakiError::Invalid(format!(
                        "weight vector of length {} at degree {}, expected rank {rank}",
                        w.len(),
                        k0 + 1
                    )));
                }
                if w.iter().any(|x| !x.is_finite()) {
                    return Err(FutakiError::Invalid("non-finite weight".into()));
                }
            }
        }
        let table = Self {
            rank,
            complex_dim,
            degrees,
        };
        table.check_hilbert_fit()?;
        Ok(table)
    }

    /// `N(k)` must agree with a degree-n polynomial for large k: the
    /// (n+1)-th finite differences of the counts vanish on the available
    /// tail (relative tolerance 1e-6).
    fn check_hilbert_fit(&self) -> Result<(), FutakiError> {
        let n = self.complex_dim;
        let counts: Vec<f64> = self.degrees.iter().map(|d| d.len() as f64).collect();
        if counts.len() < n + 2 {
            return Ok(());
        }
        let mut diffs = counts.clone();
        for _ in 0..=n {
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let scale = counts.last().copied().unwrap_or(1.0).max(1.0);
        for &d in &diffs {
            if d.abs() > 1e-6 * scale {
                return Err(FutakiError::HilbertFitFailed {
                    n,
                    residual: d.abs() / scale,
                });
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_dim
    }

    pub fn kmax(&self) -> usize {
        self.degrees.len()
    }

    pub fn count(&self, k: usize) -> usize {
        self.degrees[k - 1].len()
    }

    /// Weight vectors at degree `k` (1-based).
    pub fn weights(&self, k: usize) -> Result<&[Vec<f64>], FutakiError> {
        if k == 0 || k > self.degrees.len() {
            return Err(FutakiError::DegreeOverflow {
                k,
                kmax: self.degrees.len(),
            });
        }
        Ok(&self.degrees[k - 1])
    }
}

/// Weight table of a toric polarization: weights at degree k are the
/// lattice points of `k·P`.
pub fn weights_from_polytope(p: &PolytopeData) -> Result<TorusWeightTable, FutakiError> {
    let mut degrees = Vec::with_capacity(p.kmax());
    for k in 1..=p.kmax() {
        let pts = p.lattice_points(k);
        degrees.push(
            pts.into_iter()
                .map(|pt| pt.into_iter().map(|c| c as f64).collect())
                .collect(),
        );
    }
    TorusWeightTable::new(p.dim(), p.dim(), degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn interval_table_counts() {
        let p = PolytopeData::new(1, vec![vec![q(-1)], vec![q(1)]], 6).unwrap();
        let t = weights_from_polytope(&p).unwrap();
        for k in 1..=6 {
            assert_eq!(t.count(k), 2 * k + 1);
        }
        assert_eq!(t.weights(1).unwrap(), &[vec![-1.0], vec![0.0], vec![1.0]]);
    }

    #[test]
    fn inconsistent_counts_fail_the_fit() {
        // Claims complex dimension 1 but counts grow quadratically.
        let degrees: Vec<Vec<Vec<f64>>> = (1..=6usize)
            .map(|k| (0..(k * k + 1)).map(|i| vec![i as f64]).collect())
            .collect();
        assert!(matches!(
            TorusWeightTable::new(1, 1, degrees),
            Err(FutakiError::HilbertFitFailed { .. })
        ));
    }

    #[test]
    fn degree_overflow_is_typed() {
        let p = PolytopeData::new(1, vec![vec![q(-1)], vec![q(1)]], 3).unwrap();
        let t = weights_from_polytope(&p).unwrap();
        assert!(matches!(
            t.weights(4),
            Err(FutakiError::DegreeOverflow { k: 4, kmax: 3 })
        ));
    }
}
