//! Weight decompositions of induced representations under a Hermitian
//! generator.

use super::{induce, monomials_desc_grlex, subsets_lex, RepDescriptor, RepsError};
use crate::linalg::HermitianGenerator;
use crate::CMat;

/// Eigen-decomposition of the induced action of a generator: distinct
/// weights in decreasing order with orthonormal weight-space bases.
#[derive(Debug, Clone)]
pub struct WeightDecomposition {
    weights: Vec<f64>,
    multiplicities: Vec<usize>,
    bases: Vec<CMat>,
}

impl WeightDecomposition {
    /// Distinct weights, strictly decreasing.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Orthonormal basis of the weight space at index `j`.
    pub fn basis(&self, j: usize) -> &CMat {
        &self.bases[j]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Smallest gap between consecutive distinct weights.
    pub fn min_gap(&self) -> Option<f64> {
        self.weights
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(None, |acc: Option<f64>, g| {
                Some(acc.map_or(g, |a| a.min(g)))
            })
    }

    /// Nearest weight to `x` with the runner-up distance.
    pub fn snap_candidates(&self, x: f64) -> (f64, f64, Option<f64>) {
        let mut best = (f64::INFINITY, 0.0);
        let mut second = f64::INFINITY;
        for &w in &self.weights {
            let d = (x - w).abs();
            if d < best.0 {
                second = best.0;
                best = (d, w);
            } else if d < second {
                second = d;
            }
        }
        (
            best.1,
            best.0,
            if second.is_finite() { Some(second) } else { None },
        )
    }
}

/// Per-basis-column weights of the induced representation when the base
/// columns carry weights `col_weights`.
pub(crate) fn induced_column_weights(desc: &RepDescriptor, col_weights: &[f64]) -> Vec<f64> {
    let m = col_weights.len();
    match desc {
        RepDescriptor::Standard => col_weights.to_vec(),
        RepDescriptor::Dual => col_weights.iter().map(|&l| -l).collect(),
        RepDescriptor::Sym(k) => monomials_desc_grlex(m, *k)
            .iter()
            .map(|mono| {
                mono.iter()
                    .enumerate()
                    .map(|(j, &e)| e as f64 * col_weights[j])
                    .sum()
            })
            .collect(),
        RepDescriptor::Ext(p) => subsets_lex(m, *p)
            .iter()
            .map(|s| s.iter().map(|&j| col_weights[j]).sum())
            .collect(),
        RepDescriptor::Tensor(parts) => {
            let mut acc = vec![0.0f64];
            for part in parts {
                let ws = induced_column_weights(part, col_weights);
                let mut next = Vec::with_capacity(acc.len() * ws.len());
                for &a in &acc {
                    for &w in &ws {
                        next.push(a + w);
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

/// Weight decomposition of the induced action of `lambda` on `desc`.
///
/// Weights of `sym(k)` are k-fold sums with repetition of the spectrum,
/// `ext(p)` sums without repetition, `dual` negates; weight spaces are
/// spanned by the corresponding columns of the induced eigenbasis and are
/// orthonormal.
pub fn induced_weights(
    lambda: &HermitianGenerator,
    desc: &RepDescriptor,
    cap: usize,
) -> Result<WeightDecomposition, RepsError> {
    let col_weights = lambda.column_eigenvalues();
    let all_weights = induced_column_weights(desc, &col_weights);
    let basis_v = induce(desc, lambda.eigenbasis(), cap)?;

    // Group columns by weight; levels of the base generator are exact after
    // snapping, so a tiny tolerance suffices.
    let scale = all_weights.iter().fold(1.0f64, |a, &w| a.max(w.abs()));
    let tol = 1e-9 * scale;
    let mut order: Vec<usize> = (0..all_weights.len()).collect();
    order.sort_by(|&a, &b| {
        all_weights[b]
            .partial_cmp(&all_weights[a])
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut weights = Vec::new();
    let mut multiplicities = Vec::new();
    let mut bases = Vec::new();
    let dim_v = all_weights.len();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && (all_weights[order[i]] - all_weights[order[j]]).abs() <= tol {
            j += 1;
        }
        let group = &order[i..j];
        let mean = group.iter().map(|&c| all_weights[c]).sum::<f64>() / group.len() as f64;
        let mut block = CMat::zeros(dim_v, group.len());
        for (out, &c) in group.iter().enumerate() {
            block.set_column(out, &basis_v.column(c));
        }
        weights.push(mean);
        multiplicities.push(group.len());
        bases.push(block);
        i = j;
    }

    Ok(WeightDecomposition {
        weights,
        multiplicities,
        bases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_decompose;
    use num_complex::Complex64;

    fn diag_gen(entries: &[f64]) -> HermitianGenerator {
        let m = CMat::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        spectral_decompose(&m, Some(1e-9)).unwrap()
    }

    #[test]
    fn ext2_weights_are_pair_sums() {
        let lam = diag_gen(&[2.0, 1.0, 0.0]);
        let wd = induced_weights(&lam, &RepDescriptor::Ext(2), 10_000).unwrap();
        assert_eq!(wd.weights(), &[3.0, 2.0, 1.0]);
        assert_eq!(wd.multiplicities(), &[1, 1, 1]);
    }

    #[test]
    fn dual_weights_negate() {
        let lam = diag_gen(&[2.0, 1.0]);
        let wd = induced_weights(&lam, &RepDescriptor::Dual, 10_000).unwrap();
        assert_eq!(wd.weights(), &[-1.0, -2.0]);
    }

    #[test]
    fn sym3_weights_match_generating_function_oracle() {
        // Coefficient extraction from Π_j (1 + q^{λ_j} x + q^{2λ_j} x² + ...)
        // truncated at x³: exponents of q appearing at x³, with counts.
        let lam = diag_gen(&[1.0, 1.0, 0.0]);
        let wd = induced_weights(&lam, &RepDescriptor::Sym(3), 10_000).unwrap();
        // Monomial enumeration oracle.
        let mut counts = std::collections::BTreeMap::<i64, usize>::new();
        for mono in monomials_desc_grlex(3, 3) {
            let w = mono[0] as i64 + mono[1] as i64; // weights (1,1,0)
            *counts.entry(-w).or_insert(0) += 1; // negate for descending iteration
        }
        let oracle: Vec<(f64, usize)> = counts
            .into_iter()
            .map(|(negw, c)| (-negw as f64, c))
            .collect();
        assert_eq!(wd.weights().len(), oracle.len());
        for (j, &(w, c)) in oracle.iter().enumerate() {
            assert!((wd.weights()[j] - w).abs() < 1e-12);
            assert_eq!(wd.multiplicities()[j], c);
        }
        // Generating-function cross-check of the total count.
        assert_eq!(wd.total_dim(), 10);
    }

    #[test]
    fn log_eigenvalues_of_induced_exponential_match() {
        // spectral_decompose(induce(desc, e^Λ)) log-eigenvalues equal
        // induced_weights(Λ, desc).
        let mut rng = crate::util::Rng::seed_from_u64(60);
        let h = rng.hermitian_unit(3);
        let lam = spectral_decompose(&h, None).unwrap();
        for desc in [RepDescriptor::Ext(2), RepDescriptor::Sym(2), RepDescriptor::Dual] {
            let e = lam.exp_t(1.0);
            let induced = induce(&desc, &e, 10_000).unwrap();
            let gen = spectral_decompose(&induced, Some(1e-10)).unwrap();
            let mut logs: Vec<f64> = gen
                .spectrum()
                .iter()
                .zip(gen.multiplicities())
                .flat_map(|(&l, &m)| std::iter::repeat(l.ln()).take(m))
                .collect();
            logs.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let wd = induced_weights(&lam, &desc, 10_000).unwrap();
            let mut expect: Vec<f64> = wd
                .weights()
                .iter()
                .zip(wd.multiplicities())
                .flat_map(|(&w, &m)| std::iter::repeat(w).take(m))
                .collect();
            expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (a, b) in logs.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-8, "{desc}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn weight_bases_are_orthonormal() {
        let mut rng = crate::util::Rng::seed_from_u64(61);
        let h = rng.hermitian_unit(4);
        let lam = spectral_decompose(&h, None).unwrap();
        let wd = induced_weights(&lam, &RepDescriptor::Ext(2), 10_000).unwrap();
        for j in 0..wd.len() {
            let b = wd.basis(j);
            let g = b.adjoint() * b;
            assert!((g - CMat::identity(b.ncols(), b.ncols())).norm() < 1e-10);
        }
    }
}
