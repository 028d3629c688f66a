//! Soliton vector solver: Newton iteration on the modified Futaki map with
//! exact derivatives and a convexity gate.

use super::invariants::{fit_window, twisted_sums, window_lead};
use super::table::TorusWeightTable;
use super::FutakiError;
use crate::util::pairwise_sum;
use nalgebra::{DMatrix, DVector};

/// Converged soliton vector with the Newton trace.
#[derive(Debug, Clone)]
pub struct SolitonResult {
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// Convex-proxy value per accepted step (must decrease).
    pub proxy_trace: Vec<f64>,
    /// Smallest Hessian eigenvalue seen.
    pub min_hessian_eig: f64,
}

/// The unique zero of `V ↦ (Fut_V(e_i))_i`, found by Newton from V = 0
/// with exact derivatives of the lattice sums. The Jacobian — the Hessian
/// of the convex-function proxy — must be positive-definite at every step.
pub fn soliton_vector(table: &TorusWeightTable) -> Result<SolitonResult, FutakiError> {
    let rank = table.rank();
    let n = table.complex_dim();
    let kmax = table.kmax();
    if kmax < n + 3 || fit_window(kmax, n + 1).is_none() {
        return Err(FutakiError::TableTooShallow { kmax, need: n + 4 });
    }

    let fut_at = |v: &[f64]| -> Result<DVector<f64>, FutakiError> {
        let mut g = DVector::zeros(rank);
        for i in 0..rank {
            let mut dir = vec![0.0; rank];
            dir[i] = 1.0;
            let per_k = twisted_sums(table, v, &dir)?;
            g[i] = window_lead(&per_k, kmax, n + 1);
        }
        Ok(g)
    };

    // Hessian: ∂/∂V_j of Fut_V(e_i) is the fitted leading coefficient of
    // Σ_w w_i (w_j/k) e^{⟨w,V⟩/k} — itself an exact lattice sum.
    let hessian_at = |v: &[f64]| -> Result<DMatrix<f64>, FutakiError> {
        let mut h = DMatrix::zeros(rank, rank);
        for i in 0..rank {
            for j in 0..rank {
                let mut per_k = Vec::with_capacity(kmax);
                for k in 1..=kmax {
                    let ws = table.weights(k)?;
                    let terms: Vec<f64> = ws
                        .iter()
                        .map(|w| {
                            let twist: f64 =
                                w.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / k as f64;
                            w[i] * (w[j] / k as f64) * twist.exp()
                        })
                        .collect();
                    per_k.push(pairwise_sum(&terms));
                }
                h[(i, j)] = window_lead(&per_k, kmax, n + 1);
            }
        }
        // Symmetrize rounding noise.
        Ok((&h + h.transpose()) * 0.5)
    };

    // Convex proxy F(V): fitted leading coefficient of Σ_w k·e^{⟨w,V⟩/k}.
    // Its per-degree data differentiates in V to exactly the twisted sums
    // of the Futaki map, and the fit is linear in the data, so the
    // gradient identity ∇F = (Fut_V(e_i))_i holds exactly at finite k and
    // the backtracking line search is consistent with Newton.
    let proxy_at = |v: &[f64]| -> Result<f64, FutakiError> {
        let mut per_k = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            let ws = table.weights(k)?;
            let terms: Vec<f64> = ws
                .iter()
                .map(|w| {
                    let twist: f64 =
                        w.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / k as f64;
                    k as f64 * twist.exp()
                })
                .collect();
            per_k.push(pairwise_sum(&terms));
        }
        Ok(window_lead(&per_k, kmax, n + 1))
    };

    let mut v = vec![0.0f64; rank];
    let mut proxy_trace = vec![proxy_at(&v)?];
    let mut min_eig = f64::INFINITY;
    for iter in 0..100 {
        let g = fut_at(&v)?;
        let residual = g.amax();
        if residual < 1e-8 {
            return Ok(SolitonResult {
                vector: v,
                residual,
                iterations: iter,
                proxy_trace,
                min_hessian_eig: min_eig,
            });
        }
        let h = hessian_at(&v)?;
        let eig = h
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        min_eig = min_eig.min(eig);
        if eig <= 0.0 {
            return Err(FutakiError::NonConvexHessian { eig });
        }
        let step = h
            .lu()
            .solve(&g)
            .ok_or(FutakiError::NonConvexHessian { eig })?;
        // Backtracking keeps the convex proxy decreasing.
        let mut scale = 1.0f64;
        let current_proxy = *proxy_trace.last().unwrap();
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = v
                .iter()
                .zip(step.iter())
                .map(|(x, d)| x - scale * d)
                .collect();
            let p = proxy_at(&trial)?;
            if p < current_proxy + 1e-14 * current_proxy.abs().max(1.0) {
                v = trial;
                proxy_trace.push(p);
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            let residual = fut_at(&v)?.amax();
            return Err(FutakiError::NoConvergence {
                iters: iter,
                residual,
            });
        }
    }
    let residual = fut_at(&v)?.amax();
    Err(FutakiError::NoConvergence {
        iters: 100,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::futaki::polytope::PolytopeData;
    use crate::futaki::table::weights_from_polytope;
    use crate::futaki::invariants::futaki_limit;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn bl1_p2_table(kmax: usize) -> TorusWeightTable {
        let p = PolytopeData::new(
            2,
            vec![
                vec![q(-1), q(0)],
                vec![q(0), q(-1)],
                vec![q(2), q(-1)],
                vec![q(-1), q(2)],
            ],
            kmax,
        )
        .unwrap();
        weights_from_polytope(&p).unwrap()
    }

    #[test]
    fn projective_space_soliton_vanishes() {
        let p = PolytopeData::new(
            2,
            vec![vec![q(-1), q(-1)], vec![q(2), q(-1)], vec![q(-1), q(2)]],
            20,
        )
        .unwrap();
        let t = weights_from_polytope(&p).unwrap();
        let r = soliton_vector(&t).unwrap();
        assert!(r.vector.iter().all(|&x| x.abs() < 1e-8));
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn blowup_soliton_is_on_the_symmetry_axis_and_idempotent() {
        let t = bl1_p2_table(24);
        let r = soliton_vector(&t).unwrap();
        assert!(r.residual < 1e-8);
        assert!(r.min_hessian_eig > 0.0);
        // Sits on the diagonal symmetry axis.
        assert!((r.vector[0] - r.vector[1]).abs() < 1e-7, "{:?}", r.vector);
        assert!(r.vector[0].abs() > 1e-3, "nontrivial: {:?}", r.vector);
        // Fixed point: one more Futaki evaluation stays below tolerance.
        for i in 0..2 {
            let mut dir = vec![0.0; 2];
            dir[i] = 1.0;
            let f = futaki_limit(&t, &r.vector, &dir).unwrap();
            assert!(f.value.abs() < 1e-7, "residual {}", f.value);
        }
        // Convex proxy decreased monotonically.
        for w in r.proxy_trace.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn soliton_is_stable_under_kmax_doubling() {
        let a = soliton_vector(&bl1_p2_table(24)).unwrap();
        let b = soliton_vector(&bl1_p2_table(48)).unwrap();
        for (x, y) in a.vector.iter().zip(&b.vector) {
            assert!((x - y).abs() < 1e-5, "{x} vs {y}");
        }
    }
}
