//! L² Gram matrices of monomial sections over an S¹-symmetric metric.
//!
//! Sections of `O(2r) = K^{-r}` are the monomials `z^j`, `j = 0..2r`, with
//! S¹-weights `j - r`. In the background coordinate the diagonal entries
//! are
//!
//! `H_j = 2π e^{-r c_h} ∫ (1+x₀)^j (1-x₀)^{2r-j} e^{-r φ} V dx₀`
//!
//! with `c_h = ln(∫ e^{-φ} dx₀ / 2)` the volume normalization of the
//! anticanonical metric. The integrand is smooth up to the boundary, so
//! Gauss-Legendre with node-doubling convergence control applies.

use super::p1::{metric_fields, SymmetricMetricP1};
use super::FlowError;
use crate::linalg::HermitianForm;
use crate::util::quad::{gauss_legendre, gregory4, interp12};
use crate::util::pairwise_sum;

/// Diagonal Gram matrix of the monomial sections of `O(2r)` under the
/// metric, normalized by the volume condition. `r` up to 8 covers the
/// pipeline's quotient degrees; the CLI restricts user input to r ≤ 4.
pub fn gram_from_metric(
    metric: &SymmetricMetricP1,
    r: usize,
) -> Result<HermitianForm, FlowError> {
    if r == 0 || r > 8 {
        return Err(FlowError::ConfigInvalid(
            "section power r must lie in 1..=8".into(),
        ));
    }
    let (phi, v, h) = metric_fields(metric);
    let min_v = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_v <= 0.0 {
        return Err(FlowError::DegenerateMetric { min_v });
    }
    let c_h = {
        let vals: Vec<f64> = phi.iter().map(|&p| (-p).exp()).collect();
        (gregory4(&vals, h) / 2.0).ln()
    };

    let entries_at = |nodes: usize| -> Vec<f64> {
        let (xs, ws) = gauss_legendre(nodes);
        let phi_at: Vec<f64> = xs.iter().map(|&x| interp12(-1.0, h, &phi, x)).collect();
        let v_at: Vec<f64> = xs.iter().map(|&x| interp12(-1.0, h, &v, x)).collect();
        (0..=2 * r)
            .map(|j| {
                let terms: Vec<f64> = xs
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| {
                        let base = (1.0 + x).powi(j as i32) * (1.0 - x).powi((2 * r - j) as i32);
                        ws[i] * base * (-(r as f64) * phi_at[i]).exp() * v_at[i]
                    })
                    .collect();
                2.0 * std::f64::consts::PI * (-(r as f64) * c_h).exp() * pairwise_sum(&terms)
            })
            .collect()
    };

    let coarse = entries_at(256);
    let fine = entries_at(512);
    let mut worst = 0.0f64;
    for (a, b) in coarse.iter().zip(&fine) {
        worst = worst.max((a - b).abs() / b.abs().max(1e-300));
    }
    if worst > 1e-10 {
        return Err(FlowError::QuadratureNotConverged { diff: worst });
    }
    HermitianForm::from_diagonal(&fine).map_err(FlowError::from)
}
