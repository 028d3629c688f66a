//! The weight function d(v): asymptotic growth exponent of `‖A_i·v‖` in an
//! induced representation, with snapping to the induced spectrum.

use super::gauge::GaugeEstimate;
use super::path::StandardizedPath;
use super::AsymError;
use crate::config::Tolerances;
use crate::reps::{induce, induced_weights, plucker, RepDescriptor, WeightDecomposition};
use crate::{CMat, CVec};
use num_complex::Complex64;

/// Raw and snapped weight of a vector, with the induced spectrum used for
/// snapping.
#[derive(Debug, Clone)]
pub struct WeightEstimate {
    pub raw: f64,
    pub snapped: f64,
    pub snap_tol: f64,
    /// Windowed-slope cross-estimate.
    pub slope: f64,
    pub spectrum: Vec<f64>,
}

/// Log-norm increments `f_i(v) - f_{i-1}(v)` for `f_i = log ‖ρ(A_i) v‖`,
/// computed incrementally with renormalization so 2000-step paths cannot
/// overflow.
fn log_increments(
    path: &StandardizedPath,
    v: &CVec,
    desc: &RepDescriptor,
    cap: usize,
) -> Result<Vec<f64>, AsymError> {
    let norm0 = v.norm();
    if norm0 == 0.0 {
        return Err(AsymError::ZeroVector);
    }
    let mut w = v / Complex64::new(norm0, 0.0);
    let mut increments = Vec::with_capacity(path.steps());
    let standard = matches!(desc, RepDescriptor::Standard);
    for i in 1..=path.steps() {
        let b = path.transition(i);
        let next = if standard {
            &b * &w
        } else {
            induce(desc, &b, cap)? * &w
        };
        let n = next.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(AsymError::ZeroVector);
        }
        increments.push(n.ln());
        w = next / Complex64::new(n, 0.0);
    }
    Ok(increments)
}

/// Weight of `v` in the representation `desc`.
///
/// The raw estimate is the mean increment over the last quarter of the
/// tail; it is cross-checked against the windowed slope over the whole
/// tail (the `i^{-1} f_i` estimator applied to the tail-based path) and
/// snapped to the nearest element of the induced spectrum under the margin
/// rule: accept only if the nearest element is within `snap_tol` and the
/// runner-up is more than `2·snap_tol` away.
pub fn weight(
    path: &StandardizedPath,
    gauge: &GaugeEstimate,
    v: &CVec,
    desc: &RepDescriptor,
    tol: &Tolerances,
) -> Result<WeightEstimate, AsymError> {
    let decomp = induced_weights(&gauge.lambda, desc, tol.dim_cap)?;
    weight_with_spectrum(path, gauge, v, desc, &decomp, tol)
}

pub(crate) fn weight_with_spectrum(
    path: &StandardizedPath,
    gauge: &GaugeEstimate,
    v: &CVec,
    desc: &RepDescriptor,
    decomp: &WeightDecomposition,
    tol: &Tolerances,
) -> Result<WeightEstimate, AsymError> {
    let increments = log_increments(path, v, desc, tol.dim_cap)?;
    let n = increments.len();
    let tail = &increments[gauge.tail_start - 1..n];
    let slope = tail.iter().sum::<f64>() / tail.len() as f64;
    let last_quarter = &tail[tail.len() - (tail.len() / 4).max(1)..];
    let raw = last_quarter.iter().sum::<f64>() / last_quarter.len() as f64;

    let snap_tol = tol.snap_tol(decomp.min_gap());
    if (raw - slope).abs() > snap_tol {
        return Err(AsymError::EstimatorDisagreement {
            raw,
            slope,
            tol: snap_tol,
        });
    }
    let (nearest, dist, second) = decomp.snap_candidates(raw);
    let margin_ok = dist < snap_tol && second.map_or(true, |s| s > 2.0 * snap_tol);
    if !margin_ok {
        return Err(AsymError::SpectrumAmbiguity {
            raw,
            nearest,
            dist,
            snap_tol,
        });
    }
    Ok(WeightEstimate {
        raw,
        snapped: nearest,
        snap_tol,
        slope,
        spectrum: decomp.weights().to_vec(),
    })
}

/// Weight of a subspace: the weight of its Plücker vector in `ext(p)`.
/// Independent of the spanning basis.
pub fn weight_grassmann(
    path: &StandardizedPath,
    gauge: &GaugeEstimate,
    span: &CMat,
    tol: &Tolerances,
) -> Result<WeightEstimate, AsymError> {
    let pv = plucker(span)?;
    weight(
        path,
        gauge,
        pv.coordinates(),
        &pv.descriptor(),
        tol,
    )
}
