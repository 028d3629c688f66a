//! Standardized, unit-resampled view of an operator path.
//!
//! The analysis works in coordinates where the reference form is the
//! standard one: `Ã = T A T⁻¹` for the Cholesky transform `T` of the
//! reference Gram. Continuous paths are resampled to unit time spacing
//! first; sample times that already sit on the integers are selected
//! directly, anything else is interpolated geodesically through the
//! principal logarithm of the bracketing transition.

use super::AsymError;
use crate::linalg::OperatorPath;
use crate::util::matfun::{expm, logm_near_identity};
use crate::CMat;
use num_complex::Complex64;

/// An operator path in standard coordinates, sampled at t = 0, 1, 2, ...
#[derive(Debug, Clone)]
pub struct StandardizedPath {
    ops: Vec<CMat>,
    transform: CMat,
    transform_inv: CMat,
}

impl StandardizedPath {
    pub fn from_path(path: &OperatorPath) -> Result<Self, AsymError> {
        let t = path.reference_form().standardizing_transform();
        let t_inv = path.reference_form().standardizing_transform_inv();
        let raw = resample_unit(path)?;
        let ops: Vec<CMat> = raw.iter().map(|a| &t * a * &t_inv).collect();
        Ok(Self {
            ops,
            transform: t,
            transform_inv: t_inv,
        })
    }

    /// Number of unit steps (samples minus one).
    pub fn steps(&self) -> usize {
        self.ops.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.ops[0].nrows()
    }

    /// Operator at integer time `i` in standard coordinates.
    pub fn op(&self, i: usize) -> &CMat {
        &self.ops[i]
    }

    /// Transition `B_i = A_i A_{i-1}^{-1}` in standard coordinates.
    pub fn transition(&self, i: usize) -> CMat {
        let prev_inv = self.ops[i - 1]
            .clone()
            .try_inverse()
            .expect("path operators are invertible");
        &self.ops[i] * prev_inv
    }

    /// Map a vector of the original coordinates into standard coordinates.
    pub fn to_standard(&self) -> &CMat {
        &self.transform
    }

    /// Map standard coordinates back to the original basis.
    pub fn from_standard(&self) -> &CMat {
        &self.transform_inv
    }
}

/// Select or interpolate samples at integer times 0..=floor(t_max).
fn resample_unit(path: &OperatorPath) -> Result<Vec<CMat>, AsymError> {
    let times = path.times();
    let t0 = times[0];
    let t_max = *times.last().unwrap() - t0;
    let n_unit = t_max.floor() as usize;
    let tol = 1e-9;

    let mut out = Vec::with_capacity(n_unit + 1);
    for k in 0..=n_unit {
        let target = t0 + k as f64;
        // Nearest sample; exact hit preferred.
        let idx = match times.binary_search_by(|t| t.partial_cmp(&target).unwrap()) {
            Ok(i) => i,
            Err(i) => {
                let before = i.checked_sub(1);
                let after = if i < times.len() { Some(i) } else { None };
                match (before, after) {
                    (Some(b), Some(a)) => {
                        if (times[a] - target).abs() < (target - times[b]).abs() {
                            a
                        } else {
                            b
                        }
                    }
                    (Some(b), None) => b,
                    (None, Some(a)) => a,
                    (None, None) => unreachable!(),
                }
            }
        };
        if (times[idx] - target).abs() <= tol {
            out.push(path.operators()[idx].clone());
            continue;
        }
        // Geodesic interpolation within the bracketing interval.
        let hi = times
            .iter()
            .position(|&t| t > target)
            .ok_or_else(|| AsymError::Resample(format!("no sample beyond t = {target}")))?;
        let lo = hi - 1;
        let u = (target - times[lo]) / (times[hi] - times[lo]);
        let a_lo = &path.operators()[lo];
        let a_hi = &path.operators()[hi];
        let b = a_hi
            * a_lo
                .clone()
                .try_inverse()
                .ok_or_else(|| AsymError::Resample("singular sample".into()))?;
        let log_b = logm_near_identity(&b).ok_or_else(|| {
            AsymError::Resample(format!(
                "transition at t = {target} too far from a principal logarithm; sample finer"
            ))
        })?;
        out.push(expm(&(log_b * Complex64::new(u, 0.0))) * a_lo);
    }
    if out.len() < 2 {
        return Err(AsymError::Resample(
            "path spans less than one unit of time".into(),
        ));
    }
    Ok(out)
}
