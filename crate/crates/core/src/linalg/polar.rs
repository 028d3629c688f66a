//! Polar decomposition with respect to an arbitrary reference form.

use super::{condition_number, HermitianForm, LinalgError};
use crate::CMat;
use num_complex::Complex64;

/// Split an invertible `B` as `B = U · P` with `U` unitary and `P`
/// Hermitian positive-definite, both with respect to `h0`.
///
/// The factors are computed in standardized coordinates by the scaled
/// Newton iteration for the unitary polar factor and transported back, so
/// the implementation is independent of an SVD route (which the test
/// oracle uses).
pub fn polar_positive_part(
    b: &CMat,
    h0: &HermitianForm,
) -> Result<(CMat, CMat), LinalgError> {
    let n = b.nrows();
    if n != b.ncols() || n != h0.dim() {
        return Err(LinalgError::DimensionMismatch(format!(
            "operator is {}x{}, form has dim {}",
            n,
            b.ncols(),
            h0.dim()
        )));
    }
    if b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let cond = condition_number(b);
    if !(cond < 1e12) {
        return Err(LinalgError::SingularInput { cond });
    }

    let t = h0.standardizing_transform();
    let t_inv = h0.standardizing_transform_inv();
    let b_std = &t * b * &t_inv;

    let u_std = newton_unitary_factor(&b_std)?;
    let mut p_std = u_std.adjoint() * &b_std;
    p_std = (&p_std + p_std.adjoint()) * Complex64::new(0.5, 0.0);

    let unitary = &t_inv * &u_std * &t;
    let positive = &t_inv * &p_std * &t;
    Ok((unitary, positive))
}

/// Unitary polar factor by the scaled Newton iteration
/// `U ← (γU + (γU)^{-*}) / 2`.
pub(crate) fn newton_unitary_factor(b: &CMat) -> Result<CMat, LinalgError> {
    let n = b.nrows();
    let mut u = b.clone();
    for _ in 0..100 {
        let u_inv = u.clone().try_inverse().ok_or(LinalgError::SingularInput {
            cond: f64::INFINITY,
        })?;
        // Frobenius-norm scaling accelerates early iterations.
        let gamma = (u_inv.norm() / u.norm()).sqrt();
        let next = (&u * Complex64::new(gamma, 0.0)
            + u_inv.adjoint() * Complex64::new(1.0 / gamma, 0.0))
            * Complex64::new(0.5, 0.0);
        let delta = (&next - &u).norm();
        u = next;
        if delta < 1e-14 * (n as f64).sqrt() {
            break;
        }
    }
    Ok(u)
}
