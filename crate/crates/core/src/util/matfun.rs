//! Matrix exponential and logarithm for small dense complex matrices.
//!
//! `exp` uses scaling-and-squaring with a truncated Taylor series; `log`
//! uses inverse scaling (Denman-Beavers square roots) and a Taylor series at
//! the identity. Both are only ever applied to the well-conditioned
//! near-identity transitions that arise when resampling paths, or to
//! exponentials of bounded generators; Hermitian arguments go through the
//! spectral route in `linalg` instead.

use crate::CMat;
use num_complex::Complex64;

/// exp(M) by scaling and squaring.
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = m.norm();
    let mut squarings = 0u32;
    let mut scaled = m.clone();
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
        scaled /= Complex64::new(2f64.powi(squarings as i32), 0.0);
    }
    let mut result = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        result += &term;
        if term.norm() < 1e-18 * result.norm().max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Principal log of a matrix with spectrum near the positive reals.
///
/// Repeatedly takes square roots (Denman-Beavers) until `‖M − I‖ < 0.3`,
/// then sums the Taylor series of `log(I + E)`. Returns `None` if a square
/// root iteration fails to converge.
pub fn logm_near_identity(m: &CMat) -> Option<CMat> {
    let n = m.nrows();
    let eye = CMat::identity(n, n);
    let mut a = m.clone();
    let mut doublings = 0i32;
    while (&a - &eye).norm() > 0.3 {
        a = sqrtm_db(&a)?;
        doublings += 1;
        if doublings > 40 {
            return None;
        }
    }
    let e = &a - &eye;
    let mut term = e.clone();
    let mut result = e.clone();
    for k in 2..=60 {
        term = &term * &e;
        let contrib = &term * Complex64::new(if k % 2 == 0 { -1.0 } else { 1.0 } / k as f64, 0.0);
        result += &contrib;
        if contrib.norm() < 1e-18 * result.norm().max(1e-30) {
            break;
        }
    }
    Some(result * Complex64::new(2f64.powi(doublings), 0.0))
}

/// Principal square root by the Denman-Beavers iteration.
fn sqrtm_db(m: &CMat) -> Option<CMat> {
    let mut y = m.clone();
    let mut z = CMat::identity(m.nrows(), m.ncols());
    for _ in 0..60 {
        let y_inv = y.clone().try_inverse()?;
        let z_inv = z.clone().try_inverse()?;
        let y_next = (&y + &z_inv) * Complex64::new(0.5, 0.0);
        let z_next = (&z + &y_inv) * Complex64::new(0.5, 0.0);
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta < 1e-15 * y.norm().max(1.0) {
            return Some(y);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng::Rng;

    #[test]
    fn exp_log_roundtrip() {
        let mut rng = Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = rng.gaussian_matrix(4, 4) * Complex64::new(0.2, 0.0);
            let e = expm(&x);
            let l = logm_near_identity(&e).expect("log converges");
            assert!((l - &x).norm() < 1e-11);
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMat::zeros(3, 3);
        assert!((expm(&z) - CMat::identity(3, 3)).norm() < 1e-15);
    }
}
