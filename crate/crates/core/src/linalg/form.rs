//! Positive-definite Hermitian forms on a fixed reference basis.

use super::LinalgError;
use crate::{CMat, CVec};
use nalgebra::Cholesky;
use num_complex::Complex64;

/// A Hermitian inner product, stored as its Gram matrix in the reference
/// basis. Positive-definiteness is validated at construction.
#[derive(Debug, Clone)]
pub struct HermitianForm {
    gram: CMat,
    chol_l: CMat,
}

impl HermitianForm {
    pub fn new(gram: CMat) -> Result<Self, LinalgError> {
        if gram.nrows() != gram.ncols() {
            return Err(LinalgError::DimensionMismatch(format!(
                "gram is {}x{}",
                gram.nrows(),
                gram.ncols()
            )));
        }
        if gram.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let scale = gram.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let defect = (&gram - gram.adjoint()).norm();
        if defect > 1e-10 * scale {
            return Err(LinalgError::NotHermitian { defect });
        }
        let sym = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
        let chol = Cholesky::new(sym.clone()).ok_or(LinalgError::SingularGram)?;
        let l = chol.l();
        // nalgebra's complex Cholesky happily takes complex square roots of
        // negative pivots; positive-definiteness needs a real-positive
        // diagonal of L.
        for i in 0..l.nrows() {
            let d = l[(i, i)];
            if !(d.re > 0.0) || d.im.abs() > 1e-12 * d.re.abs().max(1.0) || !d.re.is_finite() {
                return Err(LinalgError::SingularGram);
            }
        }
        Ok(Self { gram: sym, chol_l: l })
    }

    pub fn identity(dim: usize) -> Self {
        let gram = CMat::identity(dim, dim);
        Self {
            chol_l: gram.clone(),
            gram,
        }
    }

    pub fn from_diagonal(entries: &[f64]) -> Result<Self, LinalgError> {
        if entries.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(LinalgError::SingularGram);
        }
        let n = entries.len();
        let gram = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let chol_l = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i].sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { gram, chol_l })
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    /// H(u, v), conjugate-linear in the first argument.
    pub fn inner(&self, u: &CVec, v: &CVec) -> Complex64 {
        (u.adjoint() * &self.gram * v)[(0, 0)]
    }

    pub fn norm_sq(&self, v: &CVec) -> f64 {
        self.inner(v, v).re
    }

    pub fn norm(&self, v: &CVec) -> f64 {
        self.norm_sq(v).max(0.0).sqrt()
    }

    /// Transform `T` with `‖v‖_H = ‖T v‖₂`; here `T = L*` for `G = L L*`.
    pub fn standardizing_transform(&self) -> CMat {
        self.chol_l.adjoint()
    }

    /// Inverse of [`Self::standardizing_transform`].
    pub fn standardizing_transform_inv(&self) -> CMat {
        self.chol_l
            .adjoint()
            .try_inverse()
            .expect("Cholesky factor is invertible")
    }

    /// Whether `u` preserves this form: `u* G u = G`.
    pub fn unitarity_defect(&self, u: &CMat) -> f64 {
        (u.adjoint() * &self.gram * u - &self.gram).norm() / self.gram.norm()
    }

    /// Whether `p` is Hermitian with respect to this form: `G p = p* G`.
    pub fn hermiticity_defect(&self, p: &CMat) -> f64 {
        (&self.gram * p - p.adjoint() * &self.gram).norm() / self.gram.norm().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let mut g = CMat::identity(2, 2);
        g[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            HermitianForm::new(g),
            Err(LinalgError::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_indefinite() {
        let mut g = CMat::identity(2, 2);
        g[(1, 1)] = Complex64::new(-1.0, 0.0);
        assert!(matches!(
            HermitianForm::new(g),
            Err(LinalgError::SingularGram)
        ));
    }

    #[test]
    fn standardizing_transform_is_isometry() {
        let g = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.3, 0.4),
                Complex64::new(0.3, -0.4),
                Complex64::new(1.0, 0.0),
            ],
        );
        let h = HermitianForm::new(g.adjoint()).unwrap();
        let t = h.standardizing_transform();
        let v = CVec::from_fn(2, |i, _| Complex64::new(0.7 + i as f64, -0.2));
        let lhs = h.norm(&v);
        let rhs = (&t * &v).norm();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
