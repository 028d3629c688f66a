//! Parallel lift of a Gram-matrix path.
//!
//! Given Hermitian forms `H_t` on a fixed space, the lift is the path
//! `A(t)` in GL with `A(t₀) = Id`, Hermitian logarithmic derivative with
//! respect to `H₀`, and `A(t)* H₀ A(t) = H_t`. Between samples the Gram
//! path is interpolated linearly and the ODE
//! `Ȧ = ½ H₀⁻¹ A^{-*} Ḣ` is integrated by classical RK4 with step halving
//! until the isometry residual meets the tolerance.

use super::{HermitianForm, LinalgError};
use crate::CMat;
use num_complex::Complex64;

/// A sampled path of invertible operators with its reference form.
#[derive(Debug, Clone)]
pub struct OperatorPath {
    times: Vec<f64>,
    operators: Vec<CMat>,
    reference_form: HermitianForm,
}

impl OperatorPath {
    pub fn new(
        times: Vec<f64>,
        operators: Vec<CMat>,
        reference_form: HermitianForm,
    ) -> Result<Self, LinalgError> {
        if times.len() != operators.len() || times.is_empty() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} times vs {} operators",
                times.len(),
                operators.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LinalgError::TimesNotIncreasing);
        }
        let n = reference_form.dim();
        for a in &operators {
            if a.nrows() != n || a.ncols() != n {
                return Err(LinalgError::DimensionMismatch(
                    "operator dimension differs from reference form".into(),
                ));
            }
            if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(LinalgError::NonFinite);
            }
            // Invertibility: the determinant of a finite matrix must be
            // nonzero. Ill-conditioned accumulated paths are legal; the
            // 1e12 cap only applies where transitions get factored.
            if a.clone().lu().determinant().norm() == 0.0 {
                return Err(LinalgError::SingularInput { cond: f64::INFINITY });
            }
        }
        let defect = (&operators[0] - CMat::identity(n, n)).norm();
        if defect > 1e-8 * (n as f64).sqrt() {
            return Err(LinalgError::PathNotBasedAtIdentity { defect });
        }
        Ok(Self {
            times,
            operators,
            reference_form,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.reference_form.dim()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn operators(&self) -> &[CMat] {
        &self.operators
    }

    pub fn reference_form(&self) -> &HermitianForm {
        &self.reference_form
    }
}

/// Parallel lift of a positive-definite Gram path sampled at increasing
/// times. The first form is the reference.
pub fn parallel_lift(
    times: &[f64],
    grams: &[HermitianForm],
    lift_tol: f64,
) -> Result<OperatorPath, LinalgError> {
    if times.len() != grams.len() || times.len() < 2 {
        return Err(LinalgError::DimensionMismatch(format!(
            "{} times vs {} grams",
            times.len(),
            grams.len()
        )));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LinalgError::TimesNotIncreasing);
    }
    let h0 = grams[0].clone();
    let n = h0.dim();
    let h0_inv = h0
        .gram()
        .clone()
        .try_inverse()
        .ok_or(LinalgError::SingularGram)?;

    let mut ops = Vec::with_capacity(times.len());
    let mut a = CMat::identity(n, n);
    ops.push(a.clone());

    for i in 1..times.len() {
        let dt_total = times[i] - times[i - 1];
        let h_dot_base = (grams[i].gram() - grams[i - 1].gram()) / Complex64::new(dt_total, 0.0);
        let mut substeps = 1usize;
        let mut best_residual = f64::INFINITY;
        loop {
            let mut trial = a.clone();
            let h = dt_total / substeps as f64;
            let mut ok = true;
            for _ in 0..substeps {
                match rk4_step(&trial, &h0_inv, &h_dot_base, h) {
                    Some(next) => trial = next,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let resid = isometry_residual(&trial, &h0, &grams[i]);
                best_residual = best_residual.min(resid);
                if resid <= lift_tol {
                    a = trial;
                    break;
                }
            }
            substeps *= 2;
            if substeps > 1 << 20 {
                return Err(LinalgError::StepTooLarge {
                    tol: lift_tol,
                    best: best_residual,
                });
            }
        }
        ops.push(a.clone());
    }

    OperatorPath::new(times.to_vec(), ops, h0)
}

/// One RK4 step of `Ȧ = ½ H₀⁻¹ A^{-*} Ḣ` with constant `Ḣ`.
fn rk4_step(a: &CMat, h0_inv: &CMat, h_dot: &CMat, h: f64) -> Option<CMat> {
    let f = |x: &CMat| -> Option<CMat> {
        let solved = x.adjoint().lu().solve(h_dot)?;
        Some(h0_inv * solved * Complex64::new(0.5, 0.0))
    };
    let k1 = f(a)?;
    let k2 = f(&(a + &k1 * Complex64::new(h / 2.0, 0.0)))?;
    let k3 = f(&(a + &k2 * Complex64::new(h / 2.0, 0.0)))?;
    let k4 = f(&(a + &k3 * Complex64::new(h, 0.0)))?;
    Some(a + (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
        * Complex64::new(h / 6.0, 0.0))
}

/// Relative residual of `A* H₀ A = H_t`, the matrix form of the isometry
/// identity over every probe vector at once.
pub fn isometry_residual(a: &CMat, h0: &HermitianForm, ht: &HermitianForm) -> f64 {
    (a.adjoint() * h0.gram() * a - ht.gram()).norm() / ht.gram().norm().max(1.0)
}

/// Hermiticity defect of the discrete logarithmic derivative
/// `(A_{i} A_{i-1}^{-1} - I)/Δt` with respect to `h0`; diagnostic only.
pub fn log_derivative_defect(path: &OperatorPath) -> f64 {
    let mut worst = 0.0f64;
    for i in 1..path.len() {
        let b = path.operators()[i].clone()
            * path.operators()[i - 1]
                .clone()
                .try_inverse()
                .expect("path operators invertible");
        let dt = path.times()[i] - path.times()[i - 1];
        let s = (b - CMat::identity(path.dim(), path.dim())) / Complex64::new(dt, 0.0);
        worst = worst.max(path.reference_form().hermiticity_defect(&s) * dt);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_form(entries: &[f64]) -> HermitianForm {
        HermitianForm::from_diagonal(entries).unwrap()
    }

    #[test]
    fn constant_path_lifts_to_identity() {
        let times: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let grams: Vec<HermitianForm> = (0..6).map(|_| diag_form(&[2.0, 1.0, 0.5])).collect();
        let path = parallel_lift(&times, &grams, 1e-8).unwrap();
        for a in path.operators() {
            assert!((a - CMat::identity(3, 3)).norm() < 1e-9);
        }
    }

    #[test]
    fn conformal_scaling_gives_scalar_lift() {
        let mu = 0.3;
        let times: Vec<f64> = (0..8).map(|i| 0.5 * i as f64).collect();
        let grams: Vec<HermitianForm> = times
            .iter()
            .map(|&t| diag_form(&[(-2.0 * mu * t).exp(), (-2.0 * mu * t).exp()]))
            .collect();
        let path = parallel_lift(&times, &grams, 1e-8).unwrap();
        for (a, &t) in path.operators().iter().zip(&times) {
            let expect = CMat::identity(2, 2) * Complex64::new((-mu * t).exp(), 0.0);
            assert!((a - expect).norm() < 1e-7, "t = {t}");
        }
    }

    #[test]
    fn diagonal_path_matches_commuting_closed_form() {
        let lams = [0.4, -0.1, 0.25];
        let times: Vec<f64> = (0..11).map(|i| 0.4 * i as f64).collect();
        let grams: Vec<HermitianForm> = times
            .iter()
            .map(|&t| diag_form(&[(-2.0 * lams[0] * t).exp(), (-2.0 * lams[1] * t).exp(), (-2.0 * lams[2] * t).exp()]))
            .collect();
        let path = parallel_lift(&times, &grams, 1e-10).unwrap();
        for (a, &t) in path.operators().iter().zip(&times) {
            for (j, &l) in lams.iter().enumerate() {
                let expect = (-l * t).exp();
                assert!(
                    (a[(j, j)].re - expect).abs() < 1e-8 * expect.max(1.0),
                    "entry {j} at t = {t}"
                );
            }
        }
    }

    #[test]
    fn isometry_residual_bounded_on_noncommuting_path() {
        let mut rng = crate::util::Rng::seed_from_u64(21);
        let base = {
            let g = rng.gaussian_matrix(3, 3);
            &g * g.adjoint() + CMat::identity(3, 3)
        };
        let dir = rng.hermitian_unit(3);
        let times: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let grams: Vec<HermitianForm> = times
            .iter()
            .map(|&t| {
                let m = &base + &dir * Complex64::new(0.3 * (t * 0.7).sin(), 0.0);
                HermitianForm::new(m).unwrap()
            })
            .collect();
        let path = parallel_lift(&times, &grams, 1e-9).unwrap();
        for (i, a) in path.operators().iter().enumerate() {
            assert!(isometry_residual(a, &grams[0], &grams[i]) <= 1e-9);
        }
        assert!(log_derivative_defect(&path) < 1e-2);
    }

    #[test]
    fn non_positive_gram_is_rejected() {
        let ok = diag_form(&[1.0, 1.0]);
        let bad = CMat::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(HermitianForm::new(bad).is_err());
        // A degenerate time grid is also rejected.
        assert!(matches!(
            parallel_lift(&[0.0, 0.0], &[ok.clone(), ok], 1e-8),
            Err(LinalgError::TimesNotIncreasing)
        ));
    }
}
