//! Quotient metrics on `R_k = Sym^k/I_k` and the uniform-equivalence
//! diagnostic between quotient and L² metrics.

use super::RingError;
use crate::linalg::HermitianForm;
use crate::CMat;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;

/// Quotient Gram matrix on a chosen complement basis of `I_k`.
#[derive(Debug, Clone)]
pub struct QuotientForm {
    pub gram: HermitianForm,
    /// Monomial indices of the complement basis carrying the quotient form.
    pub complement: Vec<usize>,
}

/// Quotient metric of `h` on `Sym^k/I_k`: the Schur complement of the
/// `I_k` block in the Gram matrix over the basis `[I_k basis | complement
/// monomials]`. The complement is chosen by echelon pivots of `ik`.
pub fn quotient_norm(h: &CMat, ik: &CMat) -> Result<QuotientForm, RingError> {
    let n = h.nrows();
    if h.ncols() != n || ik.nrows() != n {
        return Err(RingError::Dimension(format!(
            "gram {}x{}, ideal basis rows {}",
            n,
            h.ncols(),
            ik.nrows()
        )));
    }
    let d = ik.ncols();
    // Pivot monomials of the ideal span (largest remaining magnitude).
    let mut work = ik.clone();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..d {
        let (mut best, mut mag) = (None, 0.0f64);
        for row in 0..n {
            if pivots.contains(&row) {
                continue;
            }
            let m = work[(row, col)].norm();
            if m > mag {
                mag = m;
                best = Some(row);
            }
        }
        let Some(p) = best else {
            return Err(RingError::Dimension("ideal basis is rank deficient".into()));
        };
        if mag <= 1e-12 {
            return Err(RingError::Dimension("ideal basis is rank deficient".into()));
        }
        for c2 in (col + 1)..d {
            let f = work[(p, c2)] / work[(p, col)];
            for r in 0..n {
                let sub = work[(r, col)] * f;
                work[(r, c2)] -= sub;
            }
        }
        pivots.push(p);
    }
    let complement: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();

    if d == 0 {
        return Ok(QuotientForm {
            gram: HermitianForm::new(h.clone()).map_err(|_| RingError::SingularGram)?,
            complement,
        });
    }

    // Blocks over [B_I | E_C].
    let c = complement.len();
    let h_ii = ik.adjoint() * h * ik;
    let he = {
        let mut cols = CMat::zeros(n, c);
        for (j, &cj) in complement.iter().enumerate() {
            cols.set_column(j, &h.column(cj));
        }
        cols
    };
    let h_ic = ik.adjoint() * &he;
    let mut h_cc = CMat::zeros(c, c);
    for (i, &ci) in complement.iter().enumerate() {
        for (j, &cj) in complement.iter().enumerate() {
            h_cc[(i, j)] = h[(ci, cj)];
        }
    }
    let h_ii_inv = h_ii
        .clone()
        .try_inverse()
        .ok_or(RingError::SingularGram)?;
    let schur = &h_cc - h_ic.adjoint() * h_ii_inv * &h_ic;
    let gram = HermitianForm::new(schur).map_err(|_| RingError::SingularGram)?;
    Ok(QuotientForm { gram, complement })
}

/// Uniform-equivalence diagnostic between the quotient metric and a
/// reference L² metric on `R_k` along a path of Gram matrices.
#[derive(Debug, Clone)]
pub struct H2Report {
    /// `C_k(t) = max(λ_max, 1/λ_min)` of the pencil `(H_t^*, H_t)`.
    pub c_k: Vec<f64>,
    pub sup: f64,
    /// Running sup stabilizes: last-quartile increase below 5%.
    pub bounded: bool,
}

/// Compute `C_k(t)` per sample. `sym_grams` are Gram matrices on
/// `Sym^k R₁`, `l2_grams` on `R_k` (same basis as the image of `iota`),
/// and `iota` is the surjection matrix `Sym^k R₁ → R_k`; the quotient
/// metric is `(ι H⁻¹ ι*)^{-1}`.
pub fn h2_check(
    sym_grams: &[CMat],
    l2_grams: &[CMat],
    iota: &CMat,
    ik: Option<&CMat>,
) -> Result<H2Report, RingError> {
    if sym_grams.len() != l2_grams.len() || sym_grams.is_empty() {
        return Err(RingError::Dimension(
            "gram paths must have equal nonzero length".into(),
        ));
    }
    if let Some(ik) = ik {
        let defect = (iota * ik).norm();
        if defect > 1e-8 * iota.norm().max(1.0) {
            return Err(RingError::Dimension(format!(
                "iota does not annihilate the ideal (defect {defect:.3e})"
            )));
        }
    }
    let mut c_k = Vec::with_capacity(sym_grams.len());
    for (h, l2) in sym_grams.iter().zip(l2_grams) {
        let h_inv = h.clone().try_inverse().ok_or(RingError::SingularGram)?;
        let pushed = iota * h_inv * iota.adjoint();
        let h_star = pushed
            .try_inverse()
            .ok_or(RingError::SingularGram)?;
        // Pencil eigenvalues via the Cholesky of the reference metric.
        let l2_form = HermitianForm::new(l2.clone()).map_err(|_| RingError::SingularGram)?;
        let t_inv = l2_form.standardizing_transform_inv();
        let m = t_inv.adjoint() * h_star * &t_inv;
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let min = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
        if min <= 0.0 {
            return Err(RingError::SingularGram);
        }
        c_k.push(max.max(1.0 / min));
    }
    let sup = c_k.iter().cloned().fold(0.0f64, f64::max);
    let three_quarter = (c_k.len() * 3) / 4;
    let sup_early = c_k[..three_quarter.max(1)]
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let bounded = sup <= sup_early * 1.05;
    Ok(H2Report { c_k, sup, bounded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::Rng;
    use crate::CVec;

    #[test]
    fn no_ideal_means_identity_quotient() {
        let mut rng = Rng::seed_from_u64(130);
        let g = rng.gaussian_matrix(4, 4);
        let h = &g * g.adjoint() + CMat::identity(4, 4);
        let q = quotient_norm(&h, &CMat::zeros(4, 0)).unwrap();
        assert_eq!(q.complement.len(), 4);
        assert!((q.gram.gram() - &h).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_ideal_direction_drops_out() {
        // Sym = C², I = span(e₂), H = diag(1,4): the class of e₁ has norm 1.
        let h = CMat::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 1.0 } else { 4.0 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut ik = CMat::zeros(2, 1);
        ik[(1, 0)] = Complex64::new(1.0, 0.0);
        let q = quotient_norm(&h, &ik).unwrap();
        assert_eq!(q.complement, vec![0]);
        assert!((q.gram.gram()[(0, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matches_projection_formula_oracle() {
        // minimization over the coset against the explicit projection
        // formula ((ι H^{-1} ι*)^{-1}) and dense sampling.
        let mut rng = Rng::seed_from_u64(131);
        for _ in 0..10 {
            let g = rng.gaussian_matrix(4, 4);
            let h = &g * g.adjoint() + CMat::identity(4, 4);
            let dir = rng.gaussian_vector(4);
            let ik = {
                let mut m = CMat::zeros(4, 1);
                m.set_column(0, &(&dir / Complex64::new(dir.norm(), 0.0)));
                m
            };
            let q = quotient_norm(&h, &ik).unwrap();
            // Oracle: the quotient norm of a complement class is the exact
            // minimum of ‖c + a·dir‖²_H over the one-dimensional coset.
            for (i, &ci) in q.complement.iter().enumerate() {
                let mut c = CVec::zeros(4);
                c[ci] = Complex64::new(1.0, 0.0);
                let exact = {
                    let d = ik.column(0).into_owned();
                    let hd = &h * &d;
                    let a = -(d.adjoint() * &h * &c)[(0, 0)] / (d.adjoint() * &hd)[(0, 0)];
                    let v = &c + &d * a;
                    (v.adjoint() * &h * &v)[(0, 0)].re
                };
                let from_schur = q.gram.gram()[(i, i)].re;
                assert!(
                    (exact - from_schur).abs() < 1e-10 * exact.max(1.0),
                    "diagonal {i}"
                );
            }
        }
    }

    #[test]
    fn h2_with_trivial_ideal_is_one() {
        let mut rng = Rng::seed_from_u64(132);
        let g = rng.gaussian_matrix(3, 3);
        let h = &g * g.adjoint() + CMat::identity(3, 3);
        let iota = CMat::identity(3, 3);
        let report = h2_check(&[h.clone(), h.clone()], &[h.clone(), h], &iota, None).unwrap();
        for c in &report.c_k {
            assert!((c - 1.0).abs() < 1e-10);
        }
        assert!(report.bounded);
    }

    #[test]
    fn h2_static_metrics_give_constant_ck() {
        let mut rng = Rng::seed_from_u64(133);
        let g = rng.gaussian_matrix(4, 4);
        let h_sym = &g * g.adjoint() + CMat::identity(4, 4);
        // iota: project to first two coordinates.
        let mut iota = CMat::zeros(2, 4);
        iota[(0, 0)] = Complex64::new(1.0, 0.0);
        iota[(1, 1)] = Complex64::new(1.0, 0.0);
        let l2 = CMat::identity(2, 2);
        let report = h2_check(
            &vec![h_sym.clone(); 5],
            &vec![l2.clone(); 5],
            &iota,
            None,
        )
        .unwrap();
        let first = report.c_k[0];
        for c in &report.c_k {
            assert!((c - first).abs() < 1e-12);
        }
        assert!(report.bounded);
    }
}
