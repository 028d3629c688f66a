//! Subspace arithmetic: orthonormalization, principal angles, intersections.

use crate::CMat;

/// Orthonormal basis of the column span, via thin SVD with a relative rank
/// cutoff.
pub fn orthonormalize(cols: &CMat) -> CMat {
    if cols.ncols() == 0 {
        return cols.clone();
    }
    let svd = cols.clone().svd(true, false);
    let u = svd.u.expect("svd with u");
    let smax = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let tol = smax * 1e-12 * (cols.nrows().max(cols.ncols()) as f64);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .count();
    u.columns(0, rank).into_owned()
}

/// Principal angles between the spans of two orthonormal bases,
/// ascending. Computed from the singular values of `Q1* Q2`.
pub fn principal_angles(q1: &CMat, q2: &CMat) -> Vec<f64> {
    let m = q1.adjoint() * q2;
    let mut s: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .map(|&x| x.clamp(0.0, 1.0).acos())
        .collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s
}

/// Largest principal angle between subspaces of equal dimension.
pub fn max_principal_angle(q1: &CMat, q2: &CMat) -> f64 {
    principal_angles(q1, q2)
        .into_iter()
        .fold(0.0f64, f64::max)
}

/// Basis of the intersection of two spans: principal directions whose
/// angle is below `angle_tol`, averaged between the two sides.
pub fn intersection(q1: &CMat, q2: &CMat, angle_tol: f64) -> CMat {
    let m = q1.adjoint() * q2;
    let svd = m.svd(true, true);
    let y = svd.u.expect("u");
    let zt = svd.v_t.expect("v_t");
    let cos_tol = angle_tol.cos();
    let mut picked = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s >= cos_tol {
            picked.push(i);
        }
    }
    if picked.is_empty() {
        return CMat::zeros(q1.nrows(), 0);
    }
    let mut cols = CMat::zeros(q1.nrows(), picked.len());
    for (out_idx, &i) in picked.iter().enumerate() {
        let a = q1 * y.column(i);
        let b = q2 * zt.row(i).adjoint();
        let avg = (a + b) * num_complex::Complex64::new(0.5, 0.0);
        cols.set_column(out_idx, &avg);
    }
    orthonormalize(&cols)
}

/// Smallest singular value of the horizontally concatenated bases; a
/// direct-sum certificate when bounded away from zero.
pub fn concat_min_singular_value(bases: &[CMat]) -> f64 {
    let rows = bases[0].nrows();
    let total: usize = bases.iter().map(|b| b.ncols()).sum();
    let mut m = CMat::zeros(rows, total);
    let mut at = 0;
    for b in bases {
        for j in 0..b.ncols() {
            m.set_column(at + j, &b.column(j));
        }
        at += b.ncols();
    }
    m.svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn principal_angles_of_identical_spans_vanish() {
        let mut rng = crate::util::Rng::seed_from_u64(17);
        let a = rng.gaussian_matrix(6, 3);
        let q1 = orthonormalize(&a);
        // Same span, different well-conditioned spanning set.
        let mix = rng.unitary(3);
        let q2 = orthonormalize(&(&a * &mix));
        assert!(max_principal_angle(&q1, &q2) < 1e-9);
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let e = CMat::identity(4, 4);
        let q1 = e.columns(0, 2).into_owned(); // span(e1,e2)
        let q2 = e.columns(1, 2).into_owned(); // span(e2,e3)
        let w = intersection(&q1, &q2, 1e-6);
        assert_eq!(w.ncols(), 1);
        assert!(w[(1, 0)].norm() > 0.999);
    }

    #[test]
    fn concat_singular_value_detects_overlap() {
        let e = CMat::identity(3, 3);
        let a = e.columns(0, 1).into_owned();
        let b = e.columns(0, 1).into_owned();
        assert!(concat_min_singular_value(&[a.clone(), b]) < 1e-12);
        let c = e.columns(1, 1).into_owned();
        assert!((concat_min_singular_value(&[a, c]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_drops_dependent_columns() {
        let mut m = CMat::zeros(3, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(2.0, 0.0);
        let q = orthonormalize(&m);
        assert_eq!(q.ncols(), 1);
    }
}
