//! Plücker coordinates of subspaces.

use super::induce::det;
use super::{subsets_lex, RepDescriptor, RepsError};
use crate::linalg::ProjectivePoint;
use crate::{CMat, CVec};

/// A decomposable vector of `Λ^p E`, coordinates indexed by lexicographic
/// p-subsets, held as a phase-fixed unit representative.
#[derive(Debug, Clone)]
pub struct PluckerVector {
    p: usize,
    e_dim: usize,
    point: ProjectivePoint,
}

impl PluckerVector {
    pub fn descriptor(&self) -> RepDescriptor {
        RepDescriptor::Ext(self.p)
    }

    pub fn grade(&self) -> usize {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.e_dim
    }

    pub fn coordinates(&self) -> &CVec {
        self.point.representative()
    }

    pub fn point(&self) -> &ProjectivePoint {
        &self.point
    }

    /// Residual of the three-term quadratic Plücker relations
    /// `p_{ij}p_{kl} - p_{ik}p_{jl} + p_{il}p_{jk}`, maximal over all
    /// 4-subsets. Zero (numerically) certifies decomposability for p = 2.
    pub fn relation_residual(&self) -> Option<f64> {
        if self.p != 2 {
            return None;
        }
        let subs = subsets_lex(self.e_dim, 2);
        let index = |a: usize, b: usize| subs.iter().position(|s| s[0] == a && s[1] == b).unwrap();
        let c = self.coordinates();
        let mut worst = 0.0f64;
        for q in subsets_lex(self.e_dim, 4) {
            let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
            let r = c[index(i, j)] * c[index(k, l)] - c[index(i, k)] * c[index(j, l)]
                + c[index(i, l)] * c[index(j, k)];
            worst = worst.max(r.norm());
        }
        Some(worst)
    }
}

/// Plücker coordinates of the span of the columns of `span` (an m×p matrix
/// of linearly independent vectors): the vector of p×p minors.
///
/// The projective point does not depend on the spanning basis; a change of
/// basis scales all minors by its determinant.
pub fn plucker(span: &CMat) -> Result<PluckerVector, RepsError> {
    let (m, p) = (span.nrows(), span.ncols());
    if p == 0 || p > m {
        return Err(RepsError::InvalidDescriptor(format!(
            "span must have 1..={m} columns, got {p}"
        )));
    }
    let sigma_min = span
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    // Scale-invariant dependence test.
    let scale = span.norm().max(1e-300);
    if sigma_min <= 1e-10 * scale {
        return Err(RepsError::DegenerateSpan { sigma_min });
    }
    let subs = subsets_lex(m, p);
    let mut coords = CVec::zeros(subs.len());
    for (i, s) in subs.iter().enumerate() {
        let minor = CMat::from_fn(p, p, |r, c| span[(s[r], c)]);
        coords[i] = det(&minor);
    }
    let point = ProjectivePoint::new(&coords)?;
    Ok(PluckerVector {
        p,
        e_dim: m,
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fs_distance;
    use crate::util::Rng;
    use num_complex::Complex64;

    #[test]
    fn coordinate_plane_has_one_coordinate() {
        let e = CMat::identity(4, 4);
        let w = e.columns(0, 2).into_owned();
        let pv = plucker(&w).unwrap();
        assert!((pv.coordinates()[0].norm() - 1.0).abs() < 1e-14);
        for i in 1..6 {
            assert!(pv.coordinates()[i].norm() < 1e-14);
        }
    }

    #[test]
    fn independent_of_spanning_basis() {
        let mut rng = Rng::seed_from_u64(70);
        let span = rng.gaussian_matrix(4, 2);
        let mix = rng.gaussian_matrix(2, 2) + CMat::identity(2, 2) * Complex64::new(2.0, 0.0);
        let p1 = plucker(&span).unwrap();
        let p2 = plucker(&(&span * mix)).unwrap();
        assert!(fs_distance(p1.point(), p2.point()) < 1e-10);
    }

    #[test]
    fn random_two_plane_satisfies_plucker_relation() {
        let mut rng = Rng::seed_from_u64(71);
        for _ in 0..20 {
            let span = rng.gaussian_matrix(4, 2);
            let pv = plucker(&span).unwrap();
            assert!(pv.relation_residual().unwrap() < 1e-10);
        }
    }

    #[test]
    fn dependent_span_is_rejected() {
        let mut span = CMat::zeros(4, 2);
        span[(0, 0)] = Complex64::new(1.0, 0.0);
        span[(0, 1)] = Complex64::new(2.0, 0.0);
        assert!(matches!(
            plucker(&span),
            Err(RepsError::DegenerateSpan { .. })
        ));
    }
}
