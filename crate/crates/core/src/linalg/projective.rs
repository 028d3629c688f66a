//! Points of projective space and the Fubini-Study distance.

use super::LinalgError;
use crate::CVec;

/// A point of ℙ(V) held as a unit representative with a fixed phase (the
/// largest-modulus coordinate is made real positive), so equal points have
/// equal representatives up to rounding.
#[derive(Debug, Clone)]
pub struct ProjectivePoint {
    rep: CVec,
}

impl ProjectivePoint {
    pub fn new(v: &CVec) -> Result<Self, LinalgError> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(LinalgError::ZeroVector);
        }
        let mut rep = v / num_complex::Complex64::new(norm, 0.0);
        let (mut best, mut best_abs) = (0usize, 0.0f64);
        for (i, z) in rep.iter().enumerate() {
            if z.norm() > best_abs {
                best_abs = z.norm();
                best = i;
            }
        }
        let phase = rep[best] / num_complex::Complex64::new(best_abs, 0.0);
        rep /= phase;
        Ok(Self { rep })
    }

    pub fn representative(&self) -> &CVec {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }
}

/// Fubini-Study distance `arccos(|⟨v,w⟩| / (‖v‖‖w‖))`, in [0, π/2].
pub fn fs_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    fs_distance_vectors(p.representative(), q.representative())
        .expect("projective points are nonzero")
}

/// Fubini-Study distance between raw nonzero representatives.
///
/// Computed as `atan2(sin θ, cos θ)` from the orthogonal residual, which
/// stays accurate for tiny angles where `acos` of the overlap loses half
/// the significant digits.
pub fn fs_distance_vectors(v: &CVec, w: &CVec) -> Result<f64, LinalgError> {
    let nv = v.norm();
    let nw = w.norm();
    if nv == 0.0 || nw == 0.0 {
        return Err(LinalgError::ZeroVector);
    }
    let vu = v / num_complex::Complex64::new(nv, 0.0);
    let wu = w / num_complex::Complex64::new(nw, 0.0);
    let c = (wu.adjoint() * &vu)[(0, 0)];
    let cos = c.norm().clamp(0.0, 1.0);
    let phase = if cos > 0.0 {
        c / num_complex::Complex64::new(cos, 0.0)
    } else {
        num_complex::Complex64::new(1.0, 0.0)
    };
    let orth = &vu - wu * (phase * num_complex::Complex64::new(cos, 0.0));
    let sin = orth.norm().clamp(0.0, 1.0);
    Ok(sin.atan2(cos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cv(entries: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(entries.len(), entries.iter().map(|&(r, i)| Complex64::new(r, i)))
    }

    #[test]
    fn distance_to_self_is_zero() {
        let p = ProjectivePoint::new(&cv(&[(1.0, 2.0), (0.5, -0.3)])).unwrap();
        assert!(fs_distance(&p, &p) < 1e-12);
    }

    #[test]
    fn orthogonal_representatives_are_maximally_far() {
        let p = ProjectivePoint::new(&cv(&[(1.0, 0.0), (0.0, 0.0)])).unwrap();
        let q = ProjectivePoint::new(&cv(&[(0.0, 0.0), (0.0, 3.0)])).unwrap();
        assert!((fs_distance(&p, &q) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn scaling_does_not_move_the_point() {
        let v = cv(&[(1.0, -1.0), (2.0, 0.5), (0.0, 0.7)]);
        let w = &v * Complex64::new(-3.0, 4.0);
        let p = ProjectivePoint::new(&v).unwrap();
        let q = ProjectivePoint::new(&w).unwrap();
        assert!(fs_distance(&p, &q) < 1e-12);
        assert!((p.representative() - q.representative()).norm() < 1e-12);
    }

    #[test]
    fn matches_compensated_oracle() {
        // Extended-precision oracle: the same formula with Kahan-compensated
        // accumulation of the inner product and norms.
        let mut rng = crate::util::Rng::seed_from_u64(33);
        for _ in 0..50 {
            let v = rng.gaussian_vector(24);
            let w = rng.gaussian_vector(24);
            let d = fs_distance_vectors(&v, &w).unwrap();

            let mut dot_re = Kahan::default();
            let mut dot_im = Kahan::default();
            let mut nv = Kahan::default();
            let mut nw = Kahan::default();
            for i in 0..24 {
                let prod = v[i].conj() * w[i];
                dot_re.add(prod.re);
                dot_im.add(prod.im);
                nv.add(v[i].norm_sqr());
                nw.add(w[i].norm_sqr());
            }
            let overlap = (dot_re.value().powi(2) + dot_im.value().powi(2)).sqrt()
                / (nv.value().sqrt() * nw.value().sqrt());
            let oracle = overlap.clamp(0.0, 1.0).acos();
            assert!((d - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_vector_is_rejected() {
        let z = cv(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            ProjectivePoint::new(&z),
            Err(LinalgError::ZeroVector)
        ));
    }

    #[derive(Default)]
    struct Kahan {
        sum: f64,
        c: f64,
    }

    impl Kahan {
        fn add(&mut self, x: f64) {
            let y = x - self.c;
            let t = self.sum + y;
            self.c = (t - self.sum) - y;
            self.sum = t;
        }
        fn value(&self) -> f64 {
            self.sum
        }
    }
}
