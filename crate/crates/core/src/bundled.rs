//! The bundled example corpus: the inputs every CLI subcommand can run
//! against without external files.

use crate::flows::{synth_path, FlowError, SynthGroundTruth, SynthPathConfig};
use crate::futaki::{FutakiError, PolytopeData};
use crate::linalg::OperatorPath;
use crate::ringfilt::{GradedRingPresentation, RingError, SparsePoly};
use num_complex::Complex64;
use num_rational::BigRational;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Pure geodesic with spectrum (2, 1, 0), multiplicities (1, 2, 3), in the
/// diagonal frame: 60 unit steps keep the accumulated operators inside the
/// floating-point budget while staying exactly divisible.
pub fn geodesic_path() -> Result<OperatorPath, FlowError> {
    let cfg = SynthPathConfig {
        dim: 6,
        spectrum: vec![2.0, 1.0, 0.0],
        multiplicities: vec![1, 2, 3],
        steps: 60,
        gauge_angle: 0.0,
        noise_amplitude: 0.0,
        noise_decay: 2.0,
        rotate_frame: false,
        seed: 0,
    };
    synth_path(&cfg).map(|(p, _)| p)
}

/// Gauged self-similar path with decaying Hermitian noise; the spectrum is
/// kept small so 2000 accumulated steps stay analyzable in doubles.
pub fn gauged_noisy_path(seed: u64) -> Result<(OperatorPath, SynthGroundTruth), FlowError> {
    let cfg = SynthPathConfig {
        dim: 6,
        spectrum: vec![0.004, 0.001, -0.003],
        multiplicities: vec![1, 2, 3],
        steps: 2000,
        gauge_angle: 0.6,
        noise_amplitude: 0.1,
        noise_decay: 2.0,
        rotate_frame: true,
        seed,
    };
    synth_path(&cfg)
}

/// The conic `xz - y²` in three variables.
pub fn conic_ring(trunc: usize) -> Result<GradedRingPresentation, RingError> {
    let g = SparsePoly::new(vec![
        (vec![1, 0, 1], Complex64::new(1.0, 0.0)),
        (vec![0, 2, 0], Complex64::new(-1.0, 0.0)),
    ])?;
    GradedRingPresentation::new(3, vec![g], trunc, Some((0..=trunc).map(|k| 2 * k + 1).collect()))
}

/// The twisted cubic `(xz - y², yw - z², xw - yz)` in four variables.
pub fn twisted_cubic_ring(trunc: usize) -> Result<GradedRingPresentation, RingError> {
    let g1 = SparsePoly::new(vec![
        (vec![1, 0, 1, 0], Complex64::new(1.0, 0.0)),
        (vec![0, 2, 0, 0], Complex64::new(-1.0, 0.0)),
    ])?;
    let g2 = SparsePoly::new(vec![
        (vec![0, 1, 0, 1], Complex64::new(1.0, 0.0)),
        (vec![0, 0, 2, 0], Complex64::new(-1.0, 0.0)),
    ])?;
    let g3 = SparsePoly::new(vec![
        (vec![1, 0, 0, 1], Complex64::new(1.0, 0.0)),
        (vec![0, 1, 1, 0], Complex64::new(-1.0, 0.0)),
    ])?;
    GradedRingPresentation::new(
        4,
        vec![g1, g2, g3],
        trunc,
        Some((0..=trunc).map(|k| 3 * k + 1).collect()),
    )
}

/// Anticanonical interval of ℙ¹: `[-1, 1]`.
pub fn p1_polytope(kmax: usize) -> Result<PolytopeData, FutakiError> {
    PolytopeData::new(1, vec![vec![q(-1)], vec![q(1)]], kmax)
}

/// Anticanonical triangle of ℙ².
pub fn p2_polytope(kmax: usize) -> Result<PolytopeData, FutakiError> {
    PolytopeData::new(
        2,
        vec![vec![q(-1), q(-1)], vec![q(2), q(-1)], vec![q(-1), q(2)]],
        kmax,
    )
}

/// Anticanonical quadrilateral of the one-point blowup of ℙ².
pub fn bl1_p2_polytope(kmax: usize) -> Result<PolytopeData, FutakiError> {
    PolytopeData::new(
        2,
        vec![
            vec![q(-1), q(0)],
            vec![q(0), q(-1)],
            vec![q(2), q(-1)],
            vec![q(-1), q(2)],
        ],
        kmax,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{estimate_gauge, StandardizedPath};
    use crate::Tolerances;

    #[test]
    fn bundled_geodesic_analyzes_to_its_spectrum() {
        let path = geodesic_path().unwrap();
        let std = StandardizedPath::from_path(&path).unwrap();
        let est = estimate_gauge(&std, &Tolerances::default()).unwrap();
        assert_eq!(est.lambda.spectrum(), &[2.0, 1.0, 0.0]);
        assert_eq!(est.lambda.multiplicities(), &[1, 2, 3]);
        assert!(!est.case_ii);
    }

    #[test]
    fn bundled_rings_have_their_hilbert_functions() {
        let conic = conic_ring(6).unwrap();
        assert_eq!(conic.rk_dim(6), 13);
        let cubic = twisted_cubic_ring(4).unwrap();
        assert_eq!(cubic.rk_dim(4), 13);
    }
}
