//! Limit sets and the two-step degeneration point [v̄].

use super::filtration::OneParamData;
use super::gauge::GaugeEstimate;
use super::path::StandardizedPath;
use super::weight::weight_with_spectrum;
use super::AsymError;
use crate::config::Tolerances;
use crate::linalg::{fs_distance_vectors, ProjectivePoint};
use crate::reps::{induce, induced_weights, RepDescriptor};
use crate::CVec;
use num_complex::Complex64;

/// Finite sample of the limit set of `[ρ(g_i^{-1} A_i) v]`.
#[derive(Debug, Clone)]
pub struct LimitSetSample {
    /// Cluster representatives, one per Fubini-Study ball of the clustering
    /// radius.
    pub representatives: Vec<ProjectivePoint>,
    /// Largest pairwise distance among sampled points.
    pub diameter: f64,
    /// Largest nearest-neighbor gap among sampled points; connectedness
    /// diagnostic, report only.
    pub max_nn_gap: f64,
    /// Largest angle from a representative to the d(v)-eigenspace.
    pub max_angle_to_eigenspace: f64,
    /// Snapped weight of the probe vector.
    pub snapped_weight: f64,
}

/// Sample the limit set of `v` along scheduled subsequences of the tail.
///
/// For each stride in `schedule`, the points `[ρ(g_i^{-1} A_i) v]` at
/// `i = tail_start, tail_start + stride, …` are collected, renormalizing at
/// every step; representatives are the greedy cluster centers.
pub fn limit_set(
    path: &StandardizedPath,
    gauge: &GaugeEstimate,
    v: &CVec,
    desc: &RepDescriptor,
    schedule: &[usize],
    tol: &Tolerances,
) -> Result<LimitSetSample, AsymError> {
    if v.norm() == 0.0 {
        return Err(AsymError::ZeroVector);
    }
    let decomp = induced_weights(&gauge.lambda, desc, tol.dim_cap)?;
    let west = weight_with_spectrum(path, gauge, v, desc, &decomp, tol)?;
    let eigen_idx = decomp
        .weights()
        .iter()
        .position(|&w| (w - west.snapped).abs() < 1e-12)
        .expect("snapped weight is a spectrum element");
    let eigenspace = decomp.basis(eigen_idx);

    let mut points: Vec<CVec> = Vec::new();
    for &stride in schedule {
        let stride = stride.max(1);
        let mut i = gauge.tail_start;
        while i <= path.steps() {
            let moved = gauge.gauge(i).adjoint() * path.op(i);
            let big = if matches!(desc, RepDescriptor::Standard) {
                moved * v
            } else {
                induce(desc, &moved, tol.dim_cap)? * v
            };
            let n = big.norm();
            if n == 0.0 || !n.is_finite() {
                return Err(AsymError::ZeroVector);
            }
            points.push(big / Complex64::new(n, 0.0));
            i += stride;
        }
    }

    // Greedy clustering by Fubini-Study distance.
    let mut reps: Vec<CVec> = Vec::new();
    for p in &points {
        let mut matched = false;
        for r in &reps {
            if fs_distance_vectors(p, r)? <= tol.limit_cluster_tol {
                matched = true;
                break;
            }
        }
        if !matched {
            reps.push(p.clone());
        }
    }

    let mut diameter = 0.0f64;
    let mut max_nn_gap = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        let mut nearest = f64::INFINITY;
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = fs_distance_vectors(p, q)?;
            diameter = diameter.max(d);
            nearest = nearest.min(d);
        }
        if nearest.is_finite() {
            max_nn_gap = max_nn_gap.max(nearest);
        }
    }

    let mut max_angle = 0.0f64;
    for r in &reps {
        let proj = eigenspace * (eigenspace.adjoint() * r);
        let overlap = proj.norm().clamp(0.0, 1.0);
        max_angle = max_angle.max(overlap.acos());
    }

    Ok(LimitSetSample {
        representatives: reps
            .iter()
            .map(|r| ProjectivePoint::new(r).expect("normalized"))
            .collect(),
        diameter,
        max_nn_gap,
        max_angle_to_eigenspace: max_angle,
        snapped_weight: west.snapped,
    })
}

/// The point [v̄]: the component of `ρ(C₀) v` in the highest-weight
/// eigenspace of Λ carrying a nonzero component.
pub fn bar_limit(
    one_param: &OneParamData,
    lambda: &crate::linalg::HermitianGenerator,
    v: &CVec,
    desc: &RepDescriptor,
    tol: &Tolerances,
) -> Result<ProjectivePoint, AsymError> {
    if v.norm() == 0.0 {
        return Err(AsymError::ZeroVector);
    }
    let moved = if matches!(desc, RepDescriptor::Standard) {
        one_param.c0.clone() * v
    } else {
        induce(desc, &one_param.c0, tol.dim_cap)? * v
    };
    let decomp = induced_weights(lambda, desc, tol.dim_cap)?;
    let total = moved.norm();
    for j in 0..decomp.len() {
        let basis = decomp.basis(j);
        let comp = basis * (basis.adjoint() * &moved);
        if comp.norm() > 1e-10 * total {
            return Ok(ProjectivePoint::new(&comp)?);
        }
    }
    Err(AsymError::ZeroVector)
}

/// Fubini-Study distance from `[w]` to the K_Λ-orbit of `[target]` in an
/// induced representation: blockwise alignment is optimal, so the maximal
/// overlap is `Σ_j ‖P_j target‖ ‖P_j w‖` over weight blocks.
pub fn orbit_distance(
    w: &CVec,
    target: &CVec,
    lambda: &crate::linalg::HermitianGenerator,
    desc: &RepDescriptor,
    cap: usize,
) -> Result<f64, AsymError> {
    let decomp = induced_weights(lambda, desc, cap)?;
    let nw = w.norm();
    let nt = target.norm();
    if nw == 0.0 || nt == 0.0 {
        return Err(AsymError::ZeroVector);
    }
    let mut overlap = 0.0f64;
    for j in 0..decomp.len() {
        let basis = decomp.basis(j);
        let pw = (basis.adjoint() * w).norm();
        let pt = (basis.adjoint() * target).norm();
        overlap += pw * pt;
    }
    Ok((overlap / (nw * nt)).clamp(0.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{estimate_gauge, filtration, one_param, splitting};
    use crate::linalg::{fs_distance, spectral_decompose, HermitianForm, OperatorPath};
    use crate::CMat;

    fn geodesic(spec: &[f64], steps: usize) -> (StandardizedPath, GaugeEstimate) {
        let m = CMat::from_fn(spec.len(), spec.len(), |i, j| {
            if i == j {
                Complex64::new(spec[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let lam = spectral_decompose(&m, Some(1e-9)).unwrap();
        let ops: Vec<CMat> = (0..=steps).map(|i| lam.exp_t(i as f64)).collect();
        let times: Vec<f64> = (0..=steps).map(|i| i as f64).collect();
        let path = OperatorPath::new(times, ops, HermitianForm::identity(spec.len())).unwrap();
        let std = StandardizedPath::from_path(&path).unwrap();
        let gauge = estimate_gauge(&std, &Tolerances::default()).unwrap();
        (std, gauge)
    }

    #[test]
    fn geodesic_limit_set_is_dominant_projection() {
        let (path, gauge) = geodesic(&[0.9, 0.2, -0.5], 60);
        let tol = Tolerances::default();
        let v = CVec::from_fn(3, |i, _| Complex64::new(1.0 + i as f64 * 0.2, -0.1));
        let sample = limit_set(&path, &gauge, &v, &RepDescriptor::Standard, &[1, 3], &tol).unwrap();
        assert_eq!(sample.representatives.len(), 1);
        let mut top = CVec::zeros(3);
        top[0] = v[0];
        let d = fs_distance(
            &sample.representatives[0],
            &ProjectivePoint::new(&top).unwrap(),
        );
        assert!(d < 1e-6, "distance {d}");
        assert!(sample.max_angle_to_eigenspace < 1e-6);
    }

    #[test]
    fn invariant_point_stays_fixed() {
        let (path, gauge) = geodesic(&[0.09, 0.02, -0.05], 60);
        let tol = Tolerances::default();
        let mut v = CVec::zeros(3);
        v[1] = Complex64::new(1.0, 0.0);
        let sample = limit_set(&path, &gauge, &v, &RepDescriptor::Standard, &[1], &tol).unwrap();
        assert_eq!(sample.representatives.len(), 1);
        assert!(sample.diameter < 1e-10);
        let d = fs_distance(
            &sample.representatives[0],
            &ProjectivePoint::new(&v).unwrap(),
        );
        assert!(d < 1e-10);
    }

    #[test]
    fn synthetic_limit_set_lies_on_the_planted_orbit() {
        use crate::flows::{synth_path, SynthPathConfig};
        // Two levels with the largest gap the 2000-step float budget
        // allows, so the sampled points sit within 1e-3 of the limit
        // orbit from the first tail index on.
        let cfg = SynthPathConfig {
            dim: 4,
            spectrum: vec![0.0, -0.006],
            multiplicities: vec![1, 3],
            steps: 1500,
            gauge_angle: 0.5,
            noise_amplitude: 0.02,
            noise_decay: 2.0,
            rotate_frame: true,
            seed: 23,
        };
        let (path, truth) = synth_path(&cfg).unwrap();
        let std = StandardizedPath::from_path(&path).unwrap();
        let tol = Tolerances::default();
        let gauge = estimate_gauge(&std, &tol).unwrap();
        // Probe with a low-level admixture small enough that the dominant
        // transient has resolved by the first sampled tail index (the
        // pullback anchors the ratio at the final step, and it grows by
        // e^{gap·(N-i)} backwards).
        let v = truth.level_pullbacks[0].column(0).into_owned()
            + truth.level_pullbacks[1].column(0) * Complex64::new(4e-5, 2e-5);
        let sample =
            limit_set(&std, &gauge, &v, &RepDescriptor::Standard, &[7, 13], &tol).unwrap();
        // Planted orbit anchor: the final point of the path itself. The
        // estimator anchors its gauges at the last step, so the sampled
        // representatives live in ambient coordinates where the planted
        // limit orbit passes through [A_N v]; every tail representative
        // must sit on that K_Λ-orbit.
        let anchor = path.operators().last().unwrap() * &v;
        let _ = &truth.limit_gauge;
        for rep in &sample.representatives {
            let d = orbit_distance(
                rep.representative(),
                &anchor,
                &gauge.lambda,
                &RepDescriptor::Standard,
                tol.dim_cap,
            )
            .unwrap();
            assert!(d < 1e-3, "orbit distance {d:.3e}");
        }
        assert!(sample.max_angle_to_eigenspace < 1e-3);
    }

    #[test]
    fn bar_limit_of_weight_vector_is_itself() {
        let (path, gauge) = geodesic(&[0.09, 0.02, -0.05], 60);
        let tol = Tolerances::default();
        let filt = filtration(&path, &gauge, &tol).unwrap();
        let split = splitting(&path, &gauge, &filt, &tol).unwrap();
        let op = one_param(&split, &gauge.lambda).unwrap();
        let mut v = CVec::zeros(3);
        v[2] = Complex64::new(1.0, 0.5);
        let bar = bar_limit(&op, &gauge.lambda, &v, &RepDescriptor::Standard, &tol).unwrap();
        let d = fs_distance(&bar, &ProjectivePoint::new(&v).unwrap());
        assert!(d < 1e-9);
    }

    #[test]
    fn bar_limit_picks_dominant_component() {
        let (path, gauge) = geodesic(&[0.09, 0.02, -0.05], 60);
        let tol = Tolerances::default();
        let filt = filtration(&path, &gauge, &tol).unwrap();
        let split = splitting(&path, &gauge, &filt, &tol).unwrap();
        let op = one_param(&split, &gauge.lambda).unwrap();
        let mut v = CVec::zeros(3);
        v[0] = Complex64::new(0.3, 0.0);
        v[1] = Complex64::new(1.0, 0.0);
        let bar = bar_limit(&op, &gauge.lambda, &v, &RepDescriptor::Standard, &tol).unwrap();
        let mut top = CVec::zeros(3);
        top[0] = Complex64::new(1.0, 0.0);
        assert!(fs_distance(&bar, &ProjectivePoint::new(&top).unwrap()) < 1e-9);
    }

    #[test]
    fn bar_limit_matches_large_t_evaluation() {
        let (path, gauge) = geodesic(&[0.9, 0.2, -0.5], 60);
        let tol = Tolerances::default();
        let filt = filtration(&path, &gauge, &tol).unwrap();
        let split = splitting(&path, &gauge, &filt, &tol).unwrap();
        let op = one_param(&split, &gauge.lambda).unwrap();
        let mut rng = crate::util::Rng::seed_from_u64(111);
        let v = rng.gaussian_vector(3);
        let bar = bar_limit(&op, &gauge.lambda, &v, &RepDescriptor::Standard, &tol).unwrap();
        // Oracle: [e^{TΛ} C₀ v] at large T.
        let big = gauge.lambda.exp_t(60.0) * &op.c0 * &v;
        let d = fs_distance(&bar, &ProjectivePoint::new(&big).unwrap());
        assert!(d < 1e-6, "distance {d}");
    }

    #[test]
    fn bar_limit_is_lambda_fixed() {
        let (path, gauge) = geodesic(&[0.09, 0.02, -0.05], 60);
        let tol = Tolerances::default();
        let filt = filtration(&path, &gauge, &tol).unwrap();
        let split = splitting(&path, &gauge, &filt, &tol).unwrap();
        let op = one_param(&split, &gauge.lambda).unwrap();
        let mut rng = crate::util::Rng::seed_from_u64(112);
        let v = rng.gaussian_vector(3);
        let bar = bar_limit(&op, &gauge.lambda, &v, &RepDescriptor::Standard, &tol).unwrap();
        for &t in &[0.7, 2.0, 11.0] {
            let moved = gauge.lambda.exp_t(t) * bar.representative();
            let d = fs_distance_vectors(&moved, bar.representative()).unwrap();
            assert!(d < 1e-9, "t = {t}: moved by {d}");
        }
    }
}
