//! Estimation of the limit generator Λ and the unitary gauges.
//!
//! On the tail of the path each transition factors as
//! `B_i ≈ g_i e^Λ g_i^{-1}` with unitary `g_i` converging to a limit. The
//! estimator takes the matrix logarithm of the positive polar part of each
//! tail transition, aligns the logarithms by sorting eigenvalues, averages
//! the aligned spectra, snaps to clustered levels, and reconstructs the
//! gauges by a smooth intertwiner recursion anchored at the final step.

use super::path::StandardizedPath;
use super::AsymError;
use crate::config::Tolerances;
use crate::linalg::{polar_positive_part, HermitianForm, HermitianGenerator};
use crate::CMat;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;

/// Raw descending eigenpairs of a Hermitian matrix, no level clustering.
struct EigenPairs {
    vals: Vec<f64>,
    basis: CMat,
}

fn eigen_pairs_desc(h: &CMat) -> EigenPairs {
    let n = h.nrows();
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut basis = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        basis.set_column(col, &eig.eigenvectors.column(i));
    }
    EigenPairs { vals, basis }
}

/// Estimated generator, gauges, and the residuals certifying the
/// self-similarity condition on the tail.
#[derive(Debug, Clone)]
pub struct GaugeEstimate {
    /// Λ in standard coordinates, frame anchored at the last tail step.
    pub lambda: HermitianGenerator,
    /// Unitary gauge per sample; `gauges[0] = Id`, pre-tail entries are
    /// frozen at the first tail value.
    pub gauges: Vec<CMat>,
    /// `max_tail ‖B_i g_i e^{-Λ} g_i^{-1} - Id‖`.
    pub residual_star: f64,
    /// `max_tail ‖g_{i-1}^{-1} g_i - Id‖`.
    pub residual_gauge: f64,
    pub tail_start: usize,
    /// Per-tail-index star residuals (diagnostic curve).
    pub residual_curve: Vec<f64>,
    /// `‖Λ‖ < lambda_zero_tol`.
    pub case_ii: bool,
}

impl GaugeEstimate {
    /// Gauge at step `i` (unitary in standard coordinates).
    pub fn gauge(&self, i: usize) -> &CMat {
        &self.gauges[i]
    }
}

/// Estimate Λ and the gauges from the tail of a standardized path.
///
/// `tail_fraction` of the steps (at least 4) form the tail. Fails with
/// `NonConvergent` when the condition-(*) residuals exceed `star_tol`.
pub fn estimate_gauge(
    path: &StandardizedPath,
    tol: &Tolerances,
) -> Result<GaugeEstimate, AsymError> {
    let n_steps = path.steps();
    if n_steps < 20 {
        return Err(AsymError::TooShort {
            len: n_steps,
            need: 20,
        });
    }
    let dim = path.dim();
    let tail_len = ((n_steps as f64 * tol.tail_fraction).ceil() as usize).clamp(4, n_steps);
    let tail_start = n_steps + 1 - tail_len; // first tail transition index
    let std_form = HermitianForm::identity(dim);

    // Pass 1: aligned logarithms of positive polar parts over the tail.
    let mut logs: Vec<EigenPairs> = Vec::with_capacity(tail_len);
    let mut sorted_spectra: Vec<Vec<f64>> = Vec::with_capacity(tail_len);
    for i in tail_start..=n_steps {
        let b = path.transition(i);
        let (_, p) = polar_positive_part(&b, &std_form)?;
        let pairs = eigen_pairs_desc(&p);
        // descending in p, hence descending in log
        let evals: Vec<f64> = pairs.vals.iter().map(|&v| v.max(1e-300).ln()).collect();
        sorted_spectra.push(evals);
        logs.push(pairs);
    }

    // Average the aligned spectra and cluster into levels. The cluster
    // tolerance adapts to the cross-step spread of each aligned
    // eigenvalue: levels closer than the measurement noise cannot be
    // resolved and must merge rather than flip assignments step to step.
    let mean_spectrum: Vec<f64> = (0..dim)
        .map(|j| sorted_spectra.iter().map(|s| s[j]).sum::<f64>() / tail_len as f64)
        .collect();
    let noise_scale = (0..dim)
        .map(|j| {
            let mean = mean_spectrum[j];
            let var = sorted_spectra
                .iter()
                .map(|s| (s[j] - mean).powi(2))
                .sum::<f64>()
                / tail_len as f64;
            var.sqrt()
        })
        .fold(0.0f64, f64::max);
    let scale = mean_spectrum.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
    let cluster_tol = (tol.cluster_tol_factor * scale).max(6.0 * noise_scale);
    let sizes = crate::linalg::cluster_levels(&mean_spectrum, cluster_tol)?;
    let levels: Vec<f64> = {
        let mut out = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for &m in &sizes {
            out.push(mean_spectrum[at..at + m].iter().sum::<f64>() / m as f64);
            at += m;
        }
        out
    };

    // Pass 2: per-step snapped generators Λ_i = Σ_s λ_s Π_{i,s}.
    let mut snapped: Vec<Option<HermitianGenerator>> = Vec::with_capacity(tail_len);
    for pairs in &logs {
        snapped.push(snap_to_levels(pairs, &levels, &sizes));
    }

    // Λ in the frame of the last tail step.
    let lambda = snapped
        .last()
        .cloned()
        .flatten()
        .ok_or_else(|| AsymError::NonConvergent {
            residual_star: f64::INFINITY,
            residual_gauge: f64::INFINITY,
            tol: tol.star_tol,
            residual_curve: vec![f64::INFINITY],
        })?;

    // Star residuals: ‖B_i e^{-Λ_i} - Id‖ with Λ_i in its own frame.
    let eye = CMat::identity(dim, dim);
    let mut residual_curve = Vec::with_capacity(tail_len);
    for (offset, snap) in snapped.iter().enumerate() {
        let i = tail_start + offset;
        let r = match snap {
            Some(gen) => (path.transition(i) * gen.exp_t(-1.0) - &eye).norm(),
            None => f64::INFINITY,
        };
        residual_curve.push(r);
    }
    let residual_star = residual_curve.iter().cloned().fold(0.0f64, f64::max);

    // Gauges: anchored at the end (g_N = Id), recursed backwards through
    // the nearest intertwiner, frozen before the tail, g_0 = Id.
    let n_samples = n_steps + 1;
    let mut gauges = vec![eye.clone(); n_samples];
    let mut residual_gauge = 0.0f64;
    let mut ok = true;
    for i in (tail_start..=n_steps).rev() {
        if i == n_steps {
            continue;
        }
        let (g, defect) = match (&snapped[i - tail_start], &gauges[i + 1]) {
            (Some(gen_i), g_next) => {
                match nearest_intertwiner(gen_i, &lambda, g_next) {
                    Some(g) => {
                        let inc = (g.adjoint() * g_next - &eye).norm();
                        (g, inc)
                    }
                    None => (g_next.clone(), f64::INFINITY),
                }
            }
            (None, g_next) => (g_next.clone(), f64::INFINITY),
        };
        residual_gauge = residual_gauge.max(defect);
        if !defect.is_finite() {
            ok = false;
        }
        gauges[i] = g;
    }
    for i in 1..tail_start {
        gauges[i] = gauges[tail_start].clone();
    }
    gauges[0] = eye.clone();

    let case_ii = lambda.norm() < tol.lambda_zero_tol;

    if !ok || residual_star > tol.star_tol || residual_gauge > tol.star_tol {
        return Err(AsymError::NonConvergent {
            residual_star,
            residual_gauge,
            tol: tol.star_tol,
            residual_curve,
        });
    }

    Ok(GaugeEstimate {
        lambda,
        gauges,
        residual_star,
        residual_gauge,
        tail_start,
        residual_curve,
        case_ii,
    })
}

/// Regroup eigenpairs of a positive part by nearest log-level; `None` when
/// the counts do not match the level multiplicities.
fn snap_to_levels(
    pairs: &EigenPairs,
    levels: &[f64],
    sizes: &[usize],
) -> Option<HermitianGenerator> {
    let dim = pairs.basis.nrows();
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); levels.len()];
    for (col, &v) in pairs.vals.iter().enumerate() {
        let logv = v.max(1e-300).ln();
        let (mut best, mut best_d) = (0usize, f64::INFINITY);
        for (s, &l) in levels.iter().enumerate() {
            let d = (logv - l).abs();
            if d < best_d {
                best_d = d;
                best = s;
            }
        }
        assignment[best].push(col);
    }
    for (s, cols) in assignment.iter().enumerate() {
        if cols.len() != sizes[s] {
            return None;
        }
    }
    let mut basis = CMat::zeros(dim, dim);
    let mut at = 0;
    for cols in &assignment {
        for &c in cols {
            basis.set_column(at, &pairs.basis.column(c));
            at += 1;
        }
    }
    HermitianGenerator::from_parts(levels.to_vec(), sizes.to_vec(), basis).ok()
}

/// Unitary `g` with `Λ_i = g Λ g^{-1}` closest to `g_ref`: project `g_ref`
/// onto the intertwiner space blockwise, then take the unitary polar
/// factor. Returns `None` if the projection is singular.
fn nearest_intertwiner(
    gen_i: &HermitianGenerator,
    lambda: &HermitianGenerator,
    g_ref: &CMat,
) -> Option<CMat> {
    let dim = lambda.dim();
    let mut x = CMat::zeros(dim, dim);
    for s in 0..lambda.levels() {
        let pi_i = gen_i.projector(s);
        let pi_l = lambda.projector(s);
        x += pi_i * g_ref * pi_l;
    }
    if x.clone().lu().determinant().norm() < 1e-12 {
        return None;
    }
    crate::linalg::newton_unitary_factor_pub(&x).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{spectral_decompose, HermitianForm, OperatorPath};
    use crate::util::matfun::expm;
    use crate::util::Rng;

    fn geodesic_path(lam: &HermitianGenerator, steps: usize) -> StandardizedPath {
        let n = lam.dim();
        let times: Vec<f64> = (0..=steps).map(|i| i as f64).collect();
        let ops: Vec<CMat> = (0..=steps).map(|i| lam.exp_t(i as f64)).collect();
        let path = OperatorPath::new(times, ops, HermitianForm::identity(n)).unwrap();
        StandardizedPath::from_path(&path).unwrap()
    }

    #[test]
    fn geodesic_recovers_generator_exactly() {
        let mut rng = Rng::seed_from_u64(90);
        let h = rng.hermitian_unit(4) * Complex64::new(0.05, 0.0);
        let lam = spectral_decompose(&h, None).unwrap();
        let path = geodesic_path(&lam, 40);
        let est = estimate_gauge(&path, &Tolerances::default()).unwrap();
        assert!((est.lambda.matrix() - lam.matrix()).norm() < 1e-10);
        assert!(est.residual_star < 1e-12);
        assert!(est.residual_gauge < 1e-12);
        for g in &est.gauges {
            assert!((g - CMat::identity(4, 4)).norm() < 1e-10);
        }
    }

    #[test]
    fn random_unitary_path_is_nonconvergent() {
        let mut rng = Rng::seed_from_u64(91);
        let n = 3;
        let mut ops = vec![CMat::identity(n, n)];
        for _ in 0..40 {
            let u = rng.unitary(n);
            let prev = ops.last().unwrap().clone();
            ops.push(u * prev);
        }
        let times: Vec<f64> = (0..=40).map(|i| i as f64).collect();
        let path = OperatorPath::new(times, ops, HermitianForm::identity(n)).unwrap();
        let std = StandardizedPath::from_path(&path).unwrap();
        let err = estimate_gauge(&std, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, AsymError::NonConvergent { .. }));
    }

    #[test]
    fn short_paths_are_refused() {
        let lam = spectral_decompose(&(CMat::identity(2, 2) * Complex64::new(0.2, 0.0)), None)
            .unwrap();
        let path = geodesic_path(&lam, 10);
        assert!(matches!(
            estimate_gauge(&path, &Tolerances::default()),
            Err(AsymError::TooShort { .. })
        ));
    }

    #[test]
    fn fixed_conjugated_geodesic_recovers_spectrum() {
        // A_i = (g e^Λ g^{-1})^i for a fixed unitary g: condition (*) with
        // constant gauge.
        let mut rng = Rng::seed_from_u64(92);
        let spec = [0.08f64, 0.02, -0.05];
        let mut diag = CMat::zeros(3, 3);
        for (i, &s) in spec.iter().enumerate() {
            diag[(i, i)] = Complex64::new(s, 0.0);
        }
        let g = rng.unitary(3);
        let lam_mat = &g * &diag * g.adjoint();
        let b = expm(&lam_mat);
        let mut ops = vec![CMat::identity(3, 3)];
        for _ in 0..60 {
            let prev = ops.last().unwrap().clone();
            ops.push(&b * prev);
        }
        let times: Vec<f64> = (0..=60).map(|i| i as f64).collect();
        let path = OperatorPath::new(times, ops, HermitianForm::identity(3)).unwrap();
        let std = StandardizedPath::from_path(&path).unwrap();
        let est = estimate_gauge(&std, &Tolerances::default()).unwrap();
        for (a, b) in est.lambda.spectrum().iter().zip(&spec) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(!est.case_ii);
    }
}
