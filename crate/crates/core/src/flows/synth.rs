//! Synthetic gauged self-similar paths with planted ground truth.
//!
//! Transitions are built as `B_i = g_i e^Λ g_i^{-1} (I + E_i)` with a
//! rotating unitary gauge `g_i → g_∞` and Hermitian-balanced noise
//! `‖E_i‖ ≤ a·i^{-p}`, so the self-similarity condition holds by
//! construction when `p > 1`.

use super::FlowError;
use crate::linalg::{spectral_decompose, HermitianForm, HermitianGenerator, OperatorPath};
use crate::linalg::subspace::orthonormalize;
use crate::util::matfun::expm;
use crate::util::Rng;
use crate::CMat;
use num_complex::Complex64;

/// Configuration of the generator.
#[derive(Debug, Clone)]
pub struct SynthPathConfig {
    pub dim: usize,
    /// Distinct eigenvalues of the planted Λ, strictly decreasing.
    pub spectrum: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub steps: usize,
    /// Limit rotation angle of the gauge schedule `g_i = exp(θ(1-1/i) K)`.
    pub gauge_angle: f64,
    /// Noise amplitude `a`; each `B_i` is perturbed by `a·i^{-p}` in
    /// operator norm.
    pub noise_amplitude: f64,
    /// Noise decay exponent `p`. Convergence of the construction needs
    /// `p > 1`; smaller values are accepted to produce divergent paths on
    /// purpose and are flagged in the ground truth.
    pub noise_decay: f64,
    /// Conjugate the planted Λ by a random unitary frame.
    pub rotate_frame: bool,
    pub seed: u64,
}

impl SynthPathConfig {
    pub fn validate(&self) -> Result<(), FlowError> {
        if self.dim == 0 {
            return Err(FlowError::ConfigInvalid("dim must be positive".into()));
        }
        if self.spectrum.is_empty() || self.spectrum.len() != self.multiplicities.len() {
            return Err(FlowError::ConfigInvalid(
                "spectrum and multiplicities must be nonempty and aligned".into(),
            ));
        }
        if self.multiplicities.iter().sum::<usize>() != self.dim {
            return Err(FlowError::ConfigInvalid(
                "multiplicities must sum to dim".into(),
            ));
        }
        if self.spectrum.windows(2).any(|w| w[1] >= w[0]) {
            return Err(FlowError::ConfigInvalid(
                "spectrum must be strictly decreasing".into(),
            ));
        }
        if self.steps < 2 {
            return Err(FlowError::ConfigInvalid("need at least 2 steps".into()));
        }
        if !(self.noise_amplitude >= 0.0 && self.noise_amplitude < 1.0) {
            return Err(FlowError::ConfigInvalid(
                "noise amplitude must lie in [0, 1)".into(),
            ));
        }
        if !(self.noise_decay > 0.0) {
            return Err(FlowError::ConfigInvalid(
                "noise decay exponent must be positive".into(),
            ));
        }
        // IEEE range budget: path entries scale like e^{spread·steps} and
        // transition factoring needs cond(A_i)·eps to stay well below the
        // analysis tolerances.
        let spread = self.spectrum.first().unwrap() - self.spectrum.last().unwrap();
        let lam_max = self
            .spectrum
            .iter()
            .fold(0.0f64, |a, &x| a.max(x.abs()));
        if (spread.max(lam_max)) * self.steps as f64 > 600.0 {
            return Err(FlowError::ConfigInvalid(format!(
                "spectral spread {spread:.3} over {} steps exceeds the floating-point budget (spread × steps ≤ 600)",
                self.steps
            )));
        }
        Ok(())
    }
}

/// What the generator planted, for recovery tests.
#[derive(Debug, Clone)]
pub struct SynthGroundTruth {
    /// Λ in the planted frame.
    pub lambda: HermitianGenerator,
    /// Limit gauge `g_∞ = exp(θ K)`.
    pub limit_gauge: CMat,
    /// Filtration subspaces `V_s` pulled back to step 0 with the exact
    /// final gauge, `s = 0..r`.
    pub filtration: Vec<CMat>,
    /// Exact splitting seeds: pullbacks of the upper sums at the final step.
    pub upper_pullbacks: Vec<CMat>,
    /// Pullbacks of each single eigenspace at the final step; generic
    /// vectors of level s carry the planted weight λ_s over any finite
    /// horizon.
    pub level_pullbacks: Vec<CMat>,
    /// Whether the noise decay guarantees convergence (`p > 1`).
    pub converged: bool,
}

/// Generate the path and its ground truth record.
pub fn synth_path(cfg: &SynthPathConfig) -> Result<(OperatorPath, SynthGroundTruth), FlowError> {
    cfg.validate()?;
    let n = cfg.dim;
    let mut rng = Rng::seed_from_u64(cfg.seed);

    // Planted generator.
    let frame = if cfg.rotate_frame {
        rng.unitary(n)
    } else {
        CMat::identity(n, n)
    };
    let mut diag = CMat::zeros(n, n);
    let mut at = 0;
    for (s, &m) in cfg.multiplicities.iter().enumerate() {
        for _ in 0..m {
            diag[(at, at)] = Complex64::new(cfg.spectrum[s], 0.0);
            at += 1;
        }
    }
    let lam_mat = &frame * &diag * frame.adjoint();
    let lambda = spectral_decompose(&lam_mat, None)?;
    let exp_lam = lambda.exp_t(1.0);

    // Gauge schedule: rotation in a fixed random plane.
    let (pa, pb) = {
        let a = rng.usize_below(n);
        let mut b = rng.usize_below(n);
        if n > 1 {
            while b == a {
                b = rng.usize_below(n);
            }
        }
        (a.min(b), a.max(b))
    };
    let gauge_at = |theta: f64| -> CMat {
        let mut k = CMat::zeros(n, n);
        if n > 1 {
            k[(pa, pb)] = Complex64::new(theta, 0.0);
            k[(pb, pa)] = Complex64::new(-theta, 0.0);
        }
        expm(&k)
    };

    let mut ops = Vec::with_capacity(cfg.steps + 1);
    ops.push(CMat::identity(n, n));
    let mut a_i = CMat::identity(n, n);
    let mut gauges_true = Vec::with_capacity(cfg.steps + 1);
    gauges_true.push(CMat::identity(n, n));
    for i in 1..=cfg.steps {
        let theta = cfg.gauge_angle * (1.0 - 1.0 / i as f64);
        let g = gauge_at(theta);
        let mut b = &g * &exp_lam * g.adjoint();
        if cfg.noise_amplitude > 0.0 {
            let scale = cfg.noise_amplitude * (i as f64).powf(-cfg.noise_decay);
            let noise = rng.hermitian_unit(n) * Complex64::new(scale, 0.0);
            b = &b * (CMat::identity(n, n) + noise);
        }
        a_i = &b * &a_i;
        ops.push(a_i.clone());
        gauges_true.push(g);
    }

    // Ground truth filtration: exact-gauge pullbacks at the final step.
    let g_last = gauges_true.last().unwrap().clone();
    let a_last = ops.last().unwrap().clone();
    let r = lambda.levels();
    let mut filtration = Vec::with_capacity(r);
    let mut upper_pullbacks = Vec::with_capacity(r);
    let mut level_pullbacks = Vec::with_capacity(r);
    for s in 0..r {
        if s == 0 {
            filtration.push(CMat::identity(n, n));
        } else {
            let span = lambda.eigenspace_span(s..r);
            filtration.push(normalized_pullback(&a_last, &g_last, &span));
        }
        let upper = lambda.eigenspace_span(0..s + 1);
        upper_pullbacks.push(normalized_pullback(&a_last, &g_last, &upper));
        let single = lambda.eigenspace(s);
        level_pullbacks.push(normalized_pullback(&a_last, &g_last, &single));
    }

    let times: Vec<f64> = (0..=cfg.steps).map(|i| i as f64).collect();
    let path = OperatorPath::new(times, ops, HermitianForm::identity(n))?;
    Ok((
        path,
        SynthGroundTruth {
            lambda,
            limit_gauge: gauge_at(cfg.gauge_angle),
            filtration,
            upper_pullbacks,
            level_pullbacks,
            converged: cfg.noise_decay > 1.0,
        },
    ))
}

fn normalized_pullback(a: &CMat, g: &CMat, span: &CMat) -> CMat {
    let moved = g * span;
    let mut solved = a.clone().lu().solve(&moved).expect("invertible");
    for j in 0..solved.ncols() {
        let norm = solved.column(j).norm();
        if norm > 0.0 {
            let col = solved.column(j) / Complex64::new(norm, 0.0);
            solved.set_column(j, &col);
        }
    }
    orthonormalize(&solved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{estimate_gauge, filtration, splitting, StandardizedPath};
    use crate::config::Tolerances;
    use crate::linalg::subspace::max_principal_angle;

    fn base_cfg() -> SynthPathConfig {
        SynthPathConfig {
            dim: 5,
            spectrum: vec![0.006, 0.001, -0.004],
            multiplicities: vec![1, 2, 2],
            steps: 1200,
            gauge_angle: 0.7,
            noise_amplitude: 0.0,
            noise_decay: 2.0,
            rotate_frame: true,
            seed: 7,
        }
    }

    #[test]
    fn noiseless_identity_gauge_is_exact_geodesic() {
        let mut cfg = base_cfg();
        cfg.gauge_angle = 0.0;
        cfg.rotate_frame = false;
        cfg.steps = 50;
        let (path, truth) = synth_path(&cfg).unwrap();
        for (i, a) in path.operators().iter().enumerate() {
            let expect = truth.lambda.exp_t(i as f64);
            assert!((a - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn gauged_path_recovers_planted_spectrum() {
        let cfg = base_cfg();
        let (path, truth) = synth_path(&cfg).unwrap();
        let std = StandardizedPath::from_path(&path).unwrap();
        let est = estimate_gauge(&std, &Tolerances::default()).unwrap();
        assert_eq!(est.lambda.levels(), 3);
        for (a, b) in est.lambda.spectrum().iter().zip(truth.lambda.spectrum()) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn noisy_path_recovers_filtration_against_ground_truth() {
        let mut cfg = base_cfg();
        cfg.noise_amplitude = 0.1;
        cfg.steps = 2000;
        let (path, truth) = synth_path(&cfg).unwrap();
        let std = StandardizedPath::from_path(&path).unwrap();
        let tol = Tolerances::default();
        let est = estimate_gauge(&std, &tol).unwrap();
        for (a, b) in est.lambda.spectrum().iter().zip(truth.lambda.spectrum()) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        let filt = filtration(&std, &est, &tol).unwrap();
        for s in 1..truth.filtration.len() {
            let angle = max_principal_angle(&filt.subspaces[s], &truth.filtration[s]);
            assert!(angle < 1e-4, "level {s}: angle {angle:.3e}");
        }
        // Splitting succeeds with the right dimensions.
        let split = splitting(&std, &est, &filt, &tol).unwrap();
        let ws = split.splitting.unwrap();
        assert_eq!(
            ws.iter().map(|w| w.ncols()).collect::<Vec<_>>(),
            vec![1, 2, 2]
        );
    }

    #[test]
    fn divergent_noise_fails_estimation() {
        let mut cfg = base_cfg();
        cfg.noise_amplitude = 0.4;
        cfg.noise_decay = 0.5;
        cfg.steps = 400;
        let (path, truth) = synth_path(&cfg).unwrap();
        assert!(!truth.converged);
        let std = StandardizedPath::from_path(&path).unwrap();
        let result = estimate_gauge(&std, &Tolerances::default());
        assert!(result.is_err(), "divergent noise must not pass the gate");
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let mut cfg = base_cfg();
        cfg.multiplicities = vec![1, 1, 1];
        assert!(matches!(
            synth_path(&cfg),
            Err(FlowError::ConfigInvalid(_))
        ));
        let mut cfg = base_cfg();
        cfg.spectrum = vec![2.0, 1.0, 0.0];
        cfg.steps = 2000;
        assert!(matches!(
            synth_path(&cfg),
            Err(FlowError::ConfigInvalid(_))
        ));
    }
}
