//! The end-to-end Gram pipeline: metrics → Gram path → parallel lift →
//! gauge/weights, with quotient-metric diagnostics on the rational normal
//! curve presentation.

use super::gram::gram_from_metric;
use super::p1::{calabi_energy, krf_p1, KrfRun, SymmetricMetricP1};
use super::FlowError;
use crate::asymptotics::{estimate_gauge, GaugeEstimate, StandardizedPath, WeightEstimate};
use crate::config::Tolerances;
use crate::linalg::{parallel_lift, HermitianForm, OperatorPath};
use crate::reps::{induce, RepDescriptor};
use crate::ringfilt::{h2_check, GradedRingPresentation, H2Report, SparsePoly};
use crate::{CMat, CVec};
use num_complex::Complex64;

/// Gram-path analysis: the lift, the gauge estimate, and per-section
/// weights in the standard representation.
pub struct GramAnalysis {
    pub path: OperatorPath,
    pub standardized: StandardizedPath,
    pub gauge: GaugeEstimate,
    pub section_weights: Vec<WeightEstimate>,
    pub case_ii: bool,
}

/// Lift a Gram path and run the asymptotic analysis on it, measuring the
/// weight of every reference basis section.
pub fn analyze_gram_path(
    times: &[f64],
    grams: &[HermitianForm],
    tol: &Tolerances,
) -> Result<GramAnalysis, FlowError> {
    let path = parallel_lift(times, grams, tol.lift_tol)?;
    let standardized = StandardizedPath::from_path(&path)?;
    let gauge = estimate_gauge(&standardized, tol)?;
    let dim = path.dim();
    let mut section_weights = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = CVec::zeros(dim);
        v[j] = Complex64::new(1.0, 0.0);
        // Sections live in the original coordinates; transport to the
        // standardized frame the analysis works in.
        let v_std = standardized.to_standard() * v;
        let est = crate::asymptotics::weight(
            &standardized,
            &gauge,
            &v_std,
            &RepDescriptor::Standard,
            tol,
        )?;
        section_weights.push(est);
    }
    let case_ii = gauge.case_ii;
    Ok(GramAnalysis {
        path,
        standardized,
        gauge,
        section_weights,
        case_ii,
    })
}

/// Synthetic pullback Gram path: `H_t = e^{tΛ'} H₀ e^{tΛ'}` for a diagonal
/// generator, sampled at unit times. The planted weight of section `j` is
/// `λ'_j`.
pub fn pullback_gram_path(
    h0_diag: &[f64],
    lambda_diag: &[f64],
    t_max: usize,
) -> Result<(Vec<f64>, Vec<HermitianForm>), FlowError> {
    if h0_diag.len() != lambda_diag.len() {
        return Err(FlowError::ConfigInvalid(
            "H0 and Λ' must have equal dimension".into(),
        ));
    }
    let mut times = Vec::with_capacity(t_max + 1);
    let mut grams = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        let entries: Vec<f64> = h0_diag
            .iter()
            .zip(lambda_diag)
            .map(|(&h, &l)| h * (2.0 * l * t as f64).exp())
            .collect();
        times.push(t as f64);
        grams.push(HermitianForm::from_diagonal(&entries)?);
    }
    Ok((times, grams))
}

/// The rational normal curve of degree `2r`: the image of ℙ¹ under the
/// monomial sections of `O(2r)`, presented by the 2×2 minors of the Hankel
/// matrix (quadric generators), with Hilbert function `2rk + 1`.
pub fn rational_normal_curve_ring(
    r: usize,
    trunc: usize,
) -> Result<GradedRingPresentation, FlowError> {
    let m = 2 * r + 1;
    let mut gens = Vec::new();
    // Hankel minors: x_i x_j - x_{i+1} x_{j-1} for j - i >= 2.
    for i in 0..m {
        for j in (i + 2)..m {
            let mut t1 = vec![0u16; m];
            t1[i] += 1;
            t1[j] += 1;
            let mut t2 = vec![0u16; m];
            t2[i + 1] += 1;
            t2[j - 1] += 1;
            gens.push(SparsePoly::new(vec![
                (t1, Complex64::new(1.0, 0.0)),
                (t2, Complex64::new(-1.0, 0.0)),
            ])?);
        }
    }
    let hilbert: Vec<usize> = (0..=trunc).map(|k| 2 * r * k + 1).collect();
    Ok(GradedRingPresentation::new(m, gens, trunc, Some(hilbert))?)
}

/// The multiplication map `ι_k : Sym^k R₁ → R_k` for the rational normal
/// curve, in the orthonormalized monomial bases: monomial products map to
/// the section of the summed S¹-weight with the combinatorial factor
/// `sqrt(k!/a!)`.
pub fn iota_matrix(r: usize, k: usize) -> CMat {
    let m = 2 * r + 1;
    let monos = crate::reps::monomials_desc_grlex_pub(m, k);
    let target_dim = 2 * r * k + 1;
    let mut iota = CMat::zeros(target_dim, monos.len());
    let fact = |n: u16| (1..=n as u64).map(|i| i as f64).product::<f64>();
    let k_fact: f64 = (1..=k as u64).map(|i| i as f64).product();
    for (col, mono) in monos.iter().enumerate() {
        let row: usize = mono
            .iter()
            .enumerate()
            .map(|(var, &e)| var * e as usize)
            .sum();
        let a_fact: f64 = mono.iter().map(|&e| fact(e)).product();
        iota[(row, col)] = Complex64::new((k_fact / a_fact).sqrt(), 0.0);
    }
    iota
}

/// The ideal basis of the presentation transported into the orthonormalized
/// monomial coordinates that `iota_matrix` and the induced sym-Grams use:
/// plain coefficients rescale by `sqrt(a!/k!)` per monomial row.
pub fn ideal_basis_orthonormal(ring: &GradedRingPresentation, k: usize) -> CMat {
    let plain = ring.ideal_basis_matrix(k);
    let monos = crate::reps::monomials_desc_grlex_pub(ring.num_vars(), k);
    let fact = |n: u16| (1..=n as u64).map(|i| i as f64).product::<f64>();
    let k_fact: f64 = (1..=k as u64).map(|i| i as f64).product();
    let mut scaled = plain;
    for (row, mono) in monos.iter().enumerate() {
        let a_fact: f64 = mono.iter().map(|&e| fact(e)).product();
        let s = Complex64::new((a_fact / k_fact).sqrt(), 0.0);
        for j in 0..scaled.ncols() {
            scaled[(row, j)] *= s;
        }
    }
    crate::linalg::subspace::orthonormalize(&scaled)
}

/// Everything the ℙ¹ pipeline measures.
pub struct PipelineReportData {
    pub run: KrfRun,
    pub analysis: GramAnalysis,
    /// `(k, report)` for each quotient degree checked.
    pub h2: Vec<(usize, H2Report)>,
    pub calabi_initial: f64,
    pub calabi_final: f64,
    /// Running ‖Λ̂‖ estimates from path prefixes (time, value).
    pub lambda_norm_series: Vec<(f64, f64)>,
    pub r: usize,
    pub trunc: usize,
}

/// Run the flow, build the Gram path on `H⁰(O(2r))`, lift and analyze it,
/// and check the quotient-metric equivalence for degrees `2..=min(3, K)`.
pub fn pipeline_p1(
    initial: &SymmetricMetricP1,
    t_end: f64,
    r: usize,
    trunc: usize,
    tol: &Tolerances,
) -> Result<PipelineReportData, FlowError> {
    if r == 0 || r > 4 {
        return Err(FlowError::ConfigInvalid("r must lie in 1..=4".into()));
    }
    if trunc < 2 {
        return Err(FlowError::ConfigInvalid("K must be at least 2".into()));
    }
    let run = krf_p1(initial, t_end, 1e-3)?;
    let grams: Vec<HermitianForm> = run
        .metrics
        .iter()
        .map(|m| gram_from_metric(m, r))
        .collect::<Result<_, _>>()?;
    let analysis = analyze_gram_path(&run.times, &grams, tol)?;

    // Quotient-metric diagnostics on the rational normal curve.
    let chol_cap = 60_000usize;
    let mut h2 = Vec::new();
    let ring = rational_normal_curve_ring(r, trunc)?;
    for k in 2..=trunc.min(3) {
        let iota = iota_matrix(r, k);
        let ik = ideal_basis_orthonormal(&ring, k);
        let sym_grams: Vec<CMat> = grams
            .iter()
            .map(|g| {
                let t = g.standardizing_transform();
                let st = induce(&RepDescriptor::Sym(k), &t, chol_cap)?;
                Ok(st.adjoint() * st)
            })
            .collect::<Result<_, FlowError>>()?;
        let l2_grams: Vec<CMat> = run
            .metrics
            .iter()
            .map(|m| gram_from_metric(m, r * k).map(|f| f.gram().clone()))
            .collect::<Result<_, _>>()?;
        let report = h2_check(&sym_grams, &l2_grams, &iota, Some(&ik))?;
        h2.push((k, report));
    }

    // Running generator-norm estimates over path prefixes.
    let mut lambda_norm_series = Vec::new();
    for t in (20..=run.times.len() - 1).step_by(5) {
        let prefix_times = &run.times[..=t];
        let prefix = &grams[..=t];
        if let Ok(path) = parallel_lift(prefix_times, prefix, tol.lift_tol) {
            if let Ok(std) = StandardizedPath::from_path(&path) {
                if let Ok(g) = estimate_gauge(&std, tol) {
                    lambda_norm_series.push((run.times[t], g.lambda.norm()));
                }
            }
        }
    }

    let calabi_initial = calabi_energy(initial)?;
    let calabi_final = calabi_energy(run.metrics.last().unwrap())?;

    Ok(PipelineReportData {
        run,
        analysis,
        h2,
        calabi_initial,
        calabi_final,
        lambda_norm_series,
        r,
        trunc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_round_pipeline_is_case_ii_with_identity_lift() {
        let tol = Tolerances::default();
        let data = pipeline_p1(&SymmetricMetricP1::round(), 25.0, 1, 2, &tol).unwrap();
        assert!(data.analysis.case_ii);
        assert!(data.analysis.gauge.lambda.norm() < 1e-8);
        for a in data.analysis.path.operators() {
            assert!((a - CMat::identity(3, 3)).norm() < 1e-7);
        }
        for w in &data.analysis.section_weights {
            assert!(w.snapped.abs() < 1e-8);
        }
    }

    #[test]
    fn pullback_path_recovers_planted_diagonal_weights() {
        let tol = Tolerances::default();
        let h0 = [1.0, 0.7, 1.3];
        let lam = [0.08, 0.02, -0.06];
        let (times, grams) = pullback_gram_path(&h0, &lam, 40).unwrap();
        let analysis = analyze_gram_path(&times, &grams, &tol).unwrap();
        assert!(!analysis.case_ii);
        for (est, &planted) in analysis.section_weights.iter().zip(&lam) {
            assert!(
                (est.snapped - planted).abs() < 5e-8,
                "snapped {} vs planted {}",
                est.snapped,
                planted
            );
        }
        // Spectrum recovered exactly after snapping.
        let mut spec = analysis.gauge.lambda.spectrum().to_vec();
        spec.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in spec.iter().zip(&[0.08, 0.02, -0.06]) {
            assert!((a - b).abs() < 5e-8);
        }
    }

    #[test]
    fn rational_normal_curve_has_expected_hilbert_function() {
        for r in 1..=2usize {
            let ring = rational_normal_curve_ring(r, 3).unwrap();
            for k in 0..=3 {
                assert_eq!(ring.rk_dim(k), 2 * r * k + 1, "r={r} k={k}");
            }
        }
    }

    #[test]
    fn iota_annihilates_the_ideal() {
        let r = 1;
        let ring = rational_normal_curve_ring(r, 3).unwrap();
        for k in 2..=3 {
            let iota = iota_matrix(r, k);
            let ik = ideal_basis_orthonormal(&ring, k);
            assert!((iota * ik).norm() < 1e-12, "degree {k}");
        }
    }
}
