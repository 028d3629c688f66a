//! S¹-symmetric normalized Kähler-Ricci flow on ℙ¹, reduced to one spatial
//! dimension.
//!
//! Coordinates: the round metric's moment map `x₀ = tanh(s)` compactifies
//! the cylinder coordinate `s`; the state is the Kähler potential `φ`
//! relative to the round metric on a uniform x₀ grid. The metric
//! coefficient is `V = 1 + ½ L φ` with the Legendre-type operator
//! `L = d/dx₀ ((1-x₀²) d/dx₀)`, the round metric is `V ≡ 1`, and the flow
//! is `∂φ/∂t = log V(φ) + φ` (the round metric is Kähler-Einstein, so its
//! Ricci potential vanishes). Scalar curvature is
//! `S = 2 - (2/V)(V - 1 + ½ L log V)`; the area `2π ∫ V dx₀ = 4π` is fixed
//! by the potential formulation. The additive gauge of `φ` is pinned after
//! every step by the volume normalization `∫ e^{-φ} dx₀ = 2`.

use super::FlowError;
use crate::util::quad::gregory4;
use nalgebra::{DMatrix, DVector};

/// Grid size used for the 1-D reduction.
pub const P1_GRID: usize = 256;

type RVec = DVector<f64>;
type RMat = DMatrix<f64>;

/// Discretization of the interval [-1, 1]: grid, 4th-order derivative, and
/// the Legendre-type operator `L`.
#[derive(Debug, Clone)]
struct Grid {
    n: usize,
    h: f64,
    x: Vec<f64>,
    l_op: RMat,
}

impl Grid {
    fn new(n: usize) -> Self {
        let h = 2.0 / (n - 1) as f64;
        let x: Vec<f64> = (0..n).map(|i| -1.0 + i as f64 * h).collect();
        let d1 = first_derivative_matrix(n, h);
        // L = D1 · diag(1-x²) · D1
        let mut mid = d1.clone();
        for i in 0..n {
            let m = 1.0 - x[i] * x[i];
            for j in 0..n {
                mid[(i, j)] = m * d1[(i, j)];
            }
        }
        let l_op = &d1 * &mid;
        Self { n, h, x, l_op }
    }

    fn apply_l(&self, f: &RVec) -> RVec {
        &self.l_op * f
    }
}

/// 4th-order first derivative on a uniform grid: 5-point central stencil
/// inside, one-sided 5-point stencils at the two rows near each end.
fn first_derivative_matrix(n: usize, h: f64) -> RMat {
    let mut d = RMat::zeros(n, n);
    let c = 1.0 / (12.0 * h);
    for i in 2..n - 2 {
        d[(i, i - 2)] = 1.0 * c;
        d[(i, i - 1)] = -8.0 * c;
        d[(i, i + 1)] = 8.0 * c;
        d[(i, i + 2)] = -1.0 * c;
    }
    let forward = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let second = [-3.0, -10.0, 18.0, -6.0, 1.0];
    for (j, &w) in forward.iter().enumerate() {
        d[(0, j)] = w * c;
        d[(n - 1, n - 1 - j)] = -w * c;
    }
    for (j, &w) in second.iter().enumerate() {
        d[(1, j)] = w * c;
        d[(n - 2, n - 1 - j)] = -w * c;
    }
    d
}

/// An S¹-invariant metric on ℙ¹ in the anticanonical class, stored as the
/// potential relative to the round metric on the background grid, with the
/// volume gauge `∫ e^{-φ} dx₀ = 2`.
#[derive(Debug, Clone)]
pub struct SymmetricMetricP1 {
    phi: Vec<f64>,
}

impl SymmetricMetricP1 {
    /// The round (constant curvature 2) metric.
    pub fn round() -> Self {
        Self {
            phi: vec![0.0; P1_GRID],
        }
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Raw constructor bypassing the volume normalization; only for tests
    /// that exercise the normalization itself.
    #[cfg(test)]
    pub(crate) fn from_raw_phi_for_tests(phi: Vec<f64>) -> Self {
        Self { phi }
    }

    fn grid() -> Grid {
        Grid::new(P1_GRID)
    }

    fn from_phi(mut phi: Vec<f64>, grid: &Grid) -> Result<Self, FlowError> {
        normalize_gauge(&mut phi, grid);
        let m = Self { phi };
        let v = m.coefficient(grid);
        let min_v = v.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_v <= 0.0 {
            return Err(FlowError::DegenerateMetric { min_v });
        }
        Ok(m)
    }

    /// Metric coefficient `V = 1 + ½ L φ` on the grid.
    fn coefficient(&self, grid: &Grid) -> RVec {
        let phi = RVec::from_column_slice(&self.phi);
        coefficient_of(grid, &phi)
    }

    /// Metric coefficient as a plain vector.
    pub fn coefficient_values(&self) -> Vec<f64> {
        let grid = Self::grid();
        self.coefficient(&grid).iter().cloned().collect()
    }

    /// Scalar curvature on the grid.
    pub fn scalar_curvature(&self) -> Result<Vec<f64>, FlowError> {
        let grid = Self::grid();
        let v = self.coefficient(&grid);
        scalar_curvature_of(&grid, &v).map(|s| s.iter().cloned().collect())
    }

    /// Construct from samples of the symplectic potential `u(x)` on the
    /// uniform moment grid over [-1, 1] (the same number of points as the
    /// background grid).
    ///
    /// The Guillemin-singular part is removed in closed form; the smooth
    /// remainder is differentiated by 4th-order finite differences and the
    /// profile transported to the background gauge.
    pub fn from_moment_profile(u_samples: &[f64]) -> Result<Self, FlowError> {
        let n = u_samples.len();
        if n != P1_GRID {
            return Err(FlowError::ConfigInvalid(format!(
                "moment profile must have {P1_GRID} samples, got {n}"
            )));
        }
        if u_samples.iter().any(|x| !x.is_finite()) {
            return Err(FlowError::ConfigInvalid("non-finite profile".into()));
        }
        let grid = Self::grid();
        let h = grid.h;
        let u_round: Vec<f64> = grid
            .x
            .iter()
            .map(|&x| 0.5 * (xlnx(1.0 + x) + xlnx(1.0 - x)))
            .collect();
        let v_smooth: Vec<f64> = u_samples
            .iter()
            .zip(&u_round)
            .map(|(&u, &ur)| u - ur)
            .collect();
        let d1 = first_derivative_matrix(n, h);
        let vs = RVec::from_column_slice(&v_smooth);
        let vp = &d1 * &vs;
        let vpp = &d1 * &vp;
        Self::from_smooth_profile_parts(&grid, &grid.x, vp.as_slice(), vpp.as_slice())
    }

    /// The round profile with a quartic perturbation of the moment-map
    /// coefficient: `w(x) = (1-x²)(1 + ε(1-x²))`. Uses the closed forms of
    /// the smooth potential derivatives.
    pub fn quartic_perturbed(eps: f64) -> Result<Self, FlowError> {
        if !(eps > -0.45 && eps < 2.0) {
            return Err(FlowError::ConfigInvalid(
                "perturbation must lie in (-0.45, 2)".into(),
            ));
        }
        let grid = Self::grid();
        if eps == 0.0 {
            return Ok(Self::round());
        }
        // v'' = -ε / (1 + ε(1-x²)),  v' = -c·atanh(c x), c = sqrt(ε/(1+ε));
        // for negative ε the closed form continues with atan.
        let (vp, vpp): (Vec<f64>, Vec<f64>) = if eps > 0.0 {
            let c = (eps / (1.0 + eps)).sqrt();
            (
                grid.x.iter().map(|&x| -c * (c * x).atanh()).collect(),
                grid.x
                    .iter()
                    .map(|&x| -eps / (1.0 + eps * (1.0 - x * x)))
                    .collect(),
            )
        } else {
            let m = -eps;
            let c = (m / (1.0 - m)).sqrt();
            (
                grid.x.iter().map(|&x| c * (c * x).atan()).collect(),
                grid.x
                    .iter()
                    .map(|&x| m / (1.0 - m * (1.0 - x * x)))
                    .collect(),
            )
        };
        Self::from_smooth_profile_parts(&grid, &grid.x, &vp, &vpp)
    }

    /// Shared transport: given the smooth part `v` of the symplectic
    /// potential through its derivatives on the moment grid, produce the
    /// potential `φ` on the background grid.
    fn from_smooth_profile_parts(
        grid: &Grid,
        xs: &[f64],
        vp: &[f64],
        vpp: &[f64],
    ) -> Result<Self, FlowError> {
        let n = xs.len();
        // Background image of each moment point and the coefficient there:
        //   x₀(x) = (x + tanh v′)/(1 + x tanh v′)
        //   V(x₀(x)) = (cosh v′ + x sinh v′)² / (1 + (1-x²) v″)
        let mut x0_of_x = Vec::with_capacity(n);
        let mut v_of_x0 = Vec::with_capacity(n);
        for i in 0..n {
            let t = vp[i].tanh();
            let x = xs[i];
            x0_of_x.push((x + t) / (1.0 + x * t));
            let denom = 1.0 + (1.0 - x * x) * vpp[i];
            if denom <= 0.0 {
                return Err(FlowError::DegenerateMetric { min_v: denom });
            }
            let num = vp[i].cosh() + x * vp[i].sinh();
            v_of_x0.push(num * num / denom);
        }
        // Interpolate V onto the uniform background grid.
        let v0: Vec<f64> = grid
            .x
            .iter()
            .map(|&x0| interp_nonuniform(&x0_of_x, &v_of_x0, x0))
            .collect();
        let min_v = v0.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_v <= 0.0 {
            return Err(FlowError::DegenerateMetric { min_v });
        }
        // Solve L φ = 2(V - 1) with the mean pinned (L kills constants).
        let rhs = RVec::from_iterator(n, v0.iter().map(|&v| 2.0 * (v - 1.0)));
        let phi = solve_l(grid, &rhs)?;
        Self::from_phi(phi.iter().cloned().collect(), grid)
    }
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Six-point sliding Lagrange interpolation on a strictly increasing grid.
fn interp_nonuniform(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let lo = match xs.binary_search_by(|t| t.partial_cmp(&x).unwrap()) {
        Ok(i) => i,
        Err(i) => i.saturating_sub(1),
    };
    let lo = lo.saturating_sub(2).min(n - 6);
    let window = 6;
    let mut acc = 0.0;
    for j in 0..window {
        let xj = xs[lo + j];
        let mut l = 1.0;
        for k in 0..window {
            if k != j {
                let xk = xs[lo + k];
                l *= (x - xk) / (xj - xk);
            }
        }
        acc += l * ys[lo + j];
    }
    acc
}

/// Solve `L φ = rhs` in the least-squares sense (L kills constants; the
/// SVD pseudoinverse picks the zero-mean-ish solution).
fn solve_l(grid: &Grid, rhs: &RVec) -> Result<RVec, FlowError> {
    let svd = grid.l_op.clone().svd(true, true);
    svd.solve(rhs, 1e-10)
        .map_err(|_| FlowError::ConfigInvalid("singular profile system".into()))
}

/// Pin the additive gauge: `∫ e^{-φ} dx₀ = 2`.
fn normalize_gauge(phi: &mut [f64], grid: &Grid) {
    let vals: Vec<f64> = phi.iter().map(|&p| (-p).exp()).collect();
    let integral = gregory4(&vals, grid.h);
    let delta = (integral / 2.0).ln();
    for p in phi.iter_mut() {
        *p += delta;
    }
}

fn coefficient_of(grid: &Grid, phi: &RVec) -> RVec {
    let mut v = grid.apply_l(phi) * 0.5;
    for i in 0..grid.n {
        v[i] += 1.0;
    }
    v
}

fn scalar_curvature_of(grid: &Grid, v: &RVec) -> Result<RVec, FlowError> {
    let min_v = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_v <= 0.0 {
        return Err(FlowError::DegenerateMetric { min_v });
    }
    let logv = RVec::from_iterator(grid.n, v.iter().map(|&x| x.ln()));
    let l_logv = grid.apply_l(&logv);
    let mut s = RVec::zeros(grid.n);
    for i in 0..grid.n {
        s[i] = 2.0 - (2.0 / v[i]) * (v[i] - 1.0 + 0.5 * l_logv[i]);
    }
    Ok(s)
}

/// Mean scalar curvature `∫ S V / ∫ V` on the grid.
fn mean_scalar(grid: &Grid, s: &RVec, v: &RVec) -> f64 {
    let sv: Vec<f64> = (0..grid.n).map(|i| s[i] * v[i]).collect();
    let vv: Vec<f64> = v.iter().cloned().collect();
    gregory4(&sv, grid.h) / gregory4(&vv, grid.h)
}

/// Result of a flow run, sampled at unit times.
#[derive(Debug, Clone)]
pub struct KrfRun {
    pub times: Vec<f64>,
    pub metrics: Vec<SymmetricMetricP1>,
    /// `sup |S - S̄|` per sample.
    pub sup_s_deviation: Vec<f64>,
    pub calabi: Vec<f64>,
    /// Total area per sample (should stay at 4π).
    pub area: Vec<f64>,
    /// Largest per-unit-time relative area drift observed.
    pub max_area_drift: f64,
}

/// Run the normalized Kähler-Ricci flow from `initial` to time `t_end`,
/// implicit Euler with (modified) Newton inner solves, sampling at unit
/// times.
pub fn krf_p1(initial: &SymmetricMetricP1, t_end: f64, dt: f64) -> Result<KrfRun, FlowError> {
    if !(t_end > 0.0) || !(dt > 0.0) || dt > 0.5 {
        return Err(FlowError::ConfigInvalid(
            "need 0 < dt <= 0.5 and t_end > 0".into(),
        ));
    }
    let steps_per_unit = (1.0 / dt).round() as usize;
    if ((1.0 / dt) - steps_per_unit as f64).abs() > 1e-9 {
        return Err(FlowError::ConfigInvalid(
            "dt must divide the unit sampling interval".into(),
        ));
    }
    let units = t_end.round() as usize;
    if (t_end - units as f64).abs() > 1e-9 {
        return Err(FlowError::ConfigInvalid(
            "t_end must be an integer number of unit times".into(),
        ));
    }
    let dt = 1.0 / steps_per_unit as f64;

    let grid = SymmetricMetricP1::grid();
    let n = grid.n;
    let mut phi = RVec::from_column_slice(&initial.phi);

    let mut run = KrfRun {
        times: Vec::with_capacity(units + 1),
        metrics: Vec::with_capacity(units + 1),
        sup_s_deviation: Vec::with_capacity(units + 1),
        calabi: Vec::with_capacity(units + 1),
        area: Vec::with_capacity(units + 1),
        max_area_drift: 0.0,
    };
    record_sample(&grid, &phi, 0.0, &mut run)?;

    // Modified Newton: the Jacobian (1-dt)I - (dt/2) diag(1/V) L drifts
    // slowly, so it is refactored only periodically or on a stalled solve.
    let mut jacobian_lu: Option<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>> = None;
    let mut steps_since_factor = usize::MAX;

    for unit in 1..=units {
        for sub in 0..steps_per_unit {
            let t = (unit - 1) as f64 + sub as f64 * dt;
            let mut p = phi.clone();
            let mut converged = false;
            let mut attempts = 0;
            loop {
                for _newton in 0..60 {
                    let v = coefficient_of(&grid, &p);
                    let min_v = v.iter().cloned().fold(f64::INFINITY, f64::min);
                    if min_v <= 0.0 {
                        return Err(FlowError::DegenerateMetric { min_v });
                    }
                    let logv = RVec::from_iterator(n, v.iter().map(|&x| x.ln()));
                    let g = &p - &phi - (&logv + &p) * dt;
                    if g.amax() < 1e-12 {
                        converged = true;
                        break;
                    }
                    if steps_since_factor > 200 || jacobian_lu.is_none() {
                        let mut jac = grid.l_op.clone();
                        for i in 0..n {
                            let row_scale = -(dt * 0.5) / v[i];
                            for j in 0..n {
                                jac[(i, j)] *= row_scale;
                            }
                            jac[(i, i)] += 1.0 - dt;
                        }
                        jacobian_lu = Some(jac.lu());
                        steps_since_factor = 0;
                    }
                    let delta = jacobian_lu.as_ref().unwrap().solve(&g).ok_or(
                        FlowError::StepUnstable {
                            t,
                            residual: g.amax(),
                        },
                    )?;
                    p -= delta;
                }
                if converged {
                    break;
                }
                // Stalled with a lagged Jacobian: force refactorization once.
                attempts += 1;
                if attempts > 1 {
                    let v = coefficient_of(&grid, &p);
                    let logv = RVec::from_iterator(n, v.iter().map(|&x| x.ln()));
                    let g = &p - &phi - (&logv + &p) * dt;
                    return Err(FlowError::StepUnstable {
                        t,
                        residual: g.amax(),
                    });
                }
                jacobian_lu = None;
                steps_since_factor = usize::MAX;
                p = phi.clone();
            }
            steps_since_factor = steps_since_factor.saturating_add(1);
            // Volume gauge projection.
            let mut phi_vec: Vec<f64> = p.iter().cloned().collect();
            normalize_gauge(&mut phi_vec, &grid);
            phi = RVec::from_column_slice(&phi_vec);
        }
        record_sample(&grid, &phi, unit as f64, &mut run)?;
    }

    for w in run.area.windows(2) {
        let drift = (w[1] - w[0]).abs() / (4.0 * std::f64::consts::PI);
        run.max_area_drift = run.max_area_drift.max(drift);
    }
    Ok(run)
}

fn record_sample(grid: &Grid, phi: &RVec, t: f64, run: &mut KrfRun) -> Result<(), FlowError> {
    let v = coefficient_of(grid, phi);
    let s = scalar_curvature_of(grid, &v)?;
    let s_bar = mean_scalar(grid, &s, &v);
    let sup = s
        .iter()
        .map(|&x| (x - s_bar).abs())
        .fold(0.0f64, f64::max);
    let vv: Vec<f64> = v.iter().cloned().collect();
    let area = 2.0 * std::f64::consts::PI * gregory4(&vv, grid.h);
    let integrand: Vec<f64> = (0..grid.n)
        .map(|i| (s[i] - s_bar).powi(2) * v[i])
        .collect();
    let calabi = 2.0 * std::f64::consts::PI * gregory4(&integrand, grid.h);
    run.times.push(t);
    run.metrics.push(SymmetricMetricP1 {
        phi: phi.iter().cloned().collect(),
    });
    run.sup_s_deviation.push(sup);
    run.calabi.push(calabi);
    run.area.push(area);
    Ok(())
}

/// Calabi energy `∫ (S - S̄)² ω` of a metric.
pub fn calabi_energy(metric: &SymmetricMetricP1) -> Result<f64, FlowError> {
    let grid = SymmetricMetricP1::grid();
    let phi = RVec::from_column_slice(&metric.phi);
    let v = coefficient_of(&grid, &phi);
    let s = scalar_curvature_of(&grid, &v)?;
    let s_bar = mean_scalar(&grid, &s, &v);
    let integrand: Vec<f64> = (0..grid.n)
        .map(|i| (s[i] - s_bar).powi(2) * v[i])
        .collect();
    Ok(2.0 * std::f64::consts::PI * gregory4(&integrand, grid.h))
}

/// Internal accessors shared with the Gram quadrature.
pub(crate) fn metric_fields(metric: &SymmetricMetricP1) -> (Vec<f64>, Vec<f64>, f64) {
    let grid = SymmetricMetricP1::grid();
    let phi = RVec::from_column_slice(&metric.phi);
    let v = coefficient_of(&grid, &phi);
    (
        metric.phi.clone(),
        v.iter().cloned().collect(),
        grid.h,
    )
}
