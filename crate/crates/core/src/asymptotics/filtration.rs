//! The weight filtration, its splitting, and the one-parameter subgroup.
//!
//! The filtration level `V_s` (vectors of weight at most λ_s) is computed
//! as the pullback `A_α^{-1} g_α (⊕_{k≥s} U_k)` at several tail indices,
//! with a principal-angle stabilization gate. The splitting intersects the
//! analogous pullbacks `R_s` of the upper sums with `V_s`.

use super::gauge::GaugeEstimate;
use super::path::StandardizedPath;
use super::AsymError;
use crate::config::Tolerances;
use crate::linalg::subspace::{
    concat_min_singular_value, intersection, max_principal_angle, orthonormalize,
};
use crate::linalg::HermitianGenerator;
use crate::CMat;
use num_complex::Complex64;

/// Jump values with the nested subspaces `V_1 = E ⊃ V_2 ⊃ …` and, once
/// split, the complements `W_s` with `V_s = W_s ⊕ V_{s+1}`. All bases live
/// in standard coordinates.
#[derive(Debug, Clone)]
pub struct WeightFiltration {
    pub jumps: Vec<f64>,
    /// Orthonormal basis of each `V_s`.
    pub subspaces: Vec<CMat>,
    pub dims: Vec<usize>,
    /// Orthonormal basis of each `W_s`, once computed.
    pub splitting: Option<Vec<CMat>>,
}

impl WeightFiltration {
    pub fn levels(&self) -> usize {
        self.jumps.len()
    }

    /// Same jumps and same subspaces up to principal angle `tol`.
    pub fn approx_eq(&self, other: &WeightFiltration, tol: f64) -> bool {
        if self.jumps.len() != other.jumps.len() {
            return false;
        }
        for (a, b) in self.jumps.iter().zip(&other.jumps) {
            if (a - b).abs() > tol {
                return false;
            }
        }
        for (a, b) in self.subspaces.iter().zip(&other.subspaces) {
            if a.ncols() != b.ncols() || max_principal_angle(a, b) > tol {
                return false;
            }
        }
        true
    }
}

/// One-parameter subgroup data: the generator ξ acting by λ_s on W_s, and
/// the correction C₀ identifying W_s with U_s isometrically.
#[derive(Debug, Clone)]
pub struct OneParamData {
    pub jumps: Vec<f64>,
    /// Concatenated W bases (columns), the eigenframe of ξ.
    pub w_frame: CMat,
    w_frame_inv: CMat,
    /// Per-column eigenvalues of ξ.
    col_vals: Vec<f64>,
    pub xi: CMat,
    pub c0: CMat,
    /// Max defect of `λ(t) = C₀^{-1} e^{tΛ} C₀` over t ∈ {1, 2, 5}.
    pub conjugacy_defect: f64,
}

impl OneParamData {
    /// `λ(t) = exp(tξ)` through the W-eigenframe.
    pub fn lambda_t(&self, t: f64) -> CMat {
        let n = self.w_frame.nrows();
        let d = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new((t * self.col_vals[i]).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.w_frame * d * &self.w_frame_inv
    }
}

/// Pull a subspace back through `A_α^{-1} g_α`. Columns contract at the
/// rate of their weight, so each is renormalized before orthonormalizing;
/// otherwise the rank cutoff would drop slow directions.
fn pullback(path: &StandardizedPath, gauge: &GaugeEstimate, alpha: usize, cols: &CMat) -> CMat {
    let moved = gauge.gauge(alpha) * cols;
    let mut solved = path
        .op(alpha)
        .clone()
        .lu()
        .solve(&moved)
        .expect("path operators invertible");
    for j in 0..solved.ncols() {
        let n = solved.column(j).norm();
        if n > 0.0 {
            let scaled = solved.column(j) / Complex64::new(n, 0.0);
            solved.set_column(j, &scaled);
        }
    }
    orthonormalize(&solved)
}

/// Tail indices used for stabilization checks: five evenly spaced samples
/// ending at the last step.
fn stabilization_schedule(tail_start: usize, n_steps: usize) -> Vec<usize> {
    let count = 5usize;
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let idx = tail_start + (n_steps - tail_start) * j / (count - 1);
        if out.last() != Some(&idx) {
            out.push(idx);
        }
    }
    out
}

/// Filtration subspaces `V_s` from stabilized tail pullbacks of the lower
/// eigenspace sums `⊕_{k≥s} U_k`.
pub fn filtration(
    path: &StandardizedPath,
    gauge: &GaugeEstimate,
    tol: &Tolerances,
) -> Result<WeightFiltration, AsymError> {
    let lambda = &gauge.lambda;
    let r = lambda.levels();
    let n = path.dim();
    let schedule = stabilization_schedule(gauge.tail_start, path.steps());

    let mut subspaces = Vec::with_capacity(r);
    let mut dims = Vec::with_capacity(r);
    for s in 0..r {
        if s == 0 {
            subspaces.push(CMat::identity(n, n));
            dims.push(n);
            continue;
        }
        let upper = lambda.eigenspace_span(s..r);
        let mut prev: Option<CMat> = None;
        let mut last = None;
        for &alpha in &schedule {
            let pulled = pullback(path, gauge, alpha, &upper);
            if let Some(p) = &prev {
                let angle = max_principal_angle(p, &pulled);
                if angle > tol.filt_tol {
                    return Err(AsymError::NotStabilized {
                        angle,
                        tol: tol.filt_tol,
                    });
                }
            }
            prev = Some(pulled.clone());
            last = Some(pulled);
        }
        let v_s = last.expect("schedule nonempty");
        dims.push(v_s.ncols());
        subspaces.push(v_s);
    }

    Ok(WeightFiltration {
        jumps: lambda.spectrum().to_vec(),
        subspaces,
        dims,
        splitting: None,
    })
}

/// Splitting `W_s` with `V_s = W_s ⊕ V_{s+1}`, via `W_s = R_s ∩ V_s` for
/// tail pullbacks `R_s` of the upper sums `⊕_{k≤s} U_k`.
///
/// `R_s` is taken at the earliest gauge-valid tail index: pullbacks of the
/// upper sums rotate into lower directions as α grows (only the lower-sum
/// pullbacks of `filtration` converge), and the intersection with `V_s`
/// stays best conditioned where that rotation is smallest. Any such index
/// yields a valid complement; the choice is not canonical.
pub fn splitting(
    path: &StandardizedPath,
    gauge: &GaugeEstimate,
    filt: &WeightFiltration,
    tol: &Tolerances,
) -> Result<WeightFiltration, AsymError> {
    let lambda = &gauge.lambda;
    let r = lambda.levels();
    let alpha = gauge.tail_start;

    let mut w_spaces = Vec::with_capacity(r);
    for s in 0..r {
        let n_s = lambda.multiplicities()[s];
        let w_s = if r == 1 {
            CMat::identity(path.dim(), path.dim())
        } else {
            let lower = lambda.eigenspace_span(0..s + 1);
            let r_s = pullback(path, gauge, alpha, &lower);
            intersection(&r_s, &filt.subspaces[s], tol.intersect_angle_tol)
        };
        if w_s.ncols() != n_s {
            return Err(AsymError::IntersectionDefect {
                level: s,
                expected: n_s,
                found: w_s.ncols(),
            });
        }
        w_spaces.push(w_s);
    }

    let sigma = concat_min_singular_value(&w_spaces);
    if sigma <= 1e-6 {
        return Err(AsymError::IntersectionDefect {
            level: 0,
            expected: path.dim(),
            found: 0,
        });
    }

    Ok(WeightFiltration {
        jumps: filt.jumps.clone(),
        subspaces: filt.subspaces.clone(),
        dims: filt.dims.clone(),
        splitting: Some(w_spaces),
    })
}

/// Build ξ (acting by λ_s on W_s) and the polar-corrected isometry C₀
/// mapping each W_s onto U_s. The identity `λ(t) = C₀^{-1} e^{tΛ} C₀`
/// holds by construction; its numeric defect at t ∈ {1, 2, 5} is recorded.
pub fn one_param(
    filt: &WeightFiltration,
    lambda: &HermitianGenerator,
) -> Result<OneParamData, AsymError> {
    let w_spaces = filt
        .splitting
        .as_ref()
        .expect("one_param needs a split filtration");
    let n = lambda.dim();
    let r = lambda.levels();

    let mut w_frame = CMat::zeros(n, n);
    let mut col_vals = Vec::with_capacity(n);
    let mut at = 0;
    for (s, w) in w_spaces.iter().enumerate() {
        for j in 0..w.ncols() {
            w_frame.set_column(at, &w.column(j));
            col_vals.push(filt.jumps[s]);
            at += 1;
        }
    }
    let w_frame_inv = w_frame
        .clone()
        .try_inverse()
        .ok_or(AsymError::IntersectionDefect {
            level: 0,
            expected: n,
            found: at,
        })?;

    // Blockwise polar correction: O_s is the unitary factor of U_s* W_s.
    let mut block_diag = CMat::zeros(n, n);
    let mut at = 0;
    for s in 0..r {
        let u_s = lambda.eigenspace(s);
        let w_s = &w_spaces[s];
        let t_s = u_s.adjoint() * w_s;
        let o_s = crate::linalg::newton_unitary_factor_pub(&t_s)?;
        for j in 0..o_s.ncols() {
            for i in 0..o_s.nrows() {
                block_diag[(at + i, at + j)] = o_s[(i, j)];
            }
        }
        at += w_s.ncols();
    }
    let c0 = lambda.eigenbasis() * block_diag * &w_frame_inv;

    let d = CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(col_vals[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let xi = &w_frame * d * &w_frame_inv;

    let mut data = OneParamData {
        jumps: filt.jumps.clone(),
        w_frame,
        w_frame_inv,
        col_vals,
        xi,
        c0,
        conjugacy_defect: 0.0,
    };
    let c0_inv = data
        .c0
        .clone()
        .try_inverse()
        .expect("C0 is invertible by construction");
    let mut defect = 0.0f64;
    for &t in &[1.0, 2.0, 5.0] {
        let lhs = data.lambda_t(t);
        let rhs = &c0_inv * lambda.exp_t(t) * &data.c0;
        defect = defect.max((lhs - &rhs).norm() / rhs.norm().max(1.0));
    }
    data.conjugacy_defect = defect;
    Ok(data)
}
