//! Tolerance configuration shared across the analysis modules.
//!
//! The self-similarity condition only promises convergence without a rate,
//! so every threshold here is an engineering choice. Defaults follow the
//! values used throughout the test suites; all of them can be overridden
//! from the CLI.

use serde::{Deserialize, Serialize};

/// Resolved tolerances for a run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues closer than `cluster_tol_factor * scale` belong to one level.
    pub cluster_tol_factor: f64,
    /// Residual bound for accepting condition (*)' on the tail.
    pub star_tol: f64,
    /// Weight snapping tolerance as a fraction of the minimal spectral gap.
    pub snap_tol_factor: f64,
    /// Absolute snapping tolerance used when the induced spectrum is a single point.
    pub snap_tol_floor: f64,
    /// Principal-angle bound for pullback stabilization of filtrations.
    pub filt_tol: f64,
    /// Isometry residual bound for the parallel lift.
    pub lift_tol: f64,
    /// `‖Λ‖ < lambda_zero_tol` classifies a run as case II.
    pub lambda_zero_tol: f64,
    /// Fraction of the path treated as the convergent tail.
    pub tail_fraction: f64,
    /// Principal-angle threshold deciding membership in a subspace intersection.
    pub intersect_angle_tol: f64,
    /// Clustering radius (Fubini-Study) for limit-set representatives.
    pub limit_cluster_tol: f64,
    /// Hard cap on induced representation dimensions.
    pub dim_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cluster_tol_factor: 1e-6,
            star_tol: 1e-3,
            snap_tol_factor: 1e-2,
            snap_tol_floor: 1e-2,
            filt_tol: 1e-4,
            lift_tol: 1e-8,
            lambda_zero_tol: 1e-3,
            tail_fraction: 0.25,
            intersect_angle_tol: 1e-3,
            limit_cluster_tol: 1e-2,
            dim_cap: 20_000,
        }
    }
}

impl Tolerances {
    /// Snapping tolerance for a spectrum with the given minimal gap.
    pub fn snap_tol(&self, min_gap: Option<f64>) -> f64 {
        match min_gap {
            Some(g) if g > 0.0 => self.snap_tol_factor * g,
            _ => self.snap_tol_floor,
        }
    }
}
