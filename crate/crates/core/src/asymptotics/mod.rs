//! Asymptotics of self-similar matrix paths: gauge and generator
//! estimation, the weight function d(v), filtrations and splittings, the
//! one-parameter subgroup, limit sets, and stabilizer diagnostics.
//!
//! A path satisfying the self-similarity condition has transitions
//! `B_i = A_i A_{i-1}^{-1}` converging, up to unitary gauge, to `e^Λ` for a
//! fixed Hermitian Λ. Everything downstream is a function of the estimated
//! Λ, the gauges, and the path itself.

mod filtration;
mod gauge;
mod limits;
mod path;
mod stabilizer;
mod weight;

pub use filtration::{filtration, one_param, splitting, OneParamData, WeightFiltration};
pub use gauge::{estimate_gauge, GaugeEstimate};
pub use limits::{bar_limit, limit_set, orbit_distance, LimitSetSample};
pub use path::StandardizedPath;
pub use stabilizer::stabilizer_dim;
pub use weight::{weight, weight_grassmann, WeightEstimate};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AsymError {
    #[error("path too short: {len} unit steps, need at least {need}")]
    TooShort { len: usize, need: usize },
    #[error("path does not satisfy the self-similarity condition: residual_star {residual_star:.3e}, residual_gauge {residual_gauge:.3e} exceed {tol:.3e}")]
    NonConvergent {
        residual_star: f64,
        residual_gauge: f64,
        tol: f64,
        /// Per-tail-index residuals for the report.
        residual_curve: Vec<f64>,
    },
    #[error("weight estimators disagree: increments give {raw:.6e}, windowed slope gives {slope:.6e} (tol {tol:.3e})")]
    EstimatorDisagreement { raw: f64, slope: f64, tol: f64 },
    #[error("weight {raw:.6e} cannot be snapped: nearest spectrum element {nearest:.6e} at distance {dist:.3e}, margin rule fails (snap_tol {snap_tol:.3e})")]
    SpectrumAmbiguity {
        raw: f64,
        nearest: f64,
        dist: f64,
        snap_tol: f64,
    },
    #[error("filtration pullbacks do not stabilize: principal angle {angle:.3e} exceeds {tol:.3e}")]
    NotStabilized { angle: f64, tol: f64 },
    #[error("intersection defect at level {level}: expected dimension {expected}, found {found}")]
    IntersectionDefect {
        level: usize,
        expected: usize,
        found: usize,
    },
    #[error("rank decision is borderline: singular value {sigma:.3e} lies in the refusal band (1e-10, 1e-6)")]
    RankBorderline { sigma: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("cannot resample path to unit spacing: {0}")]
    Resample(String),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    Reps(#[from] crate::reps::RepsError),
}
