//! End-to-end pipelines that produce matrix paths: a synthetic
//! gauged-self-similar generator with ground truth, and a 1-D symmetric
//! Kähler-Ricci flow on ℙ¹ feeding the Gram-matrix pipeline, plus the
//! Calabi energy.

mod gram;
mod p1;
mod pipeline;
mod synth;

pub use gram::gram_from_metric;
pub use p1::{calabi_energy, krf_p1, KrfRun, SymmetricMetricP1, P1_GRID};
pub use pipeline::{
    analyze_gram_path, ideal_basis_orthonormal, iota_matrix, pipeline_p1, pullback_gram_path,
    rational_normal_curve_ring, GramAnalysis, PipelineReportData,
};
pub use synth::{synth_path, SynthGroundTruth, SynthPathConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("invalid generator configuration: {0}")]
    ConfigInvalid(String),
    #[error("implicit step failed to converge at t = {t:.4} (Newton residual {residual:.3e})")]
    StepUnstable { t: f64, residual: f64 },
    #[error("metric is degenerate: the moment profile lost convexity (min coefficient {min_v:.3e})")]
    DegenerateMetric { min_v: f64 },
    #[error("quadrature did not converge under node doubling (difference {diff:.3e})")]
    QuadratureNotConverged { diff: f64 },
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    Asym(#[from] crate::asymptotics::AsymError),
    #[error(transparent)]
    Ring(#[from] crate::ringfilt::RingError),
    #[error(transparent)]
    Reps(#[from] crate::reps::RepsError),
}
