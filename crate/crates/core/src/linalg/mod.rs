//! Hermitian vector spaces, spectral and polar decompositions, parallel
//! lifts of Gram-matrix paths, and Fubini-Study geometry.
//!
//! Every inner product is taken with respect to an explicit reference form;
//! there is no implicit standard-basis assumption. All operations are pure
//! functions of immutable inputs.

mod form;
mod lift;
mod polar;
mod projective;
mod spectral;
pub mod subspace;

pub use form::HermitianForm;
pub use lift::{isometry_residual, log_derivative_defect, parallel_lift, OperatorPath};
pub use polar::polar_positive_part;
pub use projective::{fs_distance, fs_distance_vectors, ProjectivePoint};
pub use spectral::{spectral_decompose, HermitianGenerator};

pub(crate) use polar::newton_unitary_factor as newton_unitary_factor_pub;
pub(crate) use spectral::cluster_descending as cluster_levels;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: asymmetry {defect:.3e} exceeds 1e-12 scale")]
    NotHermitian { defect: f64 },
    #[error("two candidate eigenvalue clusterings both satisfy the gap rule (cluster diameter {diameter:.3e} vs tol {tol:.3e})")]
    AmbiguousClustering { diameter: f64, tol: f64 },
    #[error("input is numerically singular (condition number {cond:.3e} exceeds 1e12)")]
    SingularInput { cond: f64 },
    #[error("Gram matrix is not positive-definite")]
    SingularGram,
    #[error("lift integrator cannot meet the isometry tolerance {tol:.3e} (best residual {best:.3e})")]
    StepTooLarge { tol: f64, best: f64 },
    #[error("zero vector where a projective representative is required")]
    ZeroVector,
    #[error("times must be strictly increasing")]
    TimesNotIncreasing,
    #[error("operator path must start at the identity (defect {defect:.3e})")]
    PathNotBasedAtIdentity { defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in input")]
    NonFinite,
}

pub(crate) fn condition_number(m: &crate::CMat) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
