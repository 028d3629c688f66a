//! Weight filtrations on truncated graded rings: quotient norms, section
//! weights, the multiplicative filtration, initial ideals, Rees data, and
//! rational perturbation of the grading.
//!
//! The infinite coordinate ring is replaced by its truncation at degree K;
//! every statement used downstream is degreewise, so flatness and dimension
//! identities are checked per degree.

mod poly;
mod presentation;
mod quotient;
mod rees;
mod weighted;

pub use poly::{MonomialBasis, SparsePoly};
pub use presentation::GradedRingPresentation;
pub use quotient::{h2_check, quotient_norm, H2Report, QuotientForm};
pub use rees::{perturb_rational, rational_approx, regrade, PerturbResult, ReesData};
pub use weighted::{
    initial_ideal, ring_filtration, section_weight, DegreeFiltration, InitialIdealData,
    RingFiltrationData, WeightedAnalysis,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("degree {k} exceeds the truncation K = {trunc}")]
    DegreeOverflow { k: usize, trunc: usize },
    #[error("generator is not homogeneous (degrees {0} and {1})")]
    NotHomogeneous(usize, usize),
    #[error("declared Hilbert value {declared} at degree {k} does not match computed dimension {computed}")]
    HilbertMismatch {
        k: usize,
        declared: usize,
        computed: usize,
    },
    #[error("element lies in the ideal (zero in the quotient ring)")]
    ZeroInQuotient,
    #[error("Gram matrix is singular or not positive-definite")]
    SingularGram,
    #[error("filtration is not rational: {value} has no fraction with denominator <= {max_den} within 1e-9")]
    IrrationalFiltration { value: f64, max_den: i64 },
    #[error("generator has two monomials tied at top weight (gap {gap:.3e})")]
    TieDetected { gap: f64 },
    #[error("no rational perturbation found within the search depth")]
    PerturbationNotFound,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}
