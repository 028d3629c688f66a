//! Shared numeric utilities: deterministic summation, seeded randomness,
//! polynomial fitting, small matrix functions, quadrature.

pub mod matfun;
pub mod polyfit;
pub mod quad;
pub mod rng;
pub mod sum;

pub use polyfit::polyfit;
pub use rng::Rng;
pub use sum::{pairwise_sum, pairwise_sum_complex};
