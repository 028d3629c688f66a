//! Futaki-type invariants of torus weight tables: exact per-degree lattice
//! sums with polynomial-fit extrapolation, the soliton vector solver, and
//! Donaldson-Futaki / N₂ norms; plus toric Fano polytope ingestion.

mod invariants;
mod polytope;
mod soliton;
mod table;

pub use invariants::{df_and_n2, futaki_limit, trace_exp, FutakiReport, FutakiValue};
pub use polytope::{parse_rational, PolytopeData};
pub use soliton::{soliton_vector, SolitonResult};
pub use table::{weights_from_polytope, TorusWeightTable};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FutakiError {
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("degree {k} exceeds the table maximum {kmax}")]
    DegreeOverflow { k: usize, kmax: usize },
    #[error("table needs kmax >= n + 3 = {need}, has {kmax}")]
    TableTooShallow { kmax: usize, need: usize },
    #[error("extrapolation is unstable: leading coefficient moved by {delta:.3e} relative under a window shift")]
    UnstableExtrapolation { delta: f64 },
    #[error("Newton did not converge after {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("convexity proxy failed: Hessian eigenvalue {eig:.3e} is not positive (kmax likely too small)")]
    NonConvexHessian { eig: f64 },
    #[error("lattice-point counts do not fit a degree-{n} polynomial (residual {residual:.3e})")]
    HilbertFitFailed { n: usize, residual: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}
