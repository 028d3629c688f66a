//! Degeneration data of self-similar matrix flows.
//!
//! A converging-to-self-similar path of invertible matrices (the finite
//! dimensional shadow of a geometric flow) determines algebro-geometric
//! degeneration data: a limit generator, a weight function on vectors, a
//! filtration with splitting, a one-parameter subgroup, a filtered graded
//! ring with its initial ideal and Rees algebra, and Futaki-type invariants
//! of torus weight tables. This crate computes all of it at desk scale.
//!
//! The pieces:
//!
//! * [`linalg`] — Hermitian forms, spectral decomposition, polar
//!   decomposition, parallel lifts of Gram-matrix paths, Fubini-Study
//!   geometry.
//! * [`reps`] — induced representations of GL(E) (dual, symmetric and
//!   exterior powers, tensor products), their weight decompositions, and
//!   Plücker coordinates.
//! * [`asymptotics`] — gauge estimation for self-similar paths, the weight
//!   function d(v), filtrations, splittings, one-parameter subgroups, limit
//!   sets, and stabilizer diagnostics.
//! * [`ringfilt`] — weight filtrations on truncated graded rings, quotient
//!   norms, initial ideals, Rees data, rational perturbation.
//! * [`futaki`] — toric lattice-point weight tables, Futaki limits, soliton
//!   vectors, Donaldson-Futaki and N₂ norms.
//! * [`flows`] — synthetic gauged self-similar paths and a 1-D symmetric
//!   Kähler-Ricci flow on ℙ¹ feeding the Gram-matrix pipeline.
//! * [`io`] — file formats and reports for the CLI.

pub mod asymptotics;
pub mod bundled;
pub mod config;
pub mod flows;
pub mod futaki;
pub mod io;
pub mod linalg;
pub mod reps;
pub mod ringfilt;
pub mod util;

pub use config::Tolerances;

use num_complex::Complex64;

/// Dense complex matrix used throughout.
pub type CMat = nalgebra::DMatrix<Complex64>;
/// Dense complex vector used throughout.
pub type CVec = nalgebra::DVector<Complex64>;
