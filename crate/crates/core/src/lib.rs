//! Two-stage sparse representation (TSSR) for classification, a family of
//! sparse solvers, and diagnostics for the recovery conditions they rely on.
//!
//! Matrices are dense and column-major; every value is checked finite on
//! construction.

pub mod dataio;
pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod rng;
pub mod solvers;
pub mod tssr;

pub use error::{Error, PartialSolution, Result, Stage};
pub use linalg::{Dictionary, Matrix, Support, Vector};
pub use solvers::{SolveConfig, SparseSolution};
