//! Krylov subspace solvers for the trust-region and cubic-regularized
//! quadratic subproblems, with instance generators and bound evaluators.

pub mod banded;
pub mod baselines;
pub mod bounds;
pub mod chebyshev;
pub mod error;
pub mod harness;
pub mod instances;
pub mod lanczos;
pub mod operators;
pub mod randomize;
pub mod secular;
pub mod subproblem;
pub mod tridiag;
pub mod vecops;

pub use error::{Error, Result};
pub use operators::{Counted, Dense, Diagonal, MatrixSpec, OperatorKind, SymmetricOperator};

/// Library version recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
