//! Singular solutions of the Matrix Bochner Problem.
//!
//! Builds the weights `W(x) = T(x) W~(x) T(x)^T`, where `W~` is a direct sum of
//! Hermite, Laguerre or Jacobi weights and `T(x) = I + A x` with `A^2 = 0`, together with
//! their monic orthogonal polynomials and second-order differential operators, and checks
//! the structural properties of the operator algebra numerically.

pub mod diffops;
pub mod error;
pub mod fixtures;
pub mod orthopoly;
pub mod par;
pub mod polyops;
mod real;
pub mod verify;
pub mod weights;

pub use error::{MbpError, Result, SpecViolation};

/// Dense real matrix used for every constant coefficient.
pub type Matrix = nalgebra::DMatrix<f64>;
