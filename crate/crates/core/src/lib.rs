//! Symmetric word equations `S(X, B1, ..., Bk) = P` in positive definite matrices.

pub mod calculus;
pub mod error;
pub mod eval;
pub mod json;
pub mod matrix;
pub mod solve;
pub mod witness;
pub mod word;

pub use error::{Error, Result};
pub use matrix::{AnyMatrix, Matrix, Rational, Scalar, ScalarKind, Tolerances};
pub use word::{Letter, Word};
