//! Exact arithmetic: rationals, Gaussian rationals, dense matrices and the
//! linear algebra the rest of the crate is built on.

mod gaussian;
mod linalg;
mod matrix;
mod rational;
mod sympower;

pub use gaussian::GaussianRational;
pub use linalg::{determinant, inverse, rank};
pub use matrix::{CMatrix, Field, Matrix, QMatrix, Scalar};
pub use rational::Rational;
pub use sympower::{
    lift, prod_lift, sym_power_of, sym_square_endo, sym_square_extend, SymPowerBasis,
    SymSquareBasis,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("endomorphism does not commute with the tensor flip at entry ({row}, {col})")]
    NotFlipEquivariant { row: usize, col: usize },
    #[error("cannot parse rational: {0}")]
    Parse(String),
}
