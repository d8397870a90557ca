//! Exact linear algebra over ℚ and over prime fields.

mod matrix;
mod prime_field;
mod rational;

pub use matrix::{RatMatrix, Rref};
pub use prime_field::{is_prime, FpMatrix, PrimeField, PrimeFieldElem};
pub use rational::{
    abs_is_one, format_rational, int, is_integer, parse_rational, ratio, serde_str,
    ParseRationalError, Rational,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("rows have inconsistent lengths")]
    RaggedRows,
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
}
