//! Scalars, dense matrices and elimination primitives.

mod elim;
mod matrix;
mod scalar;

pub use elim::{
    inverse, rank, rank_threshold, rank_with_threshold, rref, rref_with_rank, rref_with_threshold,
    solve, Rref,
};
pub use matrix::{DynMatrix, Matrix};
pub use scalar::{ComplexDD, Gaussian, Mode, ParseScalarError, Scalar};

pub(crate) use scalar::complex64_to_dd;
