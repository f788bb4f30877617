//! Generalized inverses of dense matrices in exact (Gaussian rational) and
//! floating-point arithmetic.
//!
//! Seven inverses are available: Moore-Penrose, group, Drazin, core, dual
//! core, core-EP and dual core-EP. Each can be computed from full-rank
//! decomposition chains, from explicit power formulas, or as the λ → 0 limit
//! of a shifted resolvent, either numerically along a λ schedule or exactly
//! over rational functions in λ. The [`verify`] module checks results against
//! the defining equations.

pub mod decompose;
pub mod error;
pub mod fixtures;
pub mod inverses;
pub mod limits;
pub mod matcore;
pub mod verify;

pub use error::{Error, Result};
pub use matcore::{DynMatrix, Gaussian, Matrix, Mode, Scalar};
pub use num_complex::Complex64;
