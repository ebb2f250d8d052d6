//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here works on [`CMatrix`], a row-major matrix of
//! [`Complex64`]. The kernels (Hermitian eigenvalues, LU determinant,
//! Parlett–Reid Pfaffian, anti-Hermitian exponential) are implemented
//! in-repo so the phase and sign conventions of determinants and Pfaffians
//! stay fully under our control.

mod eigen;
mod expm;
mod lu;
mod matrix;
mod pfaffian;
mod sparse;

pub use eigen::{eig_hermitian, eigh, HermitianEigen};
pub use expm::unitary_exp;
pub use lu::{determinant, Lu};
pub use matrix::{c, CMatrix};
pub use pfaffian::pfaffian_skew;
pub use sparse::SparseCMatrix;

pub use num_complex::Complex64;

/// Absolute/relative tolerance pair used by every structural check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Tolerance {
    pub const DEFAULT_ABS: f64 = 1e-10;
    pub const DEFAULT_REL: f64 = 1e-8;

    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self, NumericsError> {
        if !(abs_eps >= 0.0 && rel_eps >= 0.0) {
            return Err(NumericsError::InvalidTolerance { abs_eps, rel_eps });
        }
        Ok(Self { abs_eps, rel_eps })
    }

    /// A tolerance with the same relative part and a different absolute part.
    pub fn with_abs(self, abs_eps: f64) -> Self {
        Self { abs_eps, ..self }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_eps: Self::DEFAULT_ABS,
            rel_eps: Self::DEFAULT_REL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not anti-Hermitian (deviation {deviation:e})")]
    NotAntiHermitian { deviation: f64 },
    #[error("matrix is not skew-symmetric (deviation {deviation:e})")]
    NotSkewSymmetric { deviation: f64 },
    #[error("Pfaffian requires even dimension, got {dim}")]
    OddDimension { dim: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("entry buffer has {len} entries, expected {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("invalid tolerance (abs {abs_eps}, rel {rel_eps})")]
    InvalidTolerance { abs_eps: f64, rel_eps: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}
