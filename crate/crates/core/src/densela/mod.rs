//! Dense complex double-precision kernels: arithmetic, rank-revealing
//! factorizations, solves, spectra and the matrix exponential.

mod decomp;
mod expm;
mod matrix;
mod tol;

pub use decomp::{
    eigenvalues, inverse, lu_solve, norm_2, polar_unitary, rank, rank_factorization,
    rank_relative_to, solve_left, solve_left_relative_to, solve_right, solve_right_relative_to,
};
pub(crate) use decomp::{null_basis, pinv_relative_to, range_basis};
pub use expm::matrix_exp;
pub use matrix::CMatrix;
pub use num_complex::Complex64;
pub use tol::Tolerances;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected {expected} entries, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("matrix has a NaN or infinite entry")]
    NonFinite,
    #[error("matrix must be square, got {0:?}")]
    NotSquare((usize, usize)),
    #[error("matrix is numerically singular")]
    Singular,
    #[error("inconsistent system: residual {residual:e} exceeds {bound:e}")]
    Inconsistent { residual: f64, bound: f64 },
    #[error("eigenvalue iteration did not converge")]
    EigenNoConvergence,
    #[error("tolerance {0} must be finite and nonnegative")]
    BadTolerance(&'static str),
}
