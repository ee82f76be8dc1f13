//! Dense complex linear algebra with explicit tolerances.
//!
//! Storage is row-major. Operators on `ℂᵐ ⊗ ℂˡ` use the block layout where the
//! first tensor factor indexes blocks of `l` consecutive coordinates, so that
//! `kron(E_jj, I_l)` projects onto the `j`-th block.

mod eigen;
mod factor;
mod matrix;
pub mod random;
pub mod vector;

pub use eigen::{hermitian_eig, EigenSystem};
pub use factor::{factor_psd, numerical_rank, orthonormalize_columns};
pub use matrix::{hs_inner, hs_norm, kron, operator_norm, ComplexMatrix};

use thiserror::Error;

/// Failures of the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (‖H − H*‖ = {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("entry buffer has length {len}, expected {expected}")]
    LengthMismatch { len: usize, expected: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("numerical rank {rank} exceeds the factor height {max}")]
    RankOverflow { rank: usize, max: usize },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("dimension must be at least one")]
    EmptyDimension,
}
