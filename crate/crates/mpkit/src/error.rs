use thiserror::Error;

/// Errors produced by the numerical kernels and constructors.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds bound {bound:.3e}")]
    NotHermitian { asymmetry: f64, bound: f64 },

    #[error("eigensolver failed to converge (residual {residual:.3e})")]
    NoConvergence { residual: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{bound:.3e}")]
    NotPSD { min_eigenvalue: f64, bound: f64 },

    #[error("matrix is not idempotent: ||Q^2 - Q||_F = {residual:.3e} exceeds bound {bound:.3e}")]
    NotIdempotent { residual: f64, bound: f64 },

    #[error("basis is not unitary: ||U*U - I||_F = {residual:.3e}")]
    BasisNotUnitary { residual: f64 },

    #[error("block decomposition failed: reconstruction residual {residual:.3e} exceeds bound {bound:.3e}")]
    DecompositionFailed { residual: f64, bound: f64 },

    #[error("matched-projection formulas disagree: max pairwise deviation {deviation:.3e} exceeds bound {bound:.3e}")]
    FormulaDisagreement { deviation: f64, bound: f64 },

    #[error("matrix is not a projection: ||M^2 - M||_F + ||M - M*||_F = {residual:.3e}")]
    NotProjection { residual: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("entries must be finite, found non-finite value at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
