use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("basis is not orthonormal (residual {residual:e}); use expansion-based extraction")]
    NotOrthonormal { residual: f64 },
    #[error("imaginary residue {residual:e} exceeds tolerance")]
    ImaginaryResidue { residual: f64 },
    #[error("basis change matrix is singular")]
    SingularBasisChange,
    #[error("similarity transformation is numerically singular")]
    SingularSimilarity,
    #[error("momentum block constant must be nonzero")]
    ZeroMomentumConstant,
    #[error("commutator is not in the span of the momentum matrices (residual {residual:e})")]
    ExpansionResidual { residual: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("factorization check needs a one-dimensional solution space, got {0}")]
    NotIrreducible(usize),
    #[error("malformed document: {0}")]
    Schema(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
