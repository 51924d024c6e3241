use thiserror::Error;

use crate::algebra::AlgebraDescriptor;

#[derive(Debug, Error)]
pub enum Error {
    #[error("descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch {
        left: AlgebraDescriptor,
        right: AlgebraDescriptor,
    },
    #[error("element is singular (smallest |eigenvalue| = {min_abs_eig:e})")]
    SingularElement { min_abs_eig: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("element is outside the open cone (smallest eigenvalue = {min_eig:e})")]
    OutsideCone { min_eig: f64 },
    #[error("logarithm series diverges: <a,a> = {norm_sq} >= 1")]
    DivergentSeries { norm_sq: f64 },
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("Wishart parameters do not share a scale")]
    ScaleMismatch,
    #[error("element is not idempotent (|p∘p - p| = {defect:e})")]
    NotIdempotent { defect: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_same(left: &AlgebraDescriptor, right: &AlgebraDescriptor) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DescriptorMismatch {
            left: *left,
            right: *right,
        })
    }
}
