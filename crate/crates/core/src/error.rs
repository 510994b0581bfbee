use thiserror::Error;

use crate::cdga::ValidationReport;
use crate::format::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unknown generator id {0}")]
    UnknownGenerator(usize),

    #[error("unknown generator name `{0}`")]
    UnknownGeneratorName(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("generator `{0}` has degree 0; generators must have positive degree")]
    ZeroDegreeGenerator(String),

    #[error("relation {index} has degree {degree}; relations must have degree at least 2")]
    RelationDegreeTooLow { index: usize, degree: u32 },

    #[error("relation {0} is not homogeneous")]
    RelationNotHomogeneous(usize),

    #[error("algebra has relations; operation requires a free algebra")]
    NotFree,

    #[error("target is not connected: dim H^0 = {0}")]
    NonConnectedTarget(usize),

    #[error("kill loop in degree {degree} did not stabilize within {cap} rounds (kernel dimension {kernel_dim})")]
    KillCapExceeded { degree: u32, cap: usize, kernel_dim: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    JacobiFailure { i: usize, j: usize, k: usize },

    #[error("invalid Lie algebra presentation: {0}")]
    InvalidLieAlgebra(String),

    #[error("tensor model is not minimal")]
    NotMinimal,

    #[error("invalid KS-extension: {0}")]
    InvalidExtension(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),
}
