use thiserror::Error;

/// Errors raised by the exact linear-model machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid contrast matrix: {0}")]
    InvalidContrast(String),

    #[error("invalid cell layout: {0}")]
    InvalidLayout(String),

    #[error("effect {0} is not part of the model")]
    EffectNotInModel(String),

    #[error("inconsistent right-hand side: no b0 satisfies G'b0 = c0")]
    InconsistentRhs,

    #[error("projectors violate the F-statistic preconditions: {0}")]
    Orthogonality(String),

    #[error("F statistic undefined: {0}")]
    UndefinedF(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid distribution parameters: {0}")]
    InvalidParams(String),

    #[error("fixture error: {0}")]
    Fixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
