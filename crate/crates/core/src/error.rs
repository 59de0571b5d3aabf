use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("weight is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("weight is the zero matrix")]
    ZeroWeight,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element does not preserve the kernel of the weight (membership defect {defect:e}); its seminorm is infinite")]
    NotMember { defect: f64 },

    #[error("objective returned a non-finite value at theta = {theta}")]
    NonFiniteObjective { theta: f64 },

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsatisfiable ensemble request: {0}")]
    Unsatisfiable(String),

    #[error("sampler produced no element with nonzero seminorm within budget {budget}")]
    NoNonzeroSample { budget: usize },

    #[error("matrix is not diagonal (off-diagonal mass {defect:e})")]
    NotDiagonal { defect: f64 },

    #[error("unknown checker `{0}`")]
    UnknownChecker(String),

    #[error("checker list is empty")]
    EmptyCheckers,

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
