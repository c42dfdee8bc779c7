use thiserror::Error;

/// Errors raised by word algebra, linear algebra and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("letter B{index} out of range for alphabet size {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("X-occurrence {j} out of range 1..={degree}")]
    OccurrenceOutOfRange { j: usize, degree: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("scalar kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("no matrix assigned to letter {0}")]
    MissingLetter(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPd,
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("word `{0}` is not interlaced")]
    NotInterlaced(String),
    #[error("word `{0}` is not symmetric")]
    NotSymmetricWord(String),
    #[error("word `{0}` does not contain X")]
    MissingX(String),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not in the image of the evaluation map")]
    NotInImage,
    #[error("matrix is singular")]
    Singular,
    #[error("Newton iteration stopped after {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },
    #[error("Jacobian is numerically singular (inverse norm {0:e})")]
    SingularJacobian(f64),
    #[error("path tracking failed: step underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("iterate norm {norm:e} exceeded divergence cap {cap:e}")]
    Divergence { norm: f64, cap: f64 },
    #[error("Jacobian determinant vanishes at solution {index}")]
    ZeroJacobian { index: usize },
    #[error("candidate {index} does not solve the equation (residual {residual:e})")]
    NotASolution { index: usize, residual: f64 },
    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
