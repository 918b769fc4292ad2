use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is numerically singular (pivot {pivot:e} at index {index})")]
    Singular { index: usize, pivot: f64 },

    #[error("low-rank update is numerically singular")]
    SingularUpdate,

    #[error("constraint matrix does not have full row rank")]
    RankDeficient,

    #[error("point is not feasible: {0}")]
    Infeasible(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("central path oracle did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("invariant violated at iteration {iteration}: {detail}")]
    InvariantViolation { iteration: usize, detail: String },

    #[error("potential overflow: lambda * |r| = {0} exceeds the guard")]
    Overflow(f64),

    #[error("approximation oracle contract violated: {0}")]
    OracleContractViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("extraction failed: {0}")]
    ExtractionFailure(String),

    #[error("rounding failed: {0}")]
    RoundingFailure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    #[error("{phase}: {source}")]
    Phase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn in_phase(self, phase: &'static str) -> Self {
        Error::Phase { phase, source: Box::new(self) }
    }

    /// The innermost error, with any phase context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Phase { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn invariant(iteration: usize, detail: impl Into<String>) -> Self {
        Error::InvariantViolation { iteration, detail: detail.into() }
    }
}
