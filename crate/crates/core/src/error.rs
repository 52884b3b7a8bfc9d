use thiserror::Error;

use crate::sdp::SdpTraceRow;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("constraints are rank deficient: rank {rank} but {rows} rows ({deficient} dependent)")]
    RankDeficient {
        rank: usize,
        rows: usize,
        deficient: usize,
    },

    #[error("freedom direction {column} has an infinite one-sided steplength")]
    UnboundedFreedom { column: usize },

    #[error("no degrees of freedom available (m_xi = 0)")]
    NoFreedom,

    #[error("centering lost positive definiteness after {halvings} halvings")]
    CenteringFailed { halvings: usize },

    #[error("objective is constant on the feasible set")]
    AlreadyOptimal,

    #[error("problem is unbounded along the current search direction")]
    Unbounded,

    #[error(
        "no feasible starting point found after {iterations} iterations (residual {residual:.3e})"
    )]
    InfeasibleStart {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("feasibility violated: {}", .0.join("; "))]
    Feasibility(Vec<String>),

    #[error("singular value decomposition did not converge")]
    NoConvergence,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: matrix number {matno} exceeds m = {m}")]
    Index { line: usize, matno: usize, m: usize },

    #[error("solver aborted in iteration {iteration}: {cause}")]
    Aborted {
        iteration: usize,
        cause: Box<Error>,
        trace: Vec<SdpTraceRow>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
