use thiserror::Error;

/// Everything that can go wrong while building a problem, solving it or
/// computing a bound.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid constraint system: {0}")]
    InvalidSystem(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("undefined norm: {0}")]
    UndefinedNorm(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("not a point of the simplex: {0}")]
    NotSimplex(String),

    #[error("constraints are infeasible (smallest achievable violation {violation:.3e})")]
    Infeasible { violation: f64 },

    #[error("solver failure: {reason} (kkt residual {residual:.3e})")]
    SolverFailure { reason: String, residual: f64 },

    #[error("rejected solution: {0}")]
    Rejected(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("outside bound validity: {condition} ({detail})")]
    Validity { condition: String, detail: String },

    #[error("root finding failed: {0}")]
    Root(String),

    #[error("enumeration budget exceeded: {needed:.3e} > {budget}")]
    Budget { needed: f64, budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
