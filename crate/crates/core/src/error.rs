use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable `{0}` has no value in the assignment")]
    MissingVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no nontrivial leading balance found for {0}")]
    NoBalance(String),
    #[error("resonance at tau-order {order} is incompatible (log term required); residual {residual}")]
    LogTermRequired { order: usize, residual: String },
    #[error("Kowalevski matrix is defective at resonance {0}")]
    DefectiveResonance(String),
    #[error("relation is not quadratic in `{0}`")]
    NotQuadratic(String),
    #[error("cannot eliminate `{0}` linearly")]
    EliminationNotLinear(String),
    #[error("branch point count {0} is odd")]
    OddBranchCount(usize),
    #[error("root clusters are ambiguous at tolerance {tol:e} (closest pair {distance:e})")]
    AmbiguousClusters { tol: f64, distance: f64 },
    #[error("square-root branch tracking is ambiguous near t = {t}; refine sampling")]
    BranchTracking { t: String },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
