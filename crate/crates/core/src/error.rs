use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} has zero rate row sum")]
    ZeroRowSum { vertex: usize },

    #[error("invalid rate matrix: {0}")]
    InvalidRates(String),

    #[error("invalid probability matrix: {0}")]
    InvalidProbabilities(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    EigenNonConvergence { iterations: usize, residual: f64 },

    #[error("mixing length undefined: lambda = {lambda} >= 1")]
    MixUndefined { lambda: f64 },

    #[error("bisection bracket failed: gamma_1 ranges over [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("distribution has zero mass at vertex {vertex}")]
    ZeroStationaryMass { vertex: usize },

    #[error("vertex {vertex} has only {available} positive-rate partners, need {needed}")]
    InsufficientSupport { vertex: usize, available: usize, needed: usize },

    #[error("graph too large for exhaustive oracle: n = {n}, cap = {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("table does not respect the sequence in column {column}")]
    NotRespecting { column: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
