use thiserror::Error;

/// Errors raised by graph construction, special functions, and the
/// estimators built on top of them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph is disconnected")]
    Disconnected,

    #[error("self-loop at vertex {0}")]
    SelfLoop(String),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("duplicate vertex label {0}")]
    DuplicateVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph too large: {what} = {value} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("nonpositive or non-finite weight at edge {index}: {value}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("gauge error: {0}")]
    Gauge(String),

    #[error("root mismatch: {0} vs {1}")]
    RootMismatch(usize, usize),

    #[error("not in image of the normalized-field map: spectral radius {0}")]
    NotInImage(f64),

    #[error("enumeration budget exceeded: {count} > {budget}")]
    BudgetExceeded { count: f64, budget: f64 },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("not a star rooted at its center")]
    NotAStar,

    #[error("empty sample set")]
    EmptySamples,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain { func, msg: msg.into() }
}
