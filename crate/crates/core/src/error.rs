use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("edge probability is undefined at distance 0 (the model has no self-loops)")]
    ZeroDistance,

    #[error("long-edge cap of {cap} exceeded while sampling offset class {delta:?}")]
    EdgeCapExceeded { delta: Vec<i64>, cap: u64 },

    #[error("instance has {nodes} nodes, above the cap of {cap} for {what}")]
    NodeCapExceeded {
        what: &'static str,
        nodes: usize,
        cap: usize,
    },

    #[error("invalid edge list: {0}")]
    InvalidEdges(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(
        "exact diameter exceeded its budget of {budget} node visits; use estimate_diameter instead"
    )]
    BudgetExceeded { budget: u64 },

    #[error("operation requires d = 1, graph has d = {0}")]
    RequiresOneDimension(usize),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid renormalization plan: {0}")]
    InvalidPlan(String),

    #[error("renormalization certificate is not valid")]
    InvalidCertificate,

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
