use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("{context}: matrix must be square, found {rows}x{cols}")]
    NotSquare {
        context: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("edge {edge} references unknown node {node:?}")]
    DanglingEdge { edge: String, node: String },
    #[error("edge {0} is a self-loop")]
    SelfLoopEdge(String),
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("network has no nodes")]
    EmptyNetwork,
    #[error("missing hydraulic parameter {0}")]
    MissingParameter(&'static str),
    #[error("invalid parameter {name}: {msg}")]
    InvalidParameter { name: &'static str, msg: String },
    #[error("state {index} must be strictly positive, got {value}")]
    NonPositiveState { index: usize, value: f64 },
    #[error("malformed output matrix at row {row}: {msg}")]
    MalformedOutput { row: usize, msg: String },
    #[error("invalid sensor: {0}")]
    InvalidSensor(String),
    #[error("PageRank did not converge in {iters} iterations (residual {residual:e})")]
    NonConvergence { iters: usize, residual: f64 },
    #[error("PageRank entry {index} is not positive ({value})")]
    NonPositiveRank { index: usize, value: f64 },
    #[error("invalid PageRank configuration: {0}")]
    InvalidConfig(String),
    #[error("{n} states exceed the brute-force limit of {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("cost table: {0}")]
    Costs(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable identifier, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSquare { .. } => "not_square",
            Error::Parse { .. } => "parse",
            Error::NonFinite { .. } => "non_finite",
            Error::DanglingEdge { .. } => "dangling_edge",
            Error::SelfLoopEdge(_) => "self_loop_edge",
            Error::DuplicateNode(_) => "duplicate_node",
            Error::EmptyNetwork => "empty_network",
            Error::MissingParameter(_) => "missing_parameter",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::NonPositiveState { .. } => "non_positive_state",
            Error::MalformedOutput { .. } => "malformed_output",
            Error::InvalidSensor(_) => "invalid_sensor",
            Error::NonConvergence { .. } => "non_convergence",
            Error::NonPositiveRank { .. } => "non_positive_rank",
            Error::InvalidConfig(_) => "invalid_config",
            Error::SizeLimit { .. } => "size_limit",
            Error::Costs(_) => "costs",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
