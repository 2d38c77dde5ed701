use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree sequence is empty")]
    EmptyDegrees,
    #[error("invalid degree at index {index}: {value}")]
    InvalidDegree { index: usize, value: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("instance too large: estimated {estimate} candidates exceeds limit {limit}")]
    TooLarge { estimate: u128, limit: u128 },
    #[error("edge {0} is already in the tree")]
    EdgeInTree(String),
    #[error("edge {0} is out of range")]
    EdgeOutOfRange(String),
    #[error("tree {0} is not a vertex of the graph")]
    UnknownVertex(String),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("trees belong to different degree functions")]
    Mismatch,
    #[error("facet characterization requires m*n > 4 (got m={m}, n={n})")]
    LemmaScope { m: usize, n: usize },
    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("illegal move at step {step}: {reason}")]
    IllegalMove { step: usize, reason: String },
    #[error("margins are not balanced: {0}")]
    Margins(String),
}
