use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("pair {{{0}, {1}}} has no color")]
    MissingEdge(usize, usize),
    #[error("pair {{{0}, {1}}} is colored more than once")]
    DuplicateEdge(usize, usize),
    #[error("color {color} outside palette [1, {ell}]")]
    ColorOutOfRange { color: usize, ell: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{n} vertices exceeds the supported maximum of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("empty vertex set")]
    EmptySet,
    #[error("pattern has no edges")]
    EmptyPattern,
    #[error("parts list is empty")]
    EmptyPartsList,
    #[error("pattern is not bipartite")]
    NotBipartite,
    #[error("pattern is a star")]
    IsStar,
    #[error("smaller part of the pattern has one vertex; repeated parts would be empty")]
    DegenerateSmallPart,
    #[error("chromatic number {0} is below 3")]
    ChiTooSmall(usize),
    #[error("palette of {ell} colors is too small; need at least {needed}")]
    PaletteTooSmall { ell: usize, needed: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("rainbow triangle on vertices ({0}, {1}, {2})")]
    RainbowTriangleFound(usize, usize, usize),
    #[error("no partition found")]
    NotFound,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("inconsistent constraints: {0}")]
    InconsistentConstraints(String),
    #[error("cache corrupt at line {line}: {reason}")]
    CacheCorrupt { line: usize, reason: String },
    #[error("conflicting exact values for {key}: stored {stored}, new {new}")]
    CacheConflict { key: String, stored: u64, new: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no G_k-partition found for a coloring that should have one")]
    PartitionNotFound,
    #[error("no solution below the scan cap")]
    NoSolutionInRange,
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("search returned a witness that fails verification: {0}")]
    WitnessRejected(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
