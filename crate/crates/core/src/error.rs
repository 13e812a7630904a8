use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have between 1 and {max} vertices, got {n}")]
    VertexCount { n: usize, max: usize },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("graph not connected")]
    NotConnected,
    #[error("edge {0}-{1} is not in the graph")]
    MissingEdge(usize, usize),
    #[error("expected a graph on {expected} vertices, got {found}")]
    WrongVertexCount { expected: usize, found: usize },
}

/// Failure to parse a graph description, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct GraphParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("generator {0} is the zero vector")]
    ZeroGenerator(usize),
    #[error("generators {0} and {1} are parallel")]
    ParallelGenerators(usize, usize),
    #[error("generators have inconsistent lengths")]
    Ragged,
    #[error("generator set has rank {0}; at least 2 is required")]
    RankTooSmall(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("points have inconsistent dimensions")]
    Ragged,
    #[error("points span a {found}-dimensional affine space inside dimension {expected}")]
    NotFullDimensional { expected: usize, found: usize },
    #[error("hyperplane crosses edge {0:?}-{1:?} away from its endpoints")]
    NewVertex(Vec<String>, Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeloneError {
    #[error("inadmissible slice: {0}")]
    InadmissibleSlice(String),
    #[error("inadmissible configuration: {0}")]
    InadmissibleConfig(String),
    #[error("malformed star: {0}")]
    MalformedStar(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
