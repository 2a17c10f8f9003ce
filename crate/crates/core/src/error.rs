use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency is not symmetric at ({u}, {v})")]
    Asymmetric { u: usize, v: usize },
    #[error("vertex count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("clique order r = {0} must be at least 3")]
    CliqueOrder(usize),
    #[error("|M| = {m} exceeds n = {n}")]
    SetTooLarge { m: usize, n: usize },
    #[error("invalid family spec: {invariant} ({detail})")]
    InvalidSpec {
        invariant: &'static str,
        detail: String,
    },
    #[error("parameter {name} = {value} outside [0, 1)")]
    RatioOutOfRange { name: &'static str, value: String },
    #[error("clique sizes sum to {total} > n = {n}")]
    SizesExceedOrder { total: usize, n: usize },
    #[error("clique size {size} below r = {r}")]
    CliqueTooSmall { size: usize, r: usize },
    #[error("telescoped bound needs n <= (r-1)m, got n = {n}, r = {r}, m = {m}")]
    NotCaseOne { n: usize, m: usize, r: usize },
    #[error("{operation}: precondition failed: {detail}")]
    Precondition { operation: &'static str, detail: String },
    #[error("{0}")]
    Seq(#[from] SeqPrecondition),
    #[error("{operation}: conclusion failed: {detail}")]
    ConclusionFailed { operation: &'static str, detail: String },
    #[error("oracle supports {bound}; got {detail}")]
    OracleRange { bound: &'static str, detail: String },
}

/// Ways the input to a single-vertex family modification can be malformed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqPrecondition {
    #[error("single-vertex modification needs n > (r-1)m")]
    NotCaseTwo,
    #[error("vertex {0} lies in M")]
    VertexInM(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("vertex {0} is not adjacent to exactly V \\ (M + v)")]
    NotFullNeighbourhood(usize),
    #[error("new neighbourhood has {got} vertices, expected n - m - 1 = {expected}")]
    WrongSize { got: usize, expected: usize },
    #[error("new neighbourhood contains the vertex itself")]
    ContainsSelf,
    #[error("new neighbourhood has no vertex in M")]
    MissesM,
}
