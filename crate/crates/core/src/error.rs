use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("duplicate self-loop at vertex {0}")]
    DuplicateLoop(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("graph exceeds the arc cap ({arcs} > {cap})")]
    TooManyArcs { arcs: usize, cap: usize },

    #[error("removing the sinks leaves no internal vertex")]
    EmptyInternalGraph,

    #[error("internal graph is disconnected after sink removal")]
    DisconnectedInternalGraph,

    #[error("vector length {found} does not match domain of size {expected}")]
    DomainMismatch { expected: usize, found: usize },

    #[error("walk is not chained at position {0}")]
    NotChained(usize),

    #[error("inadmissible anchor pair: {0}")]
    InadmissibleAnchor(String),

    #[error("rank loss while orthonormalizing the {block} block")]
    RankLoss { block: String },

    #[error("lift of an interior eigenvector vanished (mu = {mu})")]
    ZeroLift { mu: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("linear system is inconsistent (residual {0:.3e})")]
    InconsistentSystem(f64),

    #[error("expected {expected} inflow amplitudes, got {found}")]
    InflowCount { expected: usize, found: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid initial state: {0}")]
    InvalidState(String),
}
