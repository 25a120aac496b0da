use thiserror::Error;

use crate::graph::GraphKind;

/// Errors raised while constructing graphs and positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("operation requires a {expected:?} graph")]
    WrongKind { expected: GraphKind },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("weight map has {got} entries, graph has {expected} vertices")]
    WeightCount { expected: usize, got: usize },
    #[error("{0} positions carry no weights")]
    UnexpectedWeights(&'static str),
    #[error("current vertex {0} has been removed")]
    DeadCurrent(usize),
    #[error("illegal move {0}")]
    IllegalMove(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("position needs {needed} bits of state, encoding holds at most {cap}")]
    Capacity { needed: usize, cap: usize },
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("position is a P-position, no winning strategy exists")]
    NotWinning,
    #[error("budget of {0} states exhausted")]
    BudgetExhausted(u64),
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("graph is not bipartite under the supplied partition")]
    NotBipartite,
    #[error("matching needs an undirected graph")]
    Directed,
    #[error("brute force limited to {cap} edges, graph has {got}")]
    TooManyEdges { cap: usize, got: usize },
}

/// Returned by a polynomial solver when the position falls outside its class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{solver} does not apply: {reason}")]
pub struct NotApplicable {
    pub solver: &'static str,
    pub reason: String,
}

impl NotApplicable {
    pub(crate) fn new(solver: &'static str, reason: impl Into<String>) -> Self {
        NotApplicable {
            solver,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("{m} edges requested but at most {max} fit on {n} vertices")]
    InfeasibleEdgeCount { n: usize, m: usize, max: usize },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error("cannot write {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    NotApplicable(#[from] NotApplicable),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("source must be {expected}, got {got}")]
    WrongSource { expected: String, got: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
