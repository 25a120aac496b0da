//! Solvers and verification tools for NimG-RM, NimG-MR, Vertex Geography and
//! Edge Geography under normal and misère play.
//!
//! * [`game`] holds the rules and [`solver`] the exhaustive oracle.
//! * [`matching`] and [`poly`] give the polynomial misère NimG-RM solvers
//!   and the undirected Vertex Geography solver.
//! * [`reductions`] builds the gadget constructions that carry normal-play
//!   positions to misère positions with the same outcome.
//! * [`arena`] generates random instances and cross-checks all of the
//!   above against the oracle.

pub mod arena;
pub mod error;
pub mod format;
pub mod game;
pub mod graph;
pub mod matching;
pub mod par;
pub mod poly;
pub mod reductions;
pub mod solver;

pub use error::{
    ArenaError, GraphError, MatchingError, NotApplicable, ParseError, PolyError, PositionError,
    ReductionError, SolveError,
};
pub use format::{parse_position, serialize_position, GameFile};
pub use game::{Convention, Game, Move, Outcome, Position};
pub use graph::{Bipartition, Graph, GraphKind, Relabel};
pub use matching::Matching;
pub use par::ExecMode;
pub use poly::{Policy, PolySolution, Provenance};
pub use reductions::{reduce, ReductionKind, ReductionOutput};
pub use solver::{solve, SolveReport, Solver, DEFAULT_BUDGET};
