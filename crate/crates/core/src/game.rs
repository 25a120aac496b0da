//! Rules for the four games: move generation, move application and
//! terminal detection.
//!
//! Terminal rule, shared by every game: a position with no legal move is
//! lost for the player to move under the normal convention and won under
//! misère.

use std::fmt;
use std::sync::Arc;

use crate::error::PositionError;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Game {
    /// Remove tokens from the pointed vertex, then move the pointer.
    NimgRm,
    /// Move the pointer, then remove tokens from the new vertex.
    NimgMr,
    /// Slide the token along an arc, deleting the vertex it leaves.
    VertexGeography,
    /// Slide the token along an arc, deleting the arc (the whole edge when
    /// undirected).
    EdgeGeography,
}

impl Game {
    pub fn is_nimg(self) -> bool {
        matches!(self, Game::NimgRm | Game::NimgMr)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Game::NimgRm => "nimg-rm",
            Game::NimgMr => "nimg-mr",
            Game::VertexGeography => "vgeo",
            Game::EdgeGeography => "egeo",
        }
    }

    pub fn from_tag(s: &str) -> Option<Game> {
        Some(match s {
            "nimg-rm" => Game::NimgRm,
            "nimg-mr" => Game::NimgMr,
            "vgeo" => Game::VertexGeography,
            "egeo" => Game::EdgeGeography,
            _ => return None,
        })
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Normal,
    Misere,
}

impl Convention {
    pub fn tag(self) -> &'static str {
        match self {
            Convention::Normal => "normal",
            Convention::Misere => "misere",
        }
    }

    pub fn from_tag(s: &str) -> Option<Convention> {
        match s {
            "normal" => Some(Convention::Normal),
            "misere" => Some(Convention::Misere),
            _ => None,
        }
    }

    pub fn flip(self) -> Convention {
        match self {
            Convention::Normal => Convention::Misere,
            Convention::Misere => Convention::Normal,
        }
    }

    /// Outcome of a position with no legal move.
    pub fn terminal_outcome(self) -> Outcome {
        match self {
            Convention::Normal => Outcome::P,
            Convention::Misere => Outcome::N,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `N`: the player to move wins. `P`: the previous player wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    N,
    P,
}

impl Outcome {
    pub fn flip(self) -> Outcome {
        match self {
            Outcome::N => Outcome::P,
            Outcome::P => Outcome::N,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::N => "N",
            Outcome::P => "P",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// NimG-RM: set the current vertex's weight to `keep`, then move to `to`.
    /// `to` equals the current vertex for removal-only moves on an isolated
    /// vertex.
    RemoveMove { keep: u32, to: usize },
    /// NimG-MR: move to `to`, then set its weight to `keep`.
    MoveRemove { to: usize, keep: u32 },
    /// Either Geography game.
    Slide { to: usize },
}

impl Move {
    pub fn destination(&self) -> usize {
        match *self {
            Move::RemoveMove { to, .. } | Move::MoveRemove { to, .. } | Move::Slide { to } => to,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::RemoveMove { keep, to } => write!(f, "{keep} {to}"),
            Move::MoveRemove { to, keep } => write!(f, "{to} {keep}"),
            Move::Slide { to } => write!(f, "{to}"),
        }
    }
}

/// Fixed-width bit mask over vertices or edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct Mask(Vec<u64>);

impl Mask {
    pub(crate) fn new(len: usize) -> Self {
        Mask(vec![0; len.div_ceil(64)])
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.0
    }
}

/// A game position. Immutable once built; moves produce new positions.
#[derive(Clone, PartialEq, Eq)]
pub struct Position {
    game: Game,
    graph: Arc<Graph>,
    weights: Vec<u32>,
    current: usize,
    // removed vertices (vertex geography) or removed edge ids (edge geography)
    removed: Mask,
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Position");
        d.field("game", &self.game)
            .field("graph", &self.graph)
            .field("current", &self.current);
        if self.game.is_nimg() {
            d.field("weights", &self.weights);
        } else {
            d.field("removed", &self.removed_items());
        }
        d.finish()
    }
}

impl Position {
    /// Starting position. `weights` is required for NimG games and must be
    /// absent for Geography.
    pub fn new(
        game: Game,
        graph: impl Into<Arc<Graph>>,
        weights: Option<Vec<u32>>,
        start: usize,
    ) -> Result<Self, PositionError> {
        let graph = graph.into();
        let n = graph.vertex_count();
        if start >= n {
            return Err(crate::error::GraphError::VertexOutOfRange(start).into());
        }
        let (weights, removed) = match (game, weights) {
            (Game::NimgRm | Game::NimgMr, Some(w)) => {
                if w.len() != n {
                    return Err(PositionError::WeightCount {
                        expected: n,
                        got: w.len(),
                    });
                }
                (w, Mask::default())
            }
            (Game::NimgRm | Game::NimgMr, None) => {
                return Err(PositionError::WeightCount {
                    expected: n,
                    got: 0,
                })
            }
            (_, Some(_)) => return Err(PositionError::UnexpectedWeights(game.tag())),
            (Game::VertexGeography, None) => (Vec::new(), Mask::new(n)),
            (Game::EdgeGeography, None) => (Vec::new(), Mask::new(graph.edge_count())),
        };
        Ok(Position {
            game,
            graph,
            weights,
            current: start,
            removed,
        })
    }

    pub fn nimg_rm(graph: Graph, weights: Vec<u32>, start: usize) -> Result<Self, PositionError> {
        Self::new(Game::NimgRm, graph, Some(weights), start)
    }

    pub fn nimg_mr(graph: Graph, weights: Vec<u32>, start: usize) -> Result<Self, PositionError> {
        Self::new(Game::NimgMr, graph, Some(weights), start)
    }

    pub fn vgeo(graph: Graph, start: usize) -> Result<Self, PositionError> {
        Self::new(Game::VertexGeography, graph, None, start)
    }

    pub fn egeo(graph: Graph, start: usize) -> Result<Self, PositionError> {
        Self::new(Game::EdgeGeography, graph, None, start)
    }

    pub fn game(&self) -> Game {
        self.game
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn current(&self) -> usize {
        self.current
    }

    /// Token counts; empty for Geography positions.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, u: usize) -> u32 {
        self.weights[u]
    }

    pub fn total_tokens(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum()
    }

    pub fn is_vertex_removed(&self, u: usize) -> bool {
        self.game == Game::VertexGeography && self.removed.get(u)
    }

    pub fn is_edge_removed(&self, id: usize) -> bool {
        self.game == Game::EdgeGeography && self.removed.get(id)
    }

    /// Removed vertex ids (vertex geography) or edge ids (edge geography).
    pub fn removed_items(&self) -> Vec<usize> {
        let len = match self.game {
            Game::VertexGeography => self.graph.vertex_count(),
            Game::EdgeGeography => self.graph.edge_count(),
            _ => 0,
        };
        (0..len).filter(|&i| self.removed.get(i)).collect()
    }

    pub(crate) fn removed_mask(&self) -> &Mask {
        &self.removed
    }

    /// Same position with the pointer placed on `u` (which must be live).
    pub fn with_current(&self, u: usize) -> Result<Self, PositionError> {
        if u >= self.graph.vertex_count() {
            return Err(crate::error::GraphError::VertexOutOfRange(u).into());
        }
        if self.is_vertex_removed(u) {
            return Err(PositionError::DeadCurrent(u));
        }
        let mut p = self.clone();
        p.current = u;
        Ok(p)
    }

    /// Same position with different token counts.
    pub fn with_weights(&self, weights: Vec<u32>) -> Result<Self, PositionError> {
        if !self.game.is_nimg() {
            return Err(PositionError::UnexpectedWeights(self.game.tag()));
        }
        if weights.len() != self.weights.len() {
            return Err(PositionError::WeightCount {
                expected: self.weights.len(),
                got: weights.len(),
            });
        }
        let mut p = self.clone();
        p.weights = weights;
        Ok(p)
    }

    /// Strictly decreasing under every move: tokens left for NimG, live
    /// vertices for vertex geography, live edges for edge geography.
    pub fn measure(&self) -> u64 {
        match self.game {
            Game::NimgRm | Game::NimgMr => self.total_tokens(),
            Game::VertexGeography => (self.graph.vertex_count() - self.removed.count()) as u64,
            Game::EdgeGeography => (self.graph.edge_count() - self.removed.count()) as u64,
        }
    }

    /// Equivalent starting position with no removed items: removed edges are
    /// dropped, and removed vertices lose all their edges.
    pub fn detached(&self) -> Position {
        let g = &self.graph;
        let edges: Vec<_> = match self.game {
            Game::VertexGeography => g
                .edges()
                .iter()
                .copied()
                .filter(|&(u, v)| !self.removed.get(u) && !self.removed.get(v))
                .collect(),
            Game::EdgeGeography => g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(id, _)| !self.removed.get(id))
                .map(|(_, &e)| e)
                .collect(),
            _ => return self.clone(),
        };
        let graph = Graph::new(g.kind(), g.vertex_count(), &edges).expect("subset of valid edges");
        Position::new(self.game, graph, None, self.current).expect("current stays live")
    }

    /// Legal moves in canonical order: ascending destination, then ascending
    /// kept weight.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        self.for_each_move(|m| out.push(m));
        out
    }

    fn for_each_move(&self, mut f: impl FnMut(Move)) {
        let u = self.current;
        match self.game {
            Game::NimgRm => {
                let w = self.weights[u];
                let arcs = self.graph.arcs(u);
                if arcs.is_empty() {
                    (0..w).for_each(|keep| f(Move::RemoveMove { keep, to: u }));
                } else {
                    for &(v, _) in arcs {
                        (0..w).for_each(|keep| f(Move::RemoveMove { keep, to: v }));
                    }
                }
            }
            Game::NimgMr => {
                for &(v, _) in self.graph.arcs(u) {
                    (0..self.weights[v]).for_each(|keep| f(Move::MoveRemove { to: v, keep }));
                }
            }
            Game::VertexGeography => {
                for &(v, _) in self.graph.arcs(u) {
                    if v != u && !self.removed.get(v) {
                        f(Move::Slide { to: v });
                    }
                }
            }
            Game::EdgeGeography => {
                for &(v, id) in self.graph.arcs(u) {
                    if !self.removed.get(id) {
                        f(Move::Slide { to: v });
                    }
                }
            }
        }
    }

    pub fn is_terminal(&self) -> bool {
        let u = self.current;
        match self.game {
            Game::NimgRm => self.weights[u] == 0,
            Game::NimgMr => self.graph.neighbors(u).all(|v| self.weights[v] == 0),
            Game::VertexGeography => self
                .graph
                .neighbors(u)
                .all(|v| v == u || self.removed.get(v)),
            Game::EdgeGeography => self
                .graph
                .arcs(u)
                .iter()
                .all(|&(_, id)| self.removed.get(id)),
        }
    }

    pub fn is_legal(&self, m: &Move) -> bool {
        let u = self.current;
        let g = &self.graph;
        match (self.game, *m) {
            (Game::NimgRm, Move::RemoveMove { keep, to }) => {
                keep < self.weights[u] && (g.has_edge(u, to) || (to == u && g.out_degree(u) == 0))
            }
            (Game::NimgMr, Move::MoveRemove { to, keep }) => {
                g.has_edge(u, to) && keep < self.weights[to]
            }
            (Game::VertexGeography, Move::Slide { to }) => {
                to != u && g.has_edge(u, to) && !self.removed.get(to)
            }
            (Game::EdgeGeography, Move::Slide { to }) => {
                g.edge_id(u, to).is_some_and(|id| !self.removed.get(id))
            }
            _ => false,
        }
    }

    pub fn apply_move(&self, m: &Move) -> Result<Position, PositionError> {
        if !self.is_legal(m) {
            return Err(PositionError::IllegalMove(format!(
                "{m} at vertex {} in {}",
                self.current, self.game
            )));
        }
        Ok(self.apply_unchecked(m))
    }

    pub(crate) fn apply_unchecked(&self, m: &Move) -> Position {
        let mut next = self.clone();
        let u = self.current;
        match *m {
            Move::RemoveMove { keep, to } => {
                next.weights[u] = keep;
                next.current = to;
            }
            Move::MoveRemove { to, keep } => {
                next.weights[to] = keep;
                next.current = to;
            }
            Move::Slide { to } => {
                match self.game {
                    Game::VertexGeography => next.removed.set(u),
                    _ => {
                        let id = self.graph.edge_id(u, to).expect("legal slide has an edge");
                        next.removed.set(id);
                    }
                }
                next.current = to;
            }
        }
        next
    }

    /// `(move, successor)` pairs in canonical move order.
    pub fn successors(&self) -> Vec<(Move, Position)> {
        let mut out = Vec::new();
        self.for_each_move(|m| {
            let p = self.apply_unchecked(&m);
            out.push((m, p));
        });
        out
    }

    /// Parses a move typed in this game's notation: `k v` for NimG-RM,
    /// `v k` for NimG-MR, `v` for Geography.
    pub fn parse_move(&self, text: &str) -> Option<Move> {
        let nums: Vec<u64> = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .ok()?;
        let idx = |x: u64| usize::try_from(x).ok();
        let weight = |x: u64| u32::try_from(x).ok();
        match (self.game, nums.as_slice()) {
            (Game::NimgRm, &[k, v]) => Some(Move::RemoveMove {
                keep: weight(k)?,
                to: idx(v)?,
            }),
            (Game::NimgMr, &[v, k]) => Some(Move::MoveRemove {
                to: idx(v)?,
                keep: weight(k)?,
            }),
            (Game::VertexGeography | Game::EdgeGeography, &[v]) => {
                Some(Move::Slide { to: idx(v)? })
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // grey vertex 1 carries 4 tokens; neighbours 0 (1 token), 2 and 3 (3 tokens)
    fn figure_one() -> Position {
        let g = Graph::undirected(4, &[(0, 1), (1, 2), (1, 3), (0, 2)]).unwrap();
        Position::nimg_rm(g, vec![1, 4, 3, 3], 1).unwrap()
    }

    #[test]
    fn remove_then_move_example() {
        let p = figure_one();
        let m = Move::RemoveMove { keep: 2, to: 0 };
        assert!(p.legal_moves().contains(&m));
        let q = p.apply_move(&m).unwrap();
        assert_eq!(q.weights(), &[1, 2, 3, 3]);
        assert_eq!(q.current(), 0);
        // 3 neighbours x 4 choices of kept weight
        assert_eq!(p.legal_moves().len(), 12);
    }

    #[test]
    fn move_then_remove_example() {
        let p = figure_one();
        let p = Position::nimg_mr(p.graph().clone(), p.weights().to_vec(), 1).unwrap();
        let m = Move::MoveRemove { to: 2, keep: 0 };
        assert!(p.legal_moves().contains(&m));
        let q = p.apply_move(&m).unwrap();
        assert_eq!(q.weights(), &[1, 4, 0, 3]);
        assert_eq!(q.current(), 2);
    }

    #[test]
    fn canonical_move_order() {
        let moves = figure_one().legal_moves();
        let mut sorted = moves.clone();
        sorted.sort_by_key(|m| match *m {
            Move::RemoveMove { keep, to } => (to, keep),
            _ => unreachable!(),
        });
        assert_eq!(moves, sorted);
    }

    #[test]
    fn null_weight_is_terminal() {
        let g = Graph::undirected(1, &[]).unwrap();
        let p = Position::nimg_rm(g, vec![0], 0).unwrap();
        assert!(p.legal_moves().is_empty());
        assert!(p.is_terminal());
        assert_eq!(Convention::Misere.terminal_outcome(), Outcome::N);
        assert_eq!(Convention::Normal.terminal_outcome(), Outcome::P);
    }

    #[test]
    fn isolated_vertex_allows_removal_only() {
        let g = Graph::undirected(1, &[]).unwrap();
        let p = Position::nimg_rm(g, vec![2], 0).unwrap();
        assert_eq!(
            p.legal_moves(),
            vec![
                Move::RemoveMove { keep: 0, to: 0 },
                Move::RemoveMove { keep: 1, to: 0 }
            ]
        );
    }

    #[test]
    fn nimg_mr_blocked_by_null_neighbours() {
        let g = Graph::undirected(3, &[(0, 1), (0, 2)]).unwrap();
        let p = Position::nimg_mr(g, vec![5, 0, 0], 0).unwrap();
        assert!(p.is_terminal());
        assert!(p.legal_moves().is_empty());
    }

    #[test]
    fn forced_rm_move_on_edge() {
        let g = Graph::undirected(2, &[(0, 1)]).unwrap();
        let p = Position::nimg_rm(g, vec![1, 1], 0).unwrap();
        assert_eq!(p.legal_moves(), vec![Move::RemoveMove { keep: 0, to: 1 }]);
        let q = p.apply_move(&Move::RemoveMove { keep: 0, to: 1 }).unwrap();
        assert_eq!(q.weights(), &[0, 1]);
        assert_eq!(q.current(), 1);
    }

    #[test]
    fn vertex_geography_deletes_departed_vertex() {
        // 0 -> 1 -> 2 -> 0, plus 0 -> 3; leaving 0 makes 3 unreachable
        let g = Graph::directed(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
        let p = Position::vgeo(g, 0).unwrap();
        let q = p.apply_move(&Move::Slide { to: 1 }).unwrap();
        assert!(q.is_vertex_removed(0));
        assert_eq!(q.graph().vertex_count(), 4);
        let r = q.apply_move(&Move::Slide { to: 2 }).unwrap();
        assert!(r.is_terminal());
        assert!(p.apply_move(&Move::Slide { to: 2 }).is_err());
    }

    #[test]
    fn edge_geography_keeps_reverse_arc() {
        let g = Graph::directed(2, &[(0, 1), (1, 0)]).unwrap();
        let p = Position::egeo(g, 0).unwrap();
        let q = p.apply_move(&Move::Slide { to: 1 }).unwrap();
        assert_eq!(q.legal_moves(), vec![Move::Slide { to: 0 }]);
        let r = q.apply_move(&Move::Slide { to: 0 }).unwrap();
        assert!(r.is_terminal());

        let u = Graph::undirected(2, &[(0, 1)]).unwrap();
        let p = Position::egeo(u, 0).unwrap();
        let q = p.apply_move(&Move::Slide { to: 1 }).unwrap();
        assert!(q.is_terminal());
    }

    #[test]
    fn vertex_geography_sink_is_terminal() {
        let g = Graph::directed(2, &[(1, 0)]).unwrap();
        let p = Position::vgeo(g, 0).unwrap();
        assert!(p.is_terminal());
    }

    #[test]
    fn vertex_geography_ignores_loops() {
        let g = Graph::directed(1, &[(0, 0)]).unwrap();
        assert!(Position::vgeo(g.clone(), 0).unwrap().is_terminal());
        // edge geography traverses the loop and deletes it
        let p = Position::egeo(g, 0).unwrap();
        assert_eq!(p.legal_moves(), vec![Move::Slide { to: 0 }]);
        assert!(p.apply_move(&Move::Slide { to: 0 }).unwrap().is_terminal());
    }

    #[test]
    fn parse_moves_per_game() {
        let p = figure_one();
        assert_eq!(
            p.parse_move("2 0"),
            Some(Move::RemoveMove { keep: 2, to: 0 })
        );
        assert_eq!(p.parse_move("2"), None);
        assert_eq!(p.parse_move("x y"), None);
        let g = Graph::undirected(2, &[(0, 1)]).unwrap();
        let v = Position::vgeo(g, 0).unwrap();
        assert_eq!(v.parse_move(" 1 "), Some(Move::Slide { to: 1 }));
    }

    #[test]
    fn detached_geography_is_fresh() {
        let g = Graph::undirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = Position::vgeo(g, 0).unwrap();
        let q = p.apply_move(&Move::Slide { to: 1 }).unwrap();
        let d = q.detached();
        assert!(d.removed_items().is_empty());
        assert_eq!(d.legal_moves(), q.legal_moves());
        assert_eq!(d.graph().edges(), &[(1, 2)]);
    }
}
