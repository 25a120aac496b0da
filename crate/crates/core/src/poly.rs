//! Polynomial-time solvers for misère NimG-RM (bipartite graphs, all
//! weights 1, loops on every vertex) and for normal Vertex Geography on
//! undirected graphs, each with a playable winning policy.
//!
//! All of them reduce to one matching question: is the pointer vertex
//! covered by every maximum matching, i.e. is ν(G − u) < ν(G)?

use crate::error::{NotApplicable, PolyError, SolveError};
use crate::game::{Convention, Game, Move, Outcome, Position};
use crate::graph::{Graph, Relabel};
use crate::matching::cover_query;
use crate::solver::solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    MatchingFollowing,
    LoopStalling,
    Exhaustive,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::MatchingFollowing => "matching-following",
            Provenance::LoopStalling => "loop-stalling",
            Provenance::Exhaustive => "exhaustive",
        }
    }
}

/// A deterministic move chooser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Policy {
    /// Empty the current vertex (NimG-RM) or leave it (Geography) along the
    /// edge of a fixed maximum matching.
    MatchingFollowing { mate: Vec<Option<usize>> },
    /// Misère NimG-RM with a loop on every vertex. Re-derived at each
    /// position from the heavy-vertex rule and the weight-1 criterion.
    LoopStalling,
    /// Canonically-first winning move found by exhaustive search.
    Exhaustive { convention: Convention, budget: u64 },
}

impl Policy {
    pub fn provenance(&self) -> Provenance {
        match self {
            Policy::MatchingFollowing { .. } => Provenance::MatchingFollowing,
            Policy::LoopStalling => Provenance::LoopStalling,
            Policy::Exhaustive { .. } => Provenance::Exhaustive,
        }
    }

    /// Move to play at `p`, `None` at terminal positions. On positions the
    /// policy cannot win it still returns a legal move.
    pub fn choose(&self, p: &Position) -> Result<Option<Move>, SolveError> {
        if p.is_terminal() {
            return Ok(None);
        }
        let first = || p.legal_moves().first().copied();
        let u = p.current();
        let picked = match self {
            Policy::MatchingFollowing { mate } => {
                let partner = mate.get(u).copied().flatten();
                match (p.game(), partner) {
                    (Game::NimgRm, Some(v)) => Some(Move::RemoveMove { keep: 0, to: v }),
                    (Game::NimgRm, None) if p.graph().out_degree(u) == 0 && p.weight(u) >= 2 => {
                        Some(Move::RemoveMove { keep: 1, to: u })
                    }
                    (Game::VertexGeography, Some(v)) => Some(Move::Slide { to: v }),
                    _ => None,
                }
                .filter(|m| p.is_legal(m))
            }
            Policy::LoopStalling => loop_stalling_move(p)?,
            Policy::Exhaustive { convention, budget } => {
                let r = solve(p, *convention, *budget)?;
                if r.budget_exhausted {
                    return Err(SolveError::BudgetExhausted(*budget));
                }
                r.principal_move
            }
        };
        Ok(picked.or_else(first))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySolution {
    pub outcome: Outcome,
    /// Present exactly when the outcome is N.
    pub policy: Option<Policy>,
}

impl PolySolution {
    fn new(outcome: Outcome, policy: Policy) -> Self {
        PolySolution {
            outcome,
            policy: (outcome == Outcome::N).then_some(policy),
        }
    }
}

/// Vertices carrying at least two tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavySet {
    members: Vec<bool>,
}

impl HeavySet {
    pub fn of(p: &Position) -> Self {
        HeavySet {
            members: p.weights().iter().map(|&w| w >= 2).collect(),
        }
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members[u]
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&u| self.members[u])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preprocessed {
    pub position: Position,
    pub relabel: Relabel,
}

/// Restricts a misère NimG-RM position to the vertices holding tokens.
///
/// Moving onto an empty vertex hands the opponent a misère win, so dropping
/// empty vertices only removes losing moves. The exception is a pointer
/// whose neighbours are all empty: there every move loses, so one empty
/// neighbour is kept to stop the pointer from looking isolated.
pub fn preprocess_positive(p: &Position) -> Result<Preprocessed, PolyError> {
    if p.game() != Game::NimgRm {
        return Err(NotApplicable::new("preprocess", "not a nimg-rm position").into());
    }
    let u = p.current();
    if p.weight(u) == 0 {
        return Err(PolyError::Usage(
            "pointer is on an empty vertex; the position is terminal".into(),
        ));
    }
    let g = p.graph();
    let mut keep: Vec<bool> = p.weights().iter().map(|&w| w >= 1).collect();
    if g.neighbors(u).all(|v| !keep[v]) {
        if let Some(v) = g.neighbors(u).next() {
            keep[v] = true;
        }
    }
    let (sub, relabel) = g.induced_subgraph(&keep);
    let weights = relabel.to_old.iter().map(|&v| p.weight(v)).collect();
    let start = relabel.to_new[u].expect("pointer kept");
    let position = Position::nimg_rm(sub, weights, start).expect("consistent restriction");
    Ok(Preprocessed { position, relabel })
}

fn lift_mate(mate: &[Option<usize>], relabel: &Relabel) -> Vec<Option<usize>> {
    let mut out = vec![None; relabel.to_new.len()];
    for (u, m) in mate.iter().enumerate() {
        out[relabel.to_old[u]] = m.map(|v| relabel.to_old[v]);
    }
    out
}

fn require_rm(p: &Position, solver: &'static str) -> Result<(), PolyError> {
    if p.game() != Game::NimgRm {
        return Err(NotApplicable::new(solver, format!("game is {}", p.game())).into());
    }
    if p.graph().is_directed() {
        return Err(NotApplicable::new(solver, "graph is directed").into());
    }
    Ok(())
}

// Pointer with no token-holding neighbour: the game cannot leave it.
fn stranded_outcome(p: &Position) -> Option<PolySolution> {
    let u = p.current();
    let g = p.graph();
    if g.neighbors(u).any(|v| p.weight(v) >= 1) {
        return None;
    }
    let empty = Policy::MatchingFollowing {
        mate: vec![None; g.vertex_count()],
    };
    // isolated: a lone heap, won in misère by leaving exactly one token
    let outcome = if g.out_degree(u) == 0 && p.weight(u) >= 2 {
        Outcome::N
    } else {
        Outcome::P
    };
    Some(PolySolution::new(outcome, empty))
}

/// Misère NimG-RM on a loop-free bipartite graph: N iff every maximum
/// matching of the token-holding subgraph covers the pointer.
pub fn solve_bipartite_rm_misere(p: &Position) -> Result<PolySolution, PolyError> {
    const NAME: &str = "bipartite matching solver";
    require_rm(p, NAME)?;
    if !p.graph().is_loop_free() {
        return Err(NotApplicable::new(NAME, "graph has loops").into());
    }
    let n = p.graph().vertex_count();
    if p.weight(p.current()) == 0 {
        return Ok(PolySolution::new(
            Outcome::N,
            Policy::MatchingFollowing {
                mate: vec![None; n],
            },
        ));
    }
    if let Some(s) = stranded_outcome(p) {
        return Ok(s);
    }
    let pre = preprocess_positive(p)?;
    let g = pre.position.graph();
    if g.bipartition().expect("undirected").is_none() {
        return Err(NotApplicable::new(NAME, "token-holding subgraph has an odd cycle").into());
    }
    let q = cover_query(g, pre.position.current())?;
    let outcome = if q.covered { Outcome::N } else { Outcome::P };
    let mate = lift_mate(q.matching.mates(), &pre.relabel);
    Ok(PolySolution::new(
        outcome,
        Policy::MatchingFollowing { mate },
    ))
}

/// Normal Vertex Geography on an undirected loop-free graph: N iff every
/// maximum matching of the live subgraph covers the token.
pub fn solve_vgeo_undirected_normal(p: &Position) -> Result<PolySolution, PolyError> {
    const NAME: &str = "undirected geography solver";
    if p.game() != Game::VertexGeography {
        return Err(NotApplicable::new(NAME, format!("game is {}", p.game())).into());
    }
    let g = p.graph();
    if g.is_directed() {
        return Err(NotApplicable::new(NAME, "graph is directed").into());
    }
    if !g.is_loop_free() {
        return Err(NotApplicable::new(NAME, "graph has loops").into());
    }
    let live: Vec<bool> = (0..g.vertex_count())
        .map(|v| !p.is_vertex_removed(v))
        .collect();
    let (sub, relabel) = g.induced_subgraph(&live);
    let q = cover_query(&sub, relabel.to_new[p.current()].expect("token is live"))?;
    let outcome = if q.covered { Outcome::N } else { Outcome::P };
    let mate = lift_mate(q.matching.mates(), &relabel);
    Ok(PolySolution::new(
        outcome,
        Policy::MatchingFollowing { mate },
    ))
}

/// Misère NimG-RM with one token everywhere plays exactly like normal
/// Vertex Geography on the same undirected graph.
pub fn solve_weight1_rm_misere(p: &Position) -> Result<PolySolution, PolyError> {
    const NAME: &str = "weight-1 solver";
    require_rm(p, NAME)?;
    if !p.graph().is_loop_free() {
        return Err(NotApplicable::new(NAME, "graph has loops").into());
    }
    if let Some(v) = p.weights().iter().position(|&w| w != 1) {
        return Err(NotApplicable::new(
            NAME,
            format!("vertex {v} does not hold exactly one token"),
        )
        .into());
    }
    let geo = Position::vgeo(p.graph().clone(), p.current()).expect("same graph and start");
    solve_vgeo_undirected_normal(&geo)
}

fn require_all_loops(p: &Position) -> Result<(), PolyError> {
    const NAME: &str = "loop solver";
    require_rm(p, NAME)?;
    if !p.graph().has_all_loops() {
        return Err(NotApplicable::new(NAME, "some vertex has no loop").into());
    }
    Ok(())
}

// Component of the pointer among single-token vertices, loops dropped, and
// its cover query.
fn light_component_query(
    p: &Position,
) -> Result<(crate::matching::CoverQuery, Relabel), PolyError> {
    let g = p.graph();
    let light: Vec<bool> = p.weights().iter().map(|&w| w == 1).collect();
    let (sub, relabel) = g.induced_subgraph(&light);
    let start = relabel.to_new[p.current()].expect("pointer holds one token");
    let comp = sub.connected_component(start).expect("undirected");
    let (cu, inner) = sub.induced_subgraph(&comp);
    let cu = cu.without_loops();
    let q = cover_query(&cu, inner.to_new[start].expect("start in its component"))?;
    let to_old = inner
        .to_old
        .iter()
        .map(|&v| relabel.to_old[v])
        .collect::<Vec<_>>();
    let mut to_new = vec![None; g.vertex_count()];
    for (i, &v) in to_old.iter().enumerate() {
        to_new[v] = Some(i);
    }
    Ok((q, Relabel { to_new, to_old }))
}

fn loops_outcome(p: &Position) -> Result<Outcome, PolyError> {
    let w = p.weight(p.current());
    Ok(match w {
        0 => Convention::Misere.terminal_outcome(),
        1 => {
            if light_component_query(p)?.0.covered {
                Outcome::N
            } else {
                Outcome::P
            }
        }
        _ => Outcome::N,
    })
}

fn loop_stalling_move(p: &Position) -> Result<Option<Move>, PolyError> {
    let u = p.current();
    match p.weight(u) {
        0 => Ok(None),
        1 => {
            let (q, relabel) = light_component_query(p)?;
            if !q.covered {
                return Ok(None);
            }
            let v = q
                .matching
                .mate(relabel.to_new[u].expect("pointer in component"))
                .expect("covered vertex is matched");
            Ok(Some(Move::RemoveMove {
                keep: 0,
                to: relabel.to_old[v],
            }))
        }
        _ => {
            for v in p.graph().neighbors(u).filter(|&v| v != u) {
                let m = Move::RemoveMove { keep: 0, to: v };
                if loops_outcome(&p.apply_unchecked(&m))? == Outcome::P {
                    return Ok(Some(m));
                }
            }
            Ok(Some(Move::RemoveMove { keep: 1, to: u }))
        }
    }
}

/// Misère NimG-RM with a loop on every vertex. A pointer on two or more
/// tokens always wins; on one token the game is confined to the pointer's
/// component of single-token vertices and decided by the weight-1 rule.
pub fn solve_loops_rm_misere(p: &Position) -> Result<PolySolution, PolyError> {
    require_all_loops(p)?;
    Ok(PolySolution::new(loops_outcome(p)?, Policy::LoopStalling))
}

/// Which polynomial solver handled a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolySolver {
    Bipartite,
    Weight1,
    Loops,
    UndirectedGeography,
}

impl PolySolver {
    pub fn tag(self) -> &'static str {
        match self {
            PolySolver::Bipartite => "bipartite-matching",
            PolySolver::Weight1 => "weight1-matching",
            PolySolver::Loops => "loops-matching",
            PolySolver::UndirectedGeography => "vgeo-matching",
        }
    }
}

type SolverFn = fn(&Position) -> Result<PolySolution, PolyError>;

/// First polynomial solver whose class contains `(p, c)`.
pub fn solve_polynomial(
    p: &Position,
    c: Convention,
) -> Result<(PolySolver, PolySolution), PolyError> {
    let tried: &[(PolySolver, SolverFn)] = match (p.game(), c) {
        (Game::NimgRm, Convention::Misere) => &[
            (PolySolver::Bipartite, solve_bipartite_rm_misere),
            (PolySolver::Weight1, solve_weight1_rm_misere),
            (PolySolver::Loops, solve_loops_rm_misere),
        ],
        (Game::VertexGeography, Convention::Normal) => &[(
            PolySolver::UndirectedGeography,
            solve_vgeo_undirected_normal,
        )],
        _ => &[],
    };
    let mut reasons = Vec::new();
    for &(which, f) in tried {
        match f(p) {
            Ok(s) => return Ok((which, s)),
            Err(PolyError::NotApplicable(na)) => reasons.push(na.reason),
            Err(e) => return Err(e),
        }
    }
    if reasons.is_empty() {
        reasons.push(format!("no polynomial solver for {} under {c}", p.game()));
    }
    Err(NotApplicable::new("matching", reasons.join("; ")).into())
}

/// Graph of a position with loops on every vertex added.
pub fn with_all_loops(g: &Graph) -> Graph {
    let mut edges = g.edges().to_vec();
    edges.extend(
        (0..g.vertex_count())
            .filter(|&u| !g.has_loop(u))
            .map(|u| (u, u)),
    );
    Graph::new(g.kind(), g.vertex_count(), &edges).expect("new loops are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{outcome, DEFAULT_BUDGET};

    fn rm(n: usize, edges: &[(usize, usize)], w: Vec<u32>, start: usize) -> Position {
        Position::nimg_rm(Graph::undirected(n, edges).unwrap(), w, start).unwrap()
    }

    fn exhaustive(p: &Position, c: Convention) -> Outcome {
        outcome(p, c, DEFAULT_BUDGET).unwrap()
    }

    const PATH: &[(usize, usize)] = &[(0, 1), (1, 2)];

    #[test]
    fn preprocess_examples() {
        let p = rm(3, PATH, vec![2, 1, 3], 1);
        let pre = preprocess_positive(&p).unwrap();
        assert_eq!(pre.position, p);
        assert_eq!(pre.relabel, Relabel::identity(3));

        // star centre 0 with leaves 1..=3, leaves 1 and 3 empty
        let star = rm(4, &[(0, 1), (0, 2), (0, 3)], vec![2, 0, 1, 0], 0);
        let pre = preprocess_positive(&star).unwrap();
        assert_eq!(pre.position.graph().edges(), &[(0, 1)]);
        assert_eq!(pre.relabel.to_old, vec![0, 2]);
        assert_eq!(pre.position.weights(), &[2, 1]);

        let dead = rm(2, &[(0, 1)], vec![0, 1], 0);
        assert!(matches!(
            preprocess_positive(&dead),
            Err(PolyError::Usage(_))
        ));
    }

    #[test]
    fn preprocess_keeps_one_empty_neighbour_for_a_stranded_pointer() {
        let p = rm(3, PATH, vec![2, 0, 0], 0);
        assert_eq!(exhaustive(&p, Convention::Misere), Outcome::P);
        let pre = preprocess_positive(&p).unwrap();
        assert_eq!(pre.position.graph().vertex_count(), 2);
        assert_eq!(exhaustive(&pre.position, Convention::Misere), Outcome::P);
    }

    #[test]
    fn bipartite_examples() {
        let s = solve_bipartite_rm_misere(&rm(2, &[(0, 1)], vec![1, 1], 0)).unwrap();
        assert_eq!(s.outcome, Outcome::N);
        let policy = s.policy.unwrap();
        assert_eq!(policy.provenance(), Provenance::MatchingFollowing);
        assert_eq!(
            policy.choose(&rm(2, &[(0, 1)], vec![1, 1], 0)).unwrap(),
            Some(Move::RemoveMove { keep: 0, to: 1 })
        );

        let a = solve_bipartite_rm_misere(&rm(3, PATH, vec![1; 3], 0)).unwrap();
        assert_eq!(a.outcome, Outcome::P);
        assert!(a.policy.is_none());
        let b = solve_bipartite_rm_misere(&rm(3, PATH, vec![1; 3], 1)).unwrap();
        assert_eq!(b.outcome, Outcome::N);
        for (p, o) in [
            (rm(2, &[(0, 1)], vec![1, 1], 0), Outcome::N),
            (rm(3, PATH, vec![1; 3], 0), Outcome::P),
            (rm(3, PATH, vec![1; 3], 1), Outcome::N),
        ] {
            assert_eq!(exhaustive(&p, Convention::Misere), o);
        }
    }

    #[test]
    fn bipartite_not_applicable() {
        let tri = rm(3, &[(0, 1), (1, 2), (0, 2)], vec![1; 3], 0);
        assert!(matches!(
            solve_bipartite_rm_misere(&tri),
            Err(PolyError::NotApplicable(_))
        ));
        let looped = rm(2, &[(0, 0), (0, 1)], vec![1; 2], 0);
        assert!(matches!(
            solve_bipartite_rm_misere(&looped),
            Err(PolyError::NotApplicable(_))
        ));
        // an odd cycle through an empty vertex does not matter
        let tri = rm(3, &[(0, 1), (1, 2), (0, 2)], vec![1, 1, 0], 0);
        let s = solve_bipartite_rm_misere(&tri).unwrap();
        assert_eq!(s.outcome, exhaustive(&tri, Convention::Misere));
    }

    #[test]
    fn isolated_heap() {
        let one = rm(1, &[], vec![1], 0);
        let two = rm(1, &[], vec![2], 0);
        assert_eq!(solve_bipartite_rm_misere(&one).unwrap().outcome, Outcome::P);
        let s = solve_bipartite_rm_misere(&two).unwrap();
        assert_eq!(s.outcome, Outcome::N);
        assert_eq!(
            s.policy.unwrap().choose(&two).unwrap(),
            Some(Move::RemoveMove { keep: 1, to: 0 })
        );
        assert_eq!(solve_weight1_rm_misere(&one).unwrap().outcome, Outcome::P);
    }

    #[test]
    fn weight1_examples() {
        let tri = rm(3, &[(0, 1), (1, 2), (0, 2)], vec![1; 3], 0);
        assert_eq!(exhaustive(&tri, Convention::Misere), Outcome::P);
        assert_eq!(solve_weight1_rm_misere(&tri).unwrap().outcome, Outcome::P);

        let c4 = [(0, 1), (1, 2), (2, 3), (0, 3)];
        for s in 0..4 {
            let p = rm(4, &c4, vec![1; 4], s);
            assert_eq!(exhaustive(&p, Convention::Misere), Outcome::N);
            assert_eq!(solve_weight1_rm_misere(&p).unwrap().outcome, Outcome::N);
        }
        let heavy = rm(2, &[(0, 1)], vec![1, 2], 0);
        assert!(matches!(
            solve_weight1_rm_misere(&heavy),
            Err(PolyError::NotApplicable(_))
        ));
    }

    #[test]
    fn vgeo_examples() {
        let edge = Position::vgeo(Graph::undirected(2, &[(0, 1)]).unwrap(), 0).unwrap();
        assert_eq!(
            solve_vgeo_undirected_normal(&edge).unwrap().outcome,
            Outcome::N
        );
        let path = Position::vgeo(Graph::undirected(3, PATH).unwrap(), 0).unwrap();
        assert_eq!(exhaustive(&path, Convention::Normal), Outcome::P);
        assert_eq!(
            solve_vgeo_undirected_normal(&path).unwrap().outcome,
            Outcome::P
        );
        let c5 = Graph::undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        for s in 0..5 {
            let p = Position::vgeo(c5.clone(), s).unwrap();
            assert_eq!(exhaustive(&p, Convention::Normal), Outcome::P);
            assert_eq!(
                solve_vgeo_undirected_normal(&p).unwrap().outcome,
                Outcome::P
            );
        }
        let d = Position::vgeo(Graph::directed(2, &[(0, 1)]).unwrap(), 0).unwrap();
        assert!(solve_vgeo_undirected_normal(&d).is_err());
    }

    #[test]
    fn vgeo_solver_respects_removed_vertices() {
        let g = Graph::undirected(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = Position::vgeo(g, 0)
            .unwrap()
            .apply_move(&Move::Slide { to: 1 })
            .unwrap();
        let s = solve_vgeo_undirected_normal(&p).unwrap();
        assert_eq!(s.outcome, exhaustive(&p, Convention::Normal));
    }

    #[test]
    fn loops_examples() {
        let two = rm(1, &[(0, 0)], vec![2], 0);
        assert_eq!(exhaustive(&two, Convention::Misere), Outcome::N);
        let s = solve_loops_rm_misere(&two).unwrap();
        assert_eq!(s.outcome, Outcome::N);
        assert_eq!(
            s.policy.unwrap().choose(&two).unwrap(),
            Some(Move::RemoveMove { keep: 1, to: 0 })
        );

        let one = rm(1, &[(0, 0)], vec![1], 0);
        assert_eq!(exhaustive(&one, Convention::Misere), Outcome::P);
        assert_eq!(solve_loops_rm_misere(&one).unwrap().outcome, Outcome::P);

        let e = rm(2, &[(0, 0), (0, 1), (1, 1)], vec![1, 1], 0);
        let o = exhaustive(&e, Convention::Misere);
        assert_eq!(o, Outcome::N);
        assert_eq!(solve_loops_rm_misere(&e).unwrap().outcome, o);

        let missing = rm(2, &[(0, 0), (0, 1)], vec![1, 1], 0);
        assert!(matches!(
            solve_loops_rm_misere(&missing),
            Err(PolyError::NotApplicable(_))
        ));
    }

    #[test]
    fn heavy_set() {
        let p = rm(3, PATH, vec![2, 1, 5], 0);
        let t = HeavySet::of(&p);
        assert_eq!(t.vertices(), vec![0, 2]);
        assert!(!t.contains(1));
    }

    #[test]
    fn dispatch_prefers_polynomial_solvers() {
        let p = rm(3, PATH, vec![1; 3], 1);
        let (which, s) = solve_polynomial(&p, Convention::Misere).unwrap();
        assert_eq!(which, PolySolver::Bipartite);
        assert_eq!(s.outcome, Outcome::N);
        let tri = rm(3, &[(0, 1), (1, 2), (0, 2)], vec![1; 3], 0);
        assert_eq!(
            solve_polynomial(&tri, Convention::Misere).unwrap().0,
            PolySolver::Weight1
        );
        assert!(solve_polynomial(&p, Convention::Normal).is_err());
        let looped = Position::nimg_rm(with_all_loops(tri.graph()), vec![2, 1, 1], 0).unwrap();
        assert_eq!(
            solve_polynomial(&looped, Convention::Misere).unwrap().0,
            PolySolver::Loops
        );
    }
}
