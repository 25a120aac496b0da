//! Gadget constructions carrying a normal-play position to a misère
//! position with the same outcome.
//!
//! | name         | source                     | target                        |
//! |--------------|----------------------------|-------------------------------|
//! | `vgeo-dir`   | vertex geography, digraph  | vertex geography, digraph     |
//! | `vgeo-undir` | vertex geography, digraph  | vertex geography, ugraph      |
//! | `egeo-undir` | edge geography, ugraph     | edge geography, ugraph        |
//! | `egeo-dir`   | edge geography, digraph    | edge geography, digraph       |
//! | `nimg-rm`    | vertex geography, digraph  | NimG-RM, loop-free ugraph     |
//! | `nimg-mr`    | NimG-MR, ugraph            | NimG-MR, ugraph               |
//!
//! Sources are played under the normal convention, targets under misère.
//! Target vertex ids are laid out deterministically and every target vertex
//! is named in the output's `name_map`.

use std::fmt;

use crate::error::{GraphError, ReductionError};
use crate::game::{Convention, Game, Position};
use crate::graph::{Graph, GraphKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    VgeoDir,
    VgeoUndir,
    EgeoUndir,
    EgeoDir,
    NimgRm,
    NimgMr,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 6] = [
        ReductionKind::VgeoDir,
        ReductionKind::VgeoUndir,
        ReductionKind::EgeoUndir,
        ReductionKind::EgeoDir,
        ReductionKind::NimgRm,
        ReductionKind::NimgMr,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ReductionKind::VgeoDir => "vgeo-dir",
            ReductionKind::VgeoUndir => "vgeo-undir",
            ReductionKind::EgeoUndir => "egeo-undir",
            ReductionKind::EgeoDir => "egeo-dir",
            ReductionKind::NimgRm => "nimg-rm",
            ReductionKind::NimgMr => "nimg-mr",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag() == s)
    }

    /// Game and graph kind a source position must have.
    pub fn source(self) -> (Game, GraphKind) {
        match self {
            ReductionKind::VgeoDir | ReductionKind::VgeoUndir | ReductionKind::NimgRm => {
                (Game::VertexGeography, GraphKind::Directed)
            }
            ReductionKind::EgeoUndir => (Game::EdgeGeography, GraphKind::Undirected),
            ReductionKind::EgeoDir => (Game::EdgeGeography, GraphKind::Directed),
            ReductionKind::NimgMr => (Game::NimgMr, GraphKind::Undirected),
        }
    }

    pub fn target_game(self) -> Game {
        match self {
            ReductionKind::NimgRm => Game::NimgRm,
            _ => self.source().0,
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The outcome equality a reduction asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Claim {
    pub source: (Game, Convention),
    pub target: (Game, Convention),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub kind: ReductionKind,
    pub position: Position,
    /// `(label, target vertex)` for every target vertex, in id order.
    pub name_map: Vec<(String, usize)>,
    pub claim: Claim,
}

impl ReductionOutput {
    pub fn convention(&self) -> Convention {
        self.claim.target.1
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.name_map
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, v)| v)
    }

    /// `label -> id` lines.
    pub fn name_map_text(&self) -> String {
        self.name_map
            .iter()
            .map(|(l, v)| format!("{l} -> {v}\n"))
            .collect()
    }
}

fn output(
    kind: ReductionKind,
    position: Position,
    mut name_map: Vec<(String, usize)>,
) -> ReductionOutput {
    name_map.sort_by_key(|&(_, v)| v);
    ReductionOutput {
        kind,
        claim: Claim {
            source: (kind.source().0, Convention::Normal),
            target: (kind.target_game(), Convention::Misere),
        },
        position,
        name_map,
    }
}

fn check_start(g: &Graph, v: usize) -> Result<(), ReductionError> {
    if v < g.vertex_count() {
        Ok(())
    } else {
        Err(GraphError::VertexOutOfRange(v).into())
    }
}

fn check_kind(g: &Graph, kind: GraphKind) -> Result<(), ReductionError> {
    if g.kind() == kind {
        Ok(())
    } else {
        Err(ReductionError::WrongSource {
            expected: kind.to_string(),
            got: g.kind().to_string(),
        })
    }
}

fn arc_label(u: usize, v: usize) -> String {
    format!("v{u}v{v}")
}

// Each vertex u becomes u_1 = u and gains a pendant out-neighbour u_2 = n + u.
fn pendant_copy(g: &Graph) -> (Graph, Vec<(String, usize)>) {
    let n = g.vertex_count();
    let mut edges = g.edges().to_vec();
    edges.extend((0..n).map(|u| (u, n + u)));
    let mut names = Vec::with_capacity(2 * n);
    for u in 0..n {
        names.push((format!("v{u}_1"), u));
        names.push((format!("v{u}_2"), n + u));
    }
    let graph = Graph::new(g.kind(), 2 * n, &edges).expect("pendants are new vertices");
    (graph, names)
}

/// Directed vertex geography: every vertex gets one extra out-neighbour.
/// Normal outcome of `(g, v)` equals the misère outcome of `(g', v_1)`.
pub fn reduce_vgeo_dir_misere(g: &Graph, v: usize) -> Result<ReductionOutput, ReductionError> {
    check_kind(g, GraphKind::Directed)?;
    check_start(g, v)?;
    let (graph, names) = pendant_copy(g);
    let p = Position::vgeo(graph, v).expect("start in range");
    Ok(output(ReductionKind::VgeoDir, p, names))
}

/// Undirected edge geography with a pendant edge per vertex.
pub fn reduce_egeo_undir_misere(g: &Graph, v: usize) -> Result<ReductionOutput, ReductionError> {
    check_kind(g, GraphKind::Undirected)?;
    check_start(g, v)?;
    let (graph, names) = pendant_copy(g);
    let p = Position::egeo(graph, v).expect("start in range");
    Ok(output(ReductionKind::EgeoUndir, p, names))
}

/// Directed edge geography with a pendant out-arc per vertex.
pub fn reduce_egeo_dir_misere(g: &Graph, v: usize) -> Result<ReductionOutput, ReductionError> {
    check_kind(g, GraphKind::Directed)?;
    check_start(g, v)?;
    let (graph, names) = pendant_copy(g);
    let p = Position::egeo(graph, v).expect("start in range");
    Ok(output(ReductionKind::EgeoDir, p, names))
}

/// Internal edges of the undirected arc gadget, by subscript; 0 is the tail
/// `u` and 9 the head `v`.
pub const ARC_GADGET_EDGES: [(usize, usize); 13] = [
    (0, 1),
    (1, 2),
    (1, 3),
    (1, 6),
    (2, 4),
    (3, 5),
    (3, 6),
    (4, 5),
    (4, 6),
    (5, 6),
    (6, 7),
    (7, 8),
    (7, 9),
];

/// Directed vertex geography to undirected: every arc (u, v) becomes the
/// nine-vertex arc gadget `u, uv_1..uv_8, v` and every vertex gets a pendant
/// neighbour `u'`. Normal outcome of `(g, u)` equals the misère outcome of
/// `(g', u)`.
///
/// Layout: `u` keeps id `u`, `u'` is `n + u`, and `uv_j` for the `i`-th arc
/// is `2n + 8i + j - 1`.
pub fn reduce_vgeo_dir_to_undir_misere(
    g: &Graph,
    u: usize,
) -> Result<ReductionOutput, ReductionError> {
    check_kind(g, GraphKind::Directed)?;
    check_start(g, u)?;
    let n = g.vertex_count();
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for x in 0..n {
        names.push((format!("v{x}"), x));
        names.push((format!("v{x}'"), n + x));
        edges.push((x, n + x));
    }
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        let id = |j: usize| match j {
            0 => a,
            9 => b,
            _ => 2 * n + 8 * i + j - 1,
        };
        for j in 1..=8 {
            names.push((format!("{}_{j}", arc_label(a, b)), id(j)));
        }
        edges.extend(ARC_GADGET_EDGES.iter().map(|&(s, t)| (id(s), id(t))));
    }
    let graph = Graph::undirected(2 * n + 8 * g.edge_count(), &edges)?;
    let p = Position::vgeo(graph, u).expect("start in range");
    Ok(output(ReductionKind::VgeoUndir, p, names))
}

/// Directed vertex geography to misère NimG-RM on a loop-free graph: vertex
/// `u` becomes `X_u` with one token and every arc (u, v) becomes the path
/// `X_u - a - b - {c, d} - X_v` with the triangle `b c d`, weights 1,1,1,2
/// on a,b,c,d. Normal outcome of `(g, u)` equals the misère outcome of
/// `(g', X_u)`.
///
/// Layout: `X_u` is `u`; the `i`-th arc's a,b,c,d are `n + 4i + 0..4`.
pub fn reduce_vgeo_dir_to_nimgrm_misere(
    g: &Graph,
    u: usize,
) -> Result<ReductionOutput, ReductionError> {
    check_kind(g, GraphKind::Directed)?;
    check_start(g, u)?;
    let n = g.vertex_count();
    let total = n + 4 * g.edge_count();
    let mut names: Vec<_> = (0..n).map(|x| (format!("X_v{x}"), x)).collect();
    let mut edges = Vec::with_capacity(6 * g.edge_count());
    let mut weights = vec![1u32; total];
    for (i, &(x, y)) in g.edges().iter().enumerate() {
        let [a, b, c, d] = [0, 1, 2, 3].map(|k| n + 4 * i + k);
        for (tag, id) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            names.push((format!("{tag}_{}", arc_label(x, y)), id));
        }
        weights[d] = 2;
        edges.extend([(x, a), (a, b), (b, c), (b, d), (c, d), (d, y)]);
    }
    let graph = Graph::undirected(total, &edges)?;
    let p = Position::nimg_rm(graph, weights, u).expect("start in range");
    Ok(output(ReductionKind::NimgRm, p, names))
}

/// NimG-MR normal to misère: every vertex x gets a pendant chain
/// `x - c1 - c2 - c3` of single tokens. Loops of the source are kept.
///
/// Layout: `cj_x` is `n + 3x + j - 1`.
pub fn reduce_nimgmr_normal_to_misere(
    g: &Graph,
    weights: &[u32],
    u: usize,
) -> Result<ReductionOutput, ReductionError> {
    check_kind(g, GraphKind::Undirected)?;
    check_start(g, u)?;
    let n = g.vertex_count();
    if weights.len() != n {
        return Err(ReductionError::WrongSource {
            expected: format!("{n} weights"),
            got: format!("{} weights", weights.len()),
        });
    }
    let mut names: Vec<_> = (0..n).map(|x| (format!("v{x}"), x)).collect();
    let mut edges = g.edges().to_vec();
    let mut w = weights.to_vec();
    w.resize(4 * n, 1);
    for x in 0..n {
        let c = |j: usize| n + 3 * x + j - 1;
        for j in 1..=3 {
            names.push((format!("c{j}_v{x}"), c(j)));
        }
        edges.extend([(x, c(1)), (c(1), c(2)), (c(2), c(3))]);
    }
    let graph = Graph::undirected(4 * n, &edges)?;
    let p = Position::nimg_mr(graph, w, u).expect("start in range");
    Ok(output(ReductionKind::NimgMr, p, names))
}

/// Applies `kind` to a source position of the matching game and graph kind.
pub fn reduce(kind: ReductionKind, source: &Position) -> Result<ReductionOutput, ReductionError> {
    let (game, gk) = kind.source();
    if source.game() != game {
        return Err(ReductionError::WrongSource {
            expected: game.to_string(),
            got: source.game().to_string(),
        });
    }
    if !source.removed_items().is_empty() {
        return Err(ReductionError::WrongSource {
            expected: "a starting position".into(),
            got: "a position with removed items".into(),
        });
    }
    let g = source.graph();
    check_kind(g, gk)?;
    let u = source.current();
    match kind {
        ReductionKind::VgeoDir => reduce_vgeo_dir_misere(g, u),
        ReductionKind::VgeoUndir => reduce_vgeo_dir_to_undir_misere(g, u),
        ReductionKind::EgeoUndir => reduce_egeo_undir_misere(g, u),
        ReductionKind::EgeoDir => reduce_egeo_dir_misere(g, u),
        ReductionKind::NimgRm => reduce_vgeo_dir_to_nimgrm_misere(g, u),
        ReductionKind::NimgMr => reduce_nimgmr_normal_to_misere(g, source.weights(), u),
    }
}

/// Checks the size and degree bookkeeping of a reduction output against its
/// source graph. Returns the first violated property.
pub fn check_bookkeeping(source: &Graph, out: &ReductionOutput) -> Result<(), String> {
    let n = source.vertex_count();
    let m = source.edge_count();
    let t = out.position.graph();
    let expect = |what: &str, got: usize, want: usize| {
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: got {got}, expected {want}"))
        }
    };
    let src_deg = source.degrees();
    let deg = t.degrees();
    if out.name_map.len() != t.vertex_count()
        || out.name_map.iter().enumerate().any(|(i, &(_, v))| i != v)
    {
        return Err("name map does not cover every target vertex exactly once".into());
    }
    match out.kind {
        ReductionKind::VgeoDir | ReductionKind::EgeoDir | ReductionKind::EgeoUndir => {
            expect("vertices", t.vertex_count(), 2 * n)?;
            expect("edges", t.edge_count(), m + n)?;
            if out.kind != ReductionKind::EgeoUndir {
                expect(
                    "max out-degree",
                    t.max_out_degree(),
                    source.max_out_degree() + 1,
                )?;
            }
            for u in 0..n {
                expect("degree of an original vertex", deg[u], src_deg[u] + 1)?;
                expect("degree of an added vertex", deg[n + u], 1)?;
            }
        }
        ReductionKind::VgeoUndir => {
            expect("vertices", t.vertex_count(), 2 * n + 8 * m)?;
            expect("edges", t.edge_count(), 13 * m + n)?;
            let bound = (source.max_degree() + 1).max(5);
            if t.max_degree() > bound {
                return Err(format!("max degree {} exceeds {bound}", t.max_degree()));
            }
            for u in 0..n {
                expect("degree of an original vertex", deg[u], src_deg[u] + 1)?;
            }
            if let Some(d) = deg[n..].iter().find(|&&d| d > 5) {
                return Err(format!("added vertex of degree {d}"));
            }
        }
        ReductionKind::NimgRm => {
            expect("vertices", t.vertex_count(), n + 4 * m)?;
            expect("edges", t.edge_count(), 6 * m)?;
            if !t.is_loop_free() {
                return Err("target has a loop".into());
            }
            let w = out.position.weights();
            if let Some(&x) = w.iter().find(|&&x| x > 2 || x == 0) {
                return Err(format!("weight {x} outside 1..=2"));
            }
            for u in 0..n {
                expect("degree of X_u", deg[u], src_deg[u])?;
            }
            if let Some(d) = deg[n..].iter().find(|&&d| d > 3) {
                return Err(format!("gadget vertex of degree {d}"));
            }
        }
        ReductionKind::NimgMr => {
            expect("vertices", t.vertex_count(), 4 * n)?;
            expect("edges", t.edge_count(), m + 3 * n)?;
            expect("loops", t.loop_count(), source.loop_count())?;
            if out.position.weights()[n..].iter().any(|&x| x != 1) {
                return Err("chain vertex without exactly one token".into());
            }
            for u in 0..n {
                expect("degree of an original vertex", deg[u], src_deg[u] + 1)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Outcome;
    use crate::solver::{outcome, DEFAULT_BUDGET};

    fn agree(src: &Position, out: &ReductionOutput) -> (Outcome, Outcome) {
        (
            outcome(src, Convention::Normal, DEFAULT_BUDGET).unwrap(),
            outcome(&out.position, out.convention(), DEFAULT_BUDGET).unwrap(),
        )
    }

    fn check_all_starts(kind: ReductionKind, make: impl Fn(usize) -> Position, n: usize) {
        for s in 0..n {
            let src = make(s);
            let out = reduce(kind, &src).unwrap();
            check_bookkeeping(src.graph(), &out).unwrap();
            let (a, b) = agree(&src, &out);
            assert_eq!(a, b, "{kind} start {s}");
        }
    }

    #[test]
    fn vgeo_dir_examples() {
        let single = Graph::directed(1, &[]).unwrap();
        let out = reduce_vgeo_dir_misere(&single, 0).unwrap();
        assert_eq!(out.position.graph().edges(), &[(0, 1)]);
        assert_eq!(out.vertex("v0_2"), Some(1));
        let src = Position::vgeo(single, 0).unwrap();
        assert_eq!(agree(&src, &out), (Outcome::P, Outcome::P));

        let arc = Graph::directed(2, &[(0, 1)]).unwrap();
        let src = Position::vgeo(arc.clone(), 0).unwrap();
        let out = reduce(ReductionKind::VgeoDir, &src).unwrap();
        assert_eq!(agree(&src, &out), (Outcome::N, Outcome::N));

        let c3 = Graph::directed(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        check_all_starts(
            ReductionKind::VgeoDir,
            |s| Position::vgeo(c3.clone(), s).unwrap(),
            3,
        );
    }

    #[test]
    fn vgeo_undir_examples() {
        let single = Graph::directed(1, &[]).unwrap();
        let out = reduce_vgeo_dir_to_undir_misere(&single, 0).unwrap();
        assert_eq!(out.position.graph().edges(), &[(0, 1)]);
        assert_eq!(out.vertex("v0'"), Some(1));
        let src = Position::vgeo(single, 0).unwrap();
        assert_eq!(agree(&src, &out), (Outcome::P, Outcome::P));

        let arc = Graph::directed(2, &[(0, 1)]).unwrap();
        let out = reduce_vgeo_dir_to_undir_misere(&arc, 0).unwrap();
        assert_eq!(out.position.graph().vertex_count(), 12);
        assert_eq!(out.vertex("v0v1_1"), Some(4));
        assert_eq!(out.vertex("v0v1_8"), Some(11));
        let g = out.position.graph();
        assert!(g.has_edge(0, 4) && g.has_edge(10, 1) && g.has_edge(4, 9));
        check_all_starts(
            ReductionKind::VgeoUndir,
            |s| Position::vgeo(arc.clone(), s).unwrap(),
            2,
        );

        let two = Graph::directed(2, &[(0, 1), (1, 0)]).unwrap();
        check_all_starts(
            ReductionKind::VgeoUndir,
            |s| Position::vgeo(two.clone(), s).unwrap(),
            2,
        );
    }

    #[test]
    fn egeo_examples() {
        let single_u = Graph::undirected(1, &[]).unwrap();
        check_all_starts(
            ReductionKind::EgeoUndir,
            |s| Position::egeo(single_u.clone(), s).unwrap(),
            1,
        );
        let edge = Graph::undirected(2, &[(0, 1)]).unwrap();
        check_all_starts(
            ReductionKind::EgeoUndir,
            |s| Position::egeo(edge.clone(), s).unwrap(),
            2,
        );
        let tri = Graph::undirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        check_all_starts(
            ReductionKind::EgeoUndir,
            |s| Position::egeo(tri.clone(), s).unwrap(),
            3,
        );

        let single_d = Graph::directed(1, &[]).unwrap();
        let src = Position::egeo(single_d.clone(), 0).unwrap();
        let out = reduce(ReductionKind::EgeoDir, &src).unwrap();
        assert_eq!(agree(&src, &out), (Outcome::P, Outcome::P));
        let arc = Graph::directed(2, &[(0, 1)]).unwrap();
        check_all_starts(
            ReductionKind::EgeoDir,
            |s| Position::egeo(arc.clone(), s).unwrap(),
            2,
        );
        let two = Graph::directed(2, &[(0, 1), (1, 0)]).unwrap();
        check_all_starts(
            ReductionKind::EgeoDir,
            |s| Position::egeo(two.clone(), s).unwrap(),
            2,
        );
    }

    #[test]
    fn nimg_rm_examples() {
        let single = Graph::directed(1, &[]).unwrap();
        let out = reduce_vgeo_dir_to_nimgrm_misere(&single, 0).unwrap();
        assert_eq!(out.position.weights(), &[1]);
        let src = Position::vgeo(single, 0).unwrap();
        assert_eq!(agree(&src, &out), (Outcome::P, Outcome::P));

        let arc = Graph::directed(2, &[(0, 1)]).unwrap();
        let out = reduce_vgeo_dir_to_nimgrm_misere(&arc, 0).unwrap();
        assert_eq!(out.position.graph().vertex_count(), 6);
        assert_eq!(out.position.total_tokens(), 7);
        assert_eq!(out.vertex("d_v0v1"), Some(5));
        assert_eq!(out.position.weight(5), 2);
        check_all_starts(
            ReductionKind::NimgRm,
            |s| Position::vgeo(arc.clone(), s).unwrap(),
            2,
        );

        let path = Graph::directed(3, &[(0, 1), (1, 2)]).unwrap();
        check_all_starts(
            ReductionKind::NimgRm,
            |s| Position::vgeo(path.clone(), s).unwrap(),
            3,
        );
    }

    #[test]
    fn nimg_mr_examples() {
        let looped = Graph::undirected(1, &[(0, 0)]).unwrap();
        check_all_starts(
            ReductionKind::NimgMr,
            |s| Position::nimg_mr(looped.clone(), vec![1], s).unwrap(),
            1,
        );
        let edge = Graph::undirected(2, &[(0, 1)]).unwrap();
        check_all_starts(
            ReductionKind::NimgMr,
            |s| Position::nimg_mr(edge.clone(), vec![1, 2], s).unwrap(),
            2,
        );
        let tri = Graph::undirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        check_all_starts(
            ReductionKind::NimgMr,
            |s| Position::nimg_mr(tri.clone(), vec![1; 3], s).unwrap(),
            3,
        );
        let out = reduce_nimgmr_normal_to_misere(&edge, &[1, 2], 0).unwrap();
        assert_eq!(out.vertex("c3_v1"), Some(7));
    }

    #[test]
    fn wrong_sources_rejected() {
        let u = Graph::undirected(2, &[(0, 1)]).unwrap();
        assert!(reduce_vgeo_dir_misere(&u, 0).is_err());
        let d = Graph::directed(2, &[(0, 1)]).unwrap();
        assert!(reduce_vgeo_dir_misere(&d, 2).is_err());
        let p = Position::egeo(d, 0).unwrap();
        assert!(reduce(ReductionKind::VgeoDir, &p).is_err());
        assert_eq!(
            ReductionKind::from_tag("egeo-undir"),
            Some(ReductionKind::EgeoUndir)
        );
    }

    #[test]
    fn reductions_are_deterministic() {
        let g = Graph::directed(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        for kind in [
            ReductionKind::VgeoDir,
            ReductionKind::VgeoUndir,
            ReductionKind::NimgRm,
        ] {
            let p = Position::vgeo(g.clone(), 1).unwrap();
            assert_eq!(reduce(kind, &p).unwrap(), reduce(kind, &p).unwrap());
        }
    }
}
