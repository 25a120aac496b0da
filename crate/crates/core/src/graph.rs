//! Dense-vertex graphs, directed or undirected, with optional loops.

use std::collections::VecDeque;
use std::fmt;

use crate::error::GraphError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Directed,
    Undirected,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Directed => "digraph",
            GraphKind::Undirected => "ugraph",
        })
    }
}

/// A simple graph on vertices `0..n`. Loops are ordinary edges `(u, u)`;
/// parallel edges are rejected.
///
/// Undirected edges are stored with `u <= v`. Edges are kept sorted, and an
/// edge's index in [`Graph::edges`] is its id.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    kind: GraphKind,
    n: usize,
    edges: Vec<(usize, usize)>,
    // (neighbour, edge id), sorted by neighbour. Out-arcs for digraphs.
    adj: Vec<Vec<(usize, usize)>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}, n={}, {:?})", self.kind, self.n, self.edges)
    }
}

impl Graph {
    pub fn new(kind: GraphKind, n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            canon.push(match kind {
                GraphKind::Undirected if u > v => (v, u),
                _ => (u, v),
            });
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in canon.iter().enumerate() {
            adj[u].push((v, id));
            if kind == GraphKind::Undirected && u != v {
                adj[v].push((u, id));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            kind,
            n,
            edges: canon,
            adj,
        })
    }

    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(GraphKind::Undirected, n, edges)
    }

    pub fn directed(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(GraphKind::Directed, n, edges)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_directed(&self) -> bool {
        self.kind == GraphKind::Directed
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Out-arcs of `u` as `(neighbour, edge id)` pairs in ascending neighbour order.
    pub fn arcs(&self, u: usize) -> &[(usize, usize)] {
        &self.adj[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().map(|&(v, _)| v)
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.adj
            .get(u)?
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn has_loop(&self, u: usize) -> bool {
        self.has_edge(u, u)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|&&(u, v)| u == v).count()
    }

    pub fn is_loop_free(&self) -> bool {
        self.loop_count() == 0
    }

    /// True when every vertex carries a loop (the "+L" class).
    pub fn has_all_loops(&self) -> bool {
        (0..self.n).all(|u| self.has_loop(u))
    }

    pub fn without_loops(&self) -> Graph {
        let edges: Vec<_> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| u != v)
            .collect();
        Graph::new(self.kind, self.n, &edges).expect("subset of a valid edge set")
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Number of edges incident to `u`; a loop counts twice, arcs in both
    /// directions count for digraphs.
    pub fn degree(&self, u: usize) -> usize {
        match self.kind {
            GraphKind::Undirected => self.adj[u].len() + usize::from(self.has_loop(u)),
            GraphKind::Directed => self
                .edges
                .iter()
                .map(|&(a, b)| usize::from(a == u) + usize::from(b == u))
                .sum(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn require_undirected(&self) -> Result<(), GraphError> {
        match self.kind {
            GraphKind::Undirected => Ok(()),
            GraphKind::Directed => Err(GraphError::WrongKind {
                expected: GraphKind::Undirected,
            }),
        }
    }

    /// Two-colours each component by BFS, the smallest vertex of every
    /// component going left. `Ok(None)` when an odd cycle or a loop exists.
    pub fn bipartition(&self) -> Result<Option<Bipartition>, GraphError> {
        self.require_undirected()?;
        let mut side: Vec<Option<Side>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(Side::Left);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let su = side[u].expect("queued vertices are coloured");
                for v in self.neighbors(u) {
                    match side[v] {
                        None => {
                            side[v] = Some(su.other());
                            queue.push_back(v);
                        }
                        Some(sv) if sv == su => return Ok(None),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(Some(Bipartition {
            side: side.into_iter().map(|s| s.expect("all coloured")).collect(),
        }))
    }

    /// Subgraph induced by `keep`, relabelled densely in ascending order.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Graph, Relabel) {
        assert_eq!(keep.len(), self.n, "keep mask must cover every vertex");
        let mut to_new = vec![None; self.n];
        let mut to_old = Vec::new();
        for (u, &k) in keep.iter().enumerate() {
            if k {
                to_new[u] = Some(to_old.len());
                to_old.push(u);
            }
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((to_new[u]?, to_new[v]?)))
            .collect();
        let sub = Graph::new(self.kind, to_old.len(), &edges).expect("induced edges stay simple");
        (sub, Relabel { to_new, to_old })
    }

    /// Vertices reachable from `u`, as a membership mask.
    pub fn connected_component(&self, u: usize) -> Result<Vec<bool>, GraphError> {
        self.require_undirected()?;
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        Ok(seen)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Proper two-colouring of an undirected loop-free graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<Side>,
}

impl Bipartition {
    pub fn from_sides(side: Vec<Side>) -> Self {
        Bipartition { side }
    }

    pub fn side(&self, u: usize) -> Side {
        self.side[u]
    }

    pub fn left(&self) -> Vec<usize> {
        self.members(Side::Left)
    }

    pub fn right(&self) -> Vec<usize> {
        self.members(Side::Right)
    }

    fn members(&self, s: Side) -> Vec<usize> {
        (0..self.side.len())
            .filter(|&u| self.side[u] == s)
            .collect()
    }

    /// Every edge crosses the partition and the partition covers `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.side.len() == g.vertex_count()
            && g.edges().iter().all(|&(u, v)| self.side[u] != self.side[v])
    }
}

/// Vertex-id translation produced by [`Graph::induced_subgraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabel {
    pub to_new: Vec<Option<usize>>,
    pub to_old: Vec<usize>,
}

impl Relabel {
    pub fn identity(n: usize) -> Self {
        Relabel {
            to_new: (0..n).map(Some).collect(),
            to_old: (0..n).collect(),
        }
    }
}
