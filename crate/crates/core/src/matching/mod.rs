//! Maximum-cardinality matching: layered augmenting paths for bipartite
//! graphs, blossom shrinking for general graphs, and an exhaustive oracle.
//!
//! Loops are ignored everywhere; a loop can never belong to a matching.

mod blossom;
mod brute;
mod hopcroft_karp;

pub use blossom::max_matching_general;
pub use brute::{brute_force_matching_size, BRUTE_FORCE_EDGE_CAP};
pub use hopcroft_karp::{hopcroft_karp, max_matching_bipartite};

use crate::error::MatchingError;
use crate::graph::Graph;

/// A set of vertex-disjoint edges, stored as a symmetric mate table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            mate: vec![None; n],
            size: 0,
        }
    }

    pub(crate) fn from_mate(mate: Vec<Option<usize>>) -> Self {
        let size = mate.iter().flatten().count() / 2;
        Matching { mate, size }
    }

    pub fn mate(&self, u: usize) -> Option<usize> {
        self.mate[u]
    }

    pub fn mates(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn covers(&self, u: usize) -> bool {
        self.mate[u].is_some()
    }

    /// Matched pairs `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, &m)| m.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    /// Symmetric, uses only non-loop edges of `g`, and `size` is consistent.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.mate.len() == g.vertex_count()
            && self.mate.iter().enumerate().all(|(u, &m)| match m {
                None => true,
                Some(v) => v != u && self.mate[v] == Some(u) && g.has_edge(u, v),
            })
            && self.size == self.mate.iter().flatten().count() / 2
    }
}

fn require_undirected(g: &Graph) -> Result<(), MatchingError> {
    if g.is_directed() {
        Err(MatchingError::Directed)
    } else {
        Ok(())
    }
}

/// Maximum matching by the fastest applicable algorithm.
pub fn max_matching(g: &Graph) -> Result<Matching, MatchingError> {
    require_undirected(g)?;
    let g = g.without_loops();
    match g.bipartition().expect("undirected") {
        Some(b) => max_matching_bipartite(&g, &b),
        None => max_matching_general(&g),
    }
}

/// ν(G) against ν(G − u), with a maximum matching of G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverQuery {
    pub covered: bool,
    pub size: usize,
    pub size_without: usize,
    /// Maximum matching of G; covers the query vertex whenever `covered`.
    pub matching: Matching,
}

pub fn cover_query(g: &Graph, u: usize) -> Result<CoverQuery, MatchingError> {
    let matching = max_matching(g)?;
    let mut keep = vec![true; g.vertex_count()];
    keep[u] = false;
    let (without, _) = g.induced_subgraph(&keep);
    let size_without = max_matching(&without)?.size();
    Ok(CoverQuery {
        covered: size_without < matching.size(),
        size: matching.size(),
        size_without,
        matching,
    })
}

/// True iff every maximum matching of `g` covers `u`.
pub fn covered_by_all_maximum_matchings(g: &Graph, u: usize) -> Result<bool, MatchingError> {
    Ok(cover_query(g, u)?.covered)
}
