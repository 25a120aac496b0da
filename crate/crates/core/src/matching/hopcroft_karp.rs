use std::collections::VecDeque;

use super::Matching;
use crate::error::MatchingError;
use crate::graph::{Bipartition, Graph, Side};

const INF: u32 = u32::MAX;

/// Maximum matching of a bipartite graph.
pub fn max_matching_bipartite(g: &Graph, b: &Bipartition) -> Result<Matching, MatchingError> {
    hopcroft_karp(g, b).map(|(m, _)| m)
}

/// Phased augmenting-path matching. Each phase layers the graph by BFS from
/// the free left vertices, then augments along a maximal set of
/// vertex-disjoint shortest paths. Returns the matching and the number of
/// phases run, counting the final phase that finds no path.
pub fn hopcroft_karp(g: &Graph, b: &Bipartition) -> Result<(Matching, usize), MatchingError> {
    if g.is_directed() {
        return Err(MatchingError::Directed);
    }
    let n = g.vertex_count();
    let crosses = |&(u, v): &(usize, usize)| u == v || b.side(u) != b.side(v);
    if b.left().len() + b.right().len() != n || !g.edges().iter().all(crosses) {
        return Err(MatchingError::NotBipartite);
    }
    let left: Vec<usize> = (0..n).filter(|&u| b.side(u) == Side::Left).collect();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| g.neighbors(u).filter(|&v| v != u).collect())
        .collect();

    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut dist = vec![INF; n];
    let mut it = vec![0usize; n];
    let mut via = vec![0usize; n];
    let mut queue = VecDeque::new();
    let mut stack = Vec::new();
    let mut phases = 0;

    loop {
        phases += 1;
        queue.clear();
        for &u in &left {
            if mate[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match mate[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }

        for &u in &left {
            it[u] = 0;
        }
        for &root in &left {
            if mate[root].is_some() {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                if it[u] == adj[u].len() {
                    // dead end for the rest of this phase
                    dist[u] = INF;
                    stack.pop();
                    continue;
                }
                let v = adj[u][it[u]];
                it[u] += 1;
                match mate[v] {
                    None => {
                        via[u] = v;
                        for &x in &stack {
                            mate[x] = Some(via[x]);
                            mate[via[x]] = Some(x);
                        }
                        break;
                    }
                    Some(w) if dist[w] != INF && dist[w] == dist[u] + 1 => {
                        via[u] = v;
                        stack.push(w);
                    }
                    Some(_) => {}
                }
            }
        }
    }

    Ok((Matching::from_mate(mate), phases))
}
