use crate::error::MatchingError;
use crate::graph::Graph;

pub const BRUTE_FORCE_EDGE_CAP: usize = 24;

/// ν(G) by enumerating every edge subset that is a matching. Test oracle;
/// independent of the augmenting-path code.
pub fn brute_force_matching_size(g: &Graph) -> Result<usize, MatchingError> {
    if g.is_directed() {
        return Err(MatchingError::Directed);
    }
    let edges: Vec<_> = g.edges().iter().copied().filter(|&(u, v)| u != v).collect();
    if edges.len() > BRUTE_FORCE_EDGE_CAP {
        return Err(MatchingError::TooManyEdges {
            cap: BRUTE_FORCE_EDGE_CAP,
            got: edges.len(),
        });
    }
    fn rec(edges: &[(usize, usize)], used: u64, size: usize, best: &mut usize) {
        let Some((&(u, v), rest)) = edges.split_first() else {
            *best = (*best).max(size);
            return;
        };
        if used >> u & 1 == 0 && used >> v & 1 == 0 {
            rec(rest, used | 1 << u | 1 << v, size + 1, best);
        }
        rec(rest, used, size, best);
    }
    // vertices beyond 64 cannot all be touched by 24 edges; compress ids
    let mut ids = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    let compact: Vec<_> = edges
        .iter()
        .map(|&(u, v)| {
            for x in [u, v] {
                if ids[x] == usize::MAX {
                    ids[x] = next;
                    next += 1;
                }
            }
            (ids[u], ids[v])
        })
        .collect();
    let mut best = 0;
    rec(&compact, 0, 0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            brute_force_matching_size(&Graph::undirected(3, &[]).unwrap()),
            Ok(0)
        );
        assert_eq!(
            brute_force_matching_size(&Graph::undirected(2, &[(0, 1)]).unwrap()),
            Ok(1)
        );
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        assert_eq!(
            brute_force_matching_size(&Graph::undirected(10, &edges).unwrap()),
            Ok(5)
        );
    }

    #[test]
    fn cap() {
        let edges: Vec<_> = (0..25).map(|i| (i, i + 1)).collect();
        let g = Graph::undirected(26, &edges).unwrap();
        assert_eq!(
            brute_force_matching_size(&g),
            Err(MatchingError::TooManyEdges { cap: 24, got: 25 })
        );
    }
}
