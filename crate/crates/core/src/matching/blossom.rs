use std::collections::VecDeque;

use super::Matching;
use crate::error::MatchingError;
use crate::graph::Graph;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    // lowest common ancestor of two outer vertices in the alternating tree
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("outer vertex has a tree parent"),
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            let m = self.mate[b].expect("path to the root alternates");
            b = self.parent[m].expect("outer vertex has a tree parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = self.mate[v].expect("inner blossom vertices are matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a tree parent");
        }
    }

    // Grows an alternating tree from `root`; returns the free endpoint of an
    // augmenting path if one exists.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &self.adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_outer =
                    to == root || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_outer {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Maximum matching of an arbitrary undirected graph by Edmonds' blossom
/// shrinking. Roots are tried in ascending order, so the result is
/// deterministic.
pub fn max_matching_general(g: &Graph) -> Result<Matching, MatchingError> {
    if g.is_directed() {
        return Err(MatchingError::Directed);
    }
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| g.neighbors(u).filter(|&v| v != u).collect())
        .collect();
    let mut st = Blossom {
        adj: &adj,
        mate: vec![None; n],
        parent: vec![None; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    for root in 0..n {
        if st.mate[root].is_some() {
            continue;
        }
        let mut v = st.find_path(root);
        while let Some(x) = v {
            let pv = st.parent[x].expect("augmenting path is rooted");
            let next = st.mate[pv];
            st.mate[x] = Some(pv);
            st.mate[pv] = Some(x);
            v = next;
        }
    }
    Ok(Matching::from_mate(st.mate))
}
