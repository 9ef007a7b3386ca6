//! Maximum cardinality matching on general graphs.
//!
//! The binary-weight algorithm needs a *maximum* (not merely maximal)
//! matching for its lower bound to be valid, and the subgraph it matches on
//! is arbitrary, so this is the full Edmonds blossom algorithm: alternating
//! BFS trees with odd-cycle contraction. Exploration order is fixed
//! (ascending vertex and neighbor ids), which pins down the returned
//! matching, not just its size.

use std::collections::BTreeSet;

use crate::graph::Graph;
use crate::{Error, Result};

/// A set of pairwise endpoint-disjoint edges, stored by edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub edges: BTreeSet<usize>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Endpoint-disjointness check against the host graph.
    pub fn is_valid(&self, graph: &Graph) -> bool {
        let mut used = vec![false; graph.vertex_count()];
        for &e in &self.edges {
            let edge = graph.edge(e);
            if used[edge.u] || used[edge.v] {
                return false;
            }
            used[edge.u] = true;
            used[edge.v] = true;
        }
        true
    }
}

const NONE: usize = usize::MAX;

/// Maximum cardinality matching of the subgraph selected by `vertices` and
/// `edge_ok` (an edge participates iff it passes the filter and both
/// endpoints are selected).
pub fn maximum_matching(
    graph: &Graph,
    vertices: &BTreeSet<usize>,
    edge_ok: impl Fn(usize) -> bool,
) -> Matching {
    let n = graph.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, e) in graph.edges().iter().enumerate() {
        if edge_ok(id) && vertices.contains(&e.u) && vertices.contains(&e.v) {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
    }

    let mut mate = vec![NONE; n];
    // Greedy seed keeps the number of augmenting phases down and is
    // deterministic in ascending order.
    for u in 0..n {
        if mate[u] != NONE {
            continue;
        }
        if let Some(&(v, _)) = adj[u].iter().find(|&&(v, _)| mate[v] == NONE) {
            mate[u] = v;
            mate[v] = u;
        }
    }

    let mut searcher = BlossomSearch::new(n);
    for root in 0..n {
        if mate[root] == NONE && !adj[root].is_empty() {
            searcher.augment_from(root, &adj, &mut mate);
        }
    }

    let mut edges = BTreeSet::new();
    for u in 0..n {
        let v = mate[u];
        if v != NONE && u < v {
            let id = adj[u]
                .iter()
                .find(|&&(w, _)| w == v)
                .map(|&(_, id)| id)
                .expect("matched pair must come from a selected edge");
            edges.insert(id);
        }
    }
    Matching { edges }
}

struct BlossomSearch {
    parent: Vec<usize>,
    base: Vec<usize>,
    in_queue: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        BlossomSearch {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            in_queue: vec![false; n],
            in_blossom: vec![false; n],
            on_path: vec![false; n],
        }
    }

    fn augment_from(
        &mut self,
        root: usize,
        adj: &[Vec<(usize, usize)>],
        mate: &mut [usize],
    ) -> bool {
        let n = adj.len();
        for i in 0..n {
            self.parent[i] = NONE;
            self.base[i] = i;
            self.in_queue[i] = false;
        }
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(root);
        self.in_queue[root] = true;

        while let Some(v) = queue.pop_front() {
            for &(to, _) in &adj[v] {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    // Odd cycle: contract the blossom around the common base.
                    let cur_base = self.lca(v, to, mate);
                    for f in self.in_blossom.iter_mut() {
                        *f = false;
                    }
                    self.mark_path(v, cur_base, to, mate);
                    self.mark_path(to, cur_base, v, mate);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur_base;
                            if !self.in_queue[i] {
                                self.in_queue[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        self.flip_path(to, mate);
                        return true;
                    }
                    let next = mate[to];
                    if !self.in_queue[next] {
                        self.in_queue[next] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
        false
    }

    fn lca(&mut self, a: usize, b: usize, mate: &[usize]) -> usize {
        for f in self.on_path.iter_mut() {
            *f = false;
        }
        let mut a = self.base[a];
        loop {
            self.on_path[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.base[self.parent[mate[a]]];
        }
        let mut b = self.base[b];
        loop {
            if self.on_path[b] {
                return b;
            }
            b = self.base[self.parent[mate[b]]];
        }
    }

    fn mark_path(&mut self, mut v: usize, cur_base: usize, mut child: usize, mate: &[usize]) {
        while self.base[v] != cur_base {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn flip_path(&self, mut v: usize, mate: &mut [usize]) {
        loop {
            let pv = self.parent[v];
            let next = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            if next == NONE {
                break;
            }
            v = next;
        }
    }
}

/// Exhaustive maximum matching over the selected subgraph; the test oracle.
/// Rejects subgraphs with more than 16 selected edges.
pub fn brute_force_matching(
    graph: &Graph,
    vertices: &BTreeSet<usize>,
    edge_ok: impl Fn(usize) -> bool,
) -> Result<Matching> {
    let selected: Vec<usize> = (0..graph.edge_count())
        .filter(|&id| {
            let e = graph.edge(id);
            edge_ok(id) && vertices.contains(&e.u) && vertices.contains(&e.v)
        })
        .collect();
    if selected.len() > 16 {
        return Err(Error::OverBudget {
            what: "edges",
            got: selected.len(),
            limit: 16,
        });
    }
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut used = vec![false; graph.vertex_count()];
    fn search(
        graph: &Graph,
        selected: &[usize],
        pos: usize,
        used: &mut [bool],
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if current.len() + (selected.len() - pos) <= best.len() {
            return;
        }
        if pos == selected.len() {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        let id = selected[pos];
        let e = graph.edge(id);
        if !used[e.u] && !used[e.v] {
            used[e.u] = true;
            used[e.v] = true;
            current.push(id);
            search(graph, selected, pos + 1, used, current, best);
            current.pop();
            used[e.u] = false;
            used[e.v] = false;
        }
        search(graph, selected, pos + 1, used, current, best);
    }
    search(graph, &selected, 0, &mut used, &mut current, &mut best);
    Ok(Matching {
        edges: best.into_iter().collect(),
    })
}
