//! Graph and forest types shared by every solver.
//!
//! Vertices are dense ids `0..n`. Edges carry an `f64` weight and keep the id
//! they were constructed with, so solutions can refer to edges stably. A
//! [`Forest`] is a set of vertex-disjoint trees; its cost is the *weighted
//! index*: the sum of its edge weights plus the number of trees.

use std::collections::BTreeSet;

use crate::{Error, Result, TOL_STRUCT};

/// Which weight range an instance lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    /// Forest cover instance: every weight in `[0, 1]`.
    FcNormalized,
    /// Bounded forest cover instance: every weight strictly positive.
    BfcRaw,
}

/// An undirected weighted edge. `u < v` is not required; both orders denote
/// the same edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    /// True if `vertex` is one of the endpoints.
    pub fn touches(&self, vertex: usize) -> bool {
        self.u == vertex || self.v == vertex
    }

    /// The endpoint opposite to `vertex`.
    pub fn other(&self, vertex: usize) -> usize {
        if self.u == vertex {
            self.v
        } else {
            self.u
        }
    }
}

/// An immutable simple graph with per-edge weights.
///
/// Construction validates the instance: no self-loops, no parallel edges, and
/// weights in the range demanded by the [`WeightMode`]. The i-th edge passed
/// to the constructor gets id `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    mode: WeightMode,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, mode: WeightMode, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut list = Vec::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v, w)) in edges.iter().enumerate() {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::ParallelEdge { u, v });
            }
            let ok = match mode {
                WeightMode::FcNormalized => w.is_finite() && (0.0..=1.0).contains(&w),
                WeightMode::BfcRaw => w.is_finite() && w > 0.0,
            };
            if !ok {
                return Err(Error::WeightOutOfRange {
                    edge: id,
                    weight: w,
                    mode,
                });
            }
            list.push(Edge { u, v, w });
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: list,
            mode,
            adj,
        })
    }

    /// FC-normalized graph (weights in `[0, 1]`).
    pub fn fc(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(n, WeightMode::FcNormalized, edges)
    }

    /// BFC-raw graph (positive weights).
    pub fn bfc(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(n, WeightMode::BfcRaw, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn weight(&self, id: usize) -> f64 {
        self.edges[id].w
    }

    /// Neighbors of `u` as `(vertex, edge id)`, ascending by vertex.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adj[u]
    }

    /// Same topology with new weights, validated under `mode`.
    pub fn reweighted(&self, mode: WeightMode, weights: &[f64]) -> Result<Self> {
        assert_eq!(weights.len(), self.edges.len());
        let list: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| (e.u, e.v, w))
            .collect();
        Self::new(self.n, mode, &list)
    }
}

/// One tree of a forest: a vertex set plus the edge ids spanning it. A
/// singleton vertex is a tree with no edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tree {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
}

impl Tree {
    pub fn singleton(v: usize) -> Self {
        Tree {
            vertices: BTreeSet::from([v]),
            edges: BTreeSet::new(),
        }
    }

    /// Build a tree from edge ids, taking the vertex set from the endpoints.
    pub fn from_edges(graph: &Graph, edges: impl IntoIterator<Item = usize>) -> Self {
        let edges: BTreeSet<usize> = edges.into_iter().collect();
        let mut vertices = BTreeSet::new();
        for &e in &edges {
            vertices.insert(graph.edge(e).u);
            vertices.insert(graph.edge(e).v);
        }
        Tree { vertices, edges }
    }

    pub fn weight(&self, graph: &Graph) -> f64 {
        self.edges.iter().map(|&e| graph.weight(e)).sum()
    }
}

/// A collection of vertex-disjoint trees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Forest {
    pub fn new(trees: Vec<Tree>) -> Self {
        Forest { trees }
    }

    pub fn empty() -> Self {
        Forest { trees: Vec::new() }
    }

    /// Union of the trees' vertex sets.
    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.trees
            .iter()
            .flat_map(|t| t.vertices.iter().copied())
            .collect()
    }

    /// All edge ids across trees.
    pub fn edge_ids(&self) -> BTreeSet<usize> {
        self.trees
            .iter()
            .flat_map(|t| t.edges.iter().copied())
            .collect()
    }

    /// Check the structural invariants: every tree connected and acyclic,
    /// edges inside their tree's vertex set, trees pairwise vertex-disjoint.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let mut seen_vertices = BTreeSet::new();
        let mut seen_edges = BTreeSet::new();
        for (ti, tree) in self.trees.iter().enumerate() {
            if tree.vertices.is_empty() {
                return Err(Error::InvalidForest(format!("tree {ti} has no vertices")));
            }
            for &v in &tree.vertices {
                if v >= graph.vertex_count() {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        n: graph.vertex_count(),
                    });
                }
                if !seen_vertices.insert(v) {
                    return Err(Error::InvalidForest(format!(
                        "vertex {v} appears in more than one tree"
                    )));
                }
            }
            for &e in &tree.edges {
                if e >= graph.edge_count() {
                    return Err(Error::InvalidForest(format!("unknown edge id {e}")));
                }
                if !seen_edges.insert(e) {
                    return Err(Error::InvalidForest(format!(
                        "edge {e} appears in more than one tree"
                    )));
                }
                let edge = graph.edge(e);
                if !tree.vertices.contains(&edge.u) || !tree.vertices.contains(&edge.v) {
                    return Err(Error::InvalidForest(format!(
                        "edge {e} leaves the vertex set of tree {ti}"
                    )));
                }
            }
            // |E| = |V| - 1 together with no repeated vertices inside the
            // union-find below gives connected + acyclic.
            if tree.edges.len() + 1 != tree.vertices.len() {
                return Err(Error::InvalidForest(format!(
                    "tree {ti} has {} vertices and {} edges",
                    tree.vertices.len(),
                    tree.edges.len()
                )));
            }
            let index: Vec<usize> = tree.vertices.iter().copied().collect();
            let mut dsu = UnionFind::new(index.len());
            let pos = |v: usize| index.binary_search(&v).unwrap();
            for &e in &tree.edges {
                let edge = graph.edge(e);
                if !dsu.union(pos(edge.u), pos(edge.v)) {
                    return Err(Error::InvalidForest(format!("tree {ti} contains a cycle")));
                }
            }
        }
        Ok(())
    }
}

/// Weighted index of a forest: sum of edge weights plus the number of trees.
///
/// Errors if the forest violates its structural invariants or references
/// unknown edges.
pub fn weighted_index(graph: &Graph, forest: &Forest) -> Result<f64> {
    forest.validate(graph)?;
    let edge_sum: f64 = forest
        .trees
        .iter()
        .flat_map(|t| t.edges.iter())
        .map(|&e| graph.weight(e))
        .sum();
    Ok(edge_sum + forest.trees.len() as f64)
}

/// The same quantity computed the other way: Σ|T_i| − Σ(1−w_e).
/// Agrees with [`weighted_index`] to within [`TOL_STRUCT`].
pub fn weighted_index_alt(graph: &Graph, forest: &Forest) -> Result<f64> {
    forest.validate(graph)?;
    let vertex_sum: f64 = forest.trees.iter().map(|t| t.vertices.len() as f64).sum();
    let gain_sum: f64 = forest
        .trees
        .iter()
        .flat_map(|t| t.edges.iter())
        .map(|&e| 1.0 - graph.weight(e))
        .sum();
    Ok(vertex_sum - gain_sum)
}

/// True iff the forest's vertices form a vertex cover of the graph.
pub fn is_forest_cover(graph: &Graph, forest: &Forest) -> Result<bool> {
    forest.validate(graph)?;
    let covered = forest.vertex_set();
    Ok(graph
        .edges()
        .iter()
        .all(|e| covered.contains(&e.u) || covered.contains(&e.v)))
}

/// Connected components of the subgraph selected by the two filters.
///
/// A vertex is selected iff `vertex_ok(v)`; an edge is selected iff
/// `edge_ok(e)` and both endpoints are selected. Components are returned as
/// `(vertex set, edge ids)` ordered by their smallest vertex id; the edge
/// lists are ascending.
pub fn connected_components(
    graph: &Graph,
    vertex_ok: impl Fn(usize) -> bool,
    edge_ok: impl Fn(usize) -> bool,
) -> Vec<(BTreeSet<usize>, Vec<usize>)> {
    let n = graph.vertex_count();
    let selected: Vec<bool> = (0..n).map(&vertex_ok).collect();
    let mut dsu = UnionFind::new(n);
    let mut edge_in = vec![false; graph.edge_count()];
    for (id, e) in graph.edges().iter().enumerate() {
        if selected[e.u] && selected[e.v] && edge_ok(id) {
            edge_in[id] = true;
            dsu.union(e.u, e.v);
        }
    }
    let mut comps: Vec<(BTreeSet<usize>, Vec<usize>)> = Vec::new();
    let mut root_to_comp = vec![usize::MAX; n];
    for (v, &sel) in selected.iter().enumerate() {
        if !sel {
            continue;
        }
        let r = dsu.find(v);
        if root_to_comp[r] == usize::MAX {
            root_to_comp[r] = comps.len();
            comps.push((BTreeSet::new(), Vec::new()));
        }
        comps[root_to_comp[r]].0.insert(v);
    }
    for (id, e) in graph.edges().iter().enumerate() {
        if edge_in[id] {
            let r = dsu.find(e.u);
            comps[root_to_comp[r]].1.push(id);
        }
    }
    // Scanning vertices in ascending order already yields components ordered
    // by smallest member; edges were pushed in ascending id order.
    comps
}

/// Minimum spanning tree of `vertices` using the edges passing `edge_ok`
/// whose endpoints both lie in `vertices`. Ties are broken by smaller edge
/// id, so the result is deterministic. Errors if the selection does not
/// connect the vertex set.
pub fn kruskal_mst(
    graph: &Graph,
    vertices: &BTreeSet<usize>,
    edge_ok: impl Fn(usize) -> bool,
) -> Result<Tree> {
    if vertices.is_empty() {
        return Err(Error::Disconnected("empty vertex set".into()));
    }
    if vertices.len() == 1 {
        return Ok(Tree::singleton(*vertices.iter().next().unwrap()));
    }
    let index: Vec<usize> = vertices.iter().copied().collect();
    let pos = |v: usize| index.binary_search(&v).ok();
    let mut candidates: Vec<usize> = (0..graph.edge_count())
        .filter(|&id| {
            let e = graph.edge(id);
            edge_ok(id) && pos(e.u).is_some() && pos(e.v).is_some()
        })
        .collect();
    candidates.sort_by(|&a, &b| {
        graph
            .weight(a)
            .partial_cmp(&graph.weight(b))
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut dsu = UnionFind::new(index.len());
    let mut chosen = BTreeSet::new();
    for id in candidates {
        let e = graph.edge(id);
        if dsu.union(pos(e.u).unwrap(), pos(e.v).unwrap()) {
            chosen.insert(id);
            if chosen.len() + 1 == index.len() {
                break;
            }
        }
    }
    if chosen.len() + 1 != index.len() {
        return Err(Error::Disconnected(format!(
            "{} vertices, spanning forest has {} edges",
            index.len(),
            chosen.len()
        )));
    }
    Ok(Tree {
        vertices: vertices.clone(),
        edges: chosen,
    })
}

/// Plain array-based union-find with path halving.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Back to all-singletons without reallocating.
    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.rank.fill(0);
    }

    /// Returns false if `x` and `y` were already in the same set.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// Convenience check used in several tests and the verifier.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL_STRUCT
}
