//! The bounded forest cover pipeline.
//!
//! Bounded forest cover asks for the fewest trees, each of total weight at
//! most λ, whose vertices form a vertex cover. The 6-approximation:
//!
//! 1. rescale weights: `w′ = 1` if `w > λ/2`, else `2w/λ` — an FC instance;
//! 2. run the deterministic LP-rounding 2-approximation on it;
//! 3. drop every forest edge of transformed weight 1 (splitting a tree
//!    raises the tree count by exactly the dropped weight, so the weighted
//!    index is unchanged);
//! 4. edge-decompose each remaining tree into pieces of transformed weight
//!    at most 2 (β = 1);
//! 5. read the pieces back in original weights: every remaining edge has
//!    `w ≤ λ/2`, so a piece of transformed weight ≤ 2 weighs ≤ λ.
//!
//! Pieces of one tree may share their cut vertices; the vertex union, and
//! with it the cover property, is preserved.

use std::collections::BTreeSet;

use crate::fc::{lp_rounding_fc, LpStats};
use crate::graph::{connected_components, weighted_index, Forest, Graph, Tree, UnionFind, WeightMode};
use crate::{Error, Result, TOL_STRUCT};

/// A bounded forest cover: trees in original edge ids/weights, each of
/// weight at most `lambda`. Trees may share vertices (cut points of the
/// edge decomposition) but never edges.
#[derive(Clone, Debug)]
pub struct BfcSolution {
    pub trees: Vec<Tree>,
    pub lambda: f64,
}

impl BfcSolution {
    /// Number of trees, the quantity being minimized.
    pub fn count(&self) -> usize {
        self.trees.len()
    }

    /// Check every structural promise: each tree connected and acyclic with
    /// weight ≤ λ, no edge in two trees, and the vertex union a cover.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let mut seen_edges = BTreeSet::new();
        for (ti, tree) in self.trees.iter().enumerate() {
            if tree.vertices.is_empty() {
                return Err(Error::InvalidForest(format!("tree {ti} has no vertices")));
            }
            if tree.edges.len() + 1 != tree.vertices.len() {
                return Err(Error::InvalidForest(format!(
                    "tree {ti} has {} vertices and {} edges",
                    tree.vertices.len(),
                    tree.edges.len()
                )));
            }
            let index: Vec<usize> = tree.vertices.iter().copied().collect();
            let mut dsu = UnionFind::new(index.len());
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
                let (Ok(u), Ok(v)) = (
                    index.binary_search(&edge.u),
                    index.binary_search(&edge.v),
                ) else {
                    return Err(Error::InvalidForest(format!(
                        "edge {e} leaves the vertex set of tree {ti}"
                    )));
                };
                if !dsu.union(u, v) {
                    return Err(Error::InvalidForest(format!("tree {ti} contains a cycle")));
                }
            }
            let weight = tree.weight(graph);
            if weight > self.lambda + TOL_STRUCT {
                return Err(Error::LambdaExceeded {
                    edge: *tree.edges.iter().next().unwrap_or(&0),
                    weight,
                    lambda: self.lambda,
                });
            }
        }
        let covered: BTreeSet<usize> = self
            .trees
            .iter()
            .flat_map(|t| t.vertices.iter().copied())
            .collect();
        for (id, e) in graph.edges().iter().enumerate() {
            if !covered.contains(&e.u) && !covered.contains(&e.v) {
                return Err(Error::InvalidForest(format!("edge {id} is not covered")));
            }
        }
        Ok(())
    }
}

/// Rescale a BFC instance into an FC-normalized one: weight 1 for edges
/// heavier than λ/2, otherwise `2w/λ`. Instances with an edge heavier than
/// λ are rejected.
pub fn transform_weights(graph: &Graph, lambda: f64) -> Result<Graph> {
    if graph.mode() != WeightMode::BfcRaw {
        return Err(Error::ModeMismatch {
            expected: WeightMode::BfcRaw,
            found: graph.mode(),
        });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonPositiveLambda { lambda });
    }
    let mut weights = Vec::with_capacity(graph.edge_count());
    for (id, e) in graph.edges().iter().enumerate() {
        if e.w > lambda {
            return Err(Error::LambdaExceeded {
                edge: id,
                weight: e.w,
                lambda,
            });
        }
        weights.push(if e.w > lambda / 2.0 {
            1.0
        } else {
            2.0 * e.w / lambda
        });
    }
    graph.reweighted(WeightMode::FcNormalized, &weights)
}

/// Edge-decompose a tree into pieces of weight at most 2β, using at most
/// max(w(T)/β, 1) pieces. Requires every edge weight ≤ β. The pieces
/// partition the edge set; adjacent pieces share their cut vertex. A
/// singleton tree passes through unchanged.
///
/// Walk the tree in post-order accumulating branch weight; while more than
/// 2β of weight remains undetached, any accumulation reaching β is split
/// off as one piece (its weight is below 2β because pending subtrees stay
/// below β while detaching is active). Once at most 2β remains, everything
/// left funnels into the final piece.
pub fn edge_decompose(
    graph: &Graph,
    tree: &Tree,
    weight_of: &dyn Fn(usize) -> f64,
    beta: f64,
) -> Result<Vec<Tree>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::BadParams(format!("beta = {beta} must be positive")));
    }
    for &e in &tree.edges {
        let w = weight_of(e);
        if w > beta {
            return Err(Error::BetaExceeded {
                edge: e,
                weight: w,
                beta,
            });
        }
    }
    if tree.edges.is_empty() {
        return Ok(vec![tree.clone()]);
    }
    let mut adjacency: std::collections::BTreeMap<usize, Vec<(usize, usize)>> =
        tree.vertices.iter().map(|&v| (v, Vec::new())).collect();
    for &e in &tree.edges {
        let edge = graph.edge(e);
        adjacency.get_mut(&edge.u).unwrap().push((edge.v, e));
        adjacency.get_mut(&edge.v).unwrap().push((edge.u, e));
    }
    let root = *tree.vertices.iter().next().unwrap();
    let total: f64 = tree.edges.iter().map(|&e| weight_of(e)).sum();
    let mut splitter = Splitter {
        adjacency,
        weight_of,
        beta,
        remaining: total,
        pieces: Vec::new(),
    };
    let (leftover, _) = splitter.descend(root, usize::MAX);
    let mut pieces = splitter.pieces;
    if !leftover.is_empty() {
        pieces.push(leftover);
    }
    Ok(pieces
        .into_iter()
        .map(|edges| Tree::from_edges(graph, edges))
        .collect())
}

struct Splitter<'a> {
    adjacency: std::collections::BTreeMap<usize, Vec<(usize, usize)>>,
    weight_of: &'a dyn Fn(usize) -> f64,
    beta: f64,
    remaining: f64,
    pieces: Vec<Vec<usize>>,
}

impl Splitter<'_> {
    fn descend(&mut self, v: usize, parent: usize) -> (Vec<usize>, f64) {
        let mut acc: Vec<usize> = Vec::new();
        let mut acc_weight = 0.0;
        let neighbors = self.adjacency[&v].clone();
        for (child, e) in neighbors {
            if child == parent {
                continue;
            }
            let (mut branch, pending) = self.descend(child, v);
            branch.push(e);
            let branch_weight = pending + (self.weight_of)(e);
            if branch_weight >= self.beta && self.remaining > 2.0 * self.beta {
                self.remaining -= branch_weight;
                self.pieces.push(branch);
            } else {
                acc.extend(branch);
                acc_weight += branch_weight;
                if acc_weight >= self.beta && self.remaining > 2.0 * self.beta {
                    self.remaining -= acc_weight;
                    self.pieces.push(std::mem::take(&mut acc));
                    acc_weight = 0.0;
                }
            }
        }
        (acc, acc_weight)
    }
}

/// Counters recorded along the pipeline; the weighted index before and
/// after the weight-1 edge removal must agree exactly.
#[derive(Clone, Debug)]
pub struct BfcDiagnostics {
    /// Weighted index of the LP-rounded forest in the transformed instance.
    pub fc_weighted_index: f64,
    /// LP objective of the transformed instance; 2·this bounds the forest.
    pub fc_lower_bound: Option<f64>,
    pub wi_before_removal: f64,
    pub wi_after_removal: f64,
    pub lp: Option<LpStats>,
}

#[derive(Clone, Debug)]
pub struct BfcOutcome {
    pub solution: BfcSolution,
    pub diagnostics: BfcDiagnostics,
}

/// The 6-approximation for bounded forest cover.
pub fn bfc_6approx(graph: &Graph, lambda: f64) -> Result<BfcOutcome> {
    let transformed = transform_weights(graph, lambda)?;
    let fc = lp_rounding_fc(&transformed)?;

    // Drop weight-1 edges from the forest; each drop splits one tree in two
    // and leaves the transformed weighted index unchanged.
    let wi_before = fc.weighted_index;
    let mut split_trees: Vec<Tree> = Vec::new();
    for tree in &fc.forest.trees {
        let kept: BTreeSet<usize> = tree
            .edges
            .iter()
            .copied()
            .filter(|&e| transformed.weight(e) < 1.0)
            .collect();
        if kept.len() == tree.edges.len() {
            split_trees.push(tree.clone());
        } else {
            for (vertices, edges) in connected_components(
                &transformed,
                |v| tree.vertices.contains(&v),
                |e| kept.contains(&e),
            ) {
                split_trees.push(Tree {
                    vertices,
                    edges: edges.into_iter().collect(),
                });
            }
        }
    }
    let split_forest = Forest::new(split_trees);
    let wi_after = weighted_index(&transformed, &split_forest)?;
    debug_assert!((wi_before - wi_after).abs() <= TOL_STRUCT);

    let mut trees = Vec::new();
    for tree in &split_forest.trees {
        trees.extend(edge_decompose(
            &transformed,
            tree,
            &|e| transformed.weight(e),
            1.0,
        )?);
    }
    // deterministic output order regardless of per-tree processing order
    trees.sort_by_key(|t| (*t.vertices.iter().next().unwrap(), t.vertices.len()));
    let solution = BfcSolution { trees, lambda };
    debug_assert!(solution.validate(graph).is_ok());
    Ok(BfcOutcome {
        solution,
        diagnostics: BfcDiagnostics {
            fc_weighted_index: fc.weighted_index,
            fc_lower_bound: fc.lower_bound,
            wi_before_removal: wi_before,
            wi_after_removal: wi_after,
            lp: fc.diagnostics.lp,
        },
    })
}
