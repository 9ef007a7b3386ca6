//! Exponential-time exact solvers, the ground truth for every
//! approximation-ratio test.
//!
//! `exact_fc` enumerates vertex covers; for a fixed cover `S` the best
//! forest is a maximum-weight spanning forest of `G[S]` under edge gains
//! `1 − w_e`, because `wi(F) = |S| − Σ_{e∈F} (1 − w_e)` once the vertex set
//! is fixed. `exact_bfc` enumerates covers and set partitions with a subset
//! DP. Budgets are enforced, never silently truncated.

use std::collections::BTreeSet;

use crate::bfc::BfcSolution;
use crate::graph::{connected_components, kruskal_mst, Forest, Graph, UnionFind};
use crate::lp::FractionalSolution;
use crate::{Error, Result};

/// Size limits for the enumeration solvers.
#[derive(Clone, Copy, Debug)]
pub struct ExactBudget {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl ExactBudget {
    /// Default budget for [`exact_fc`].
    pub fn fc() -> Self {
        ExactBudget {
            max_vertices: 8,
            max_edges: 28,
        }
    }

    /// Default budget for [`exact_bfc`].
    pub fn bfc() -> Self {
        ExactBudget {
            max_vertices: 7,
            max_edges: 21,
        }
    }

    /// Default budget for [`brute_force_separation`].
    pub fn separation() -> Self {
        ExactBudget {
            max_vertices: 10,
            max_edges: 45,
        }
    }

    fn check(&self, graph: &Graph) -> Result<()> {
        if graph.vertex_count() > self.max_vertices {
            return Err(Error::OverBudget {
                what: "vertices",
                got: graph.vertex_count(),
                limit: self.max_vertices,
            });
        }
        if graph.edge_count() > self.max_edges {
            return Err(Error::OverBudget {
                what: "edges",
                got: graph.edge_count(),
                limit: self.max_edges,
            });
        }
        Ok(())
    }
}

/// Optimal forest cover by enumeration, with the default budget.
pub fn exact_fc(graph: &Graph) -> Result<(Forest, f64)> {
    exact_fc_with_budget(graph, &ExactBudget::fc())
}

pub fn exact_fc_with_budget(graph: &Graph, budget: &ExactBudget) -> Result<(Forest, f64)> {
    budget.check(graph)?;
    let n = graph.vertex_count();
    let m = graph.edge_count();
    // Endpoint masks for O(1) cover checks.
    let edge_masks: Vec<u32> = graph
        .edges()
        .iter()
        .map(|e| (1u32 << e.u) | (1u32 << e.v))
        .collect();
    // Gain-descending order is weight-ascending order; ties by id.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        graph
            .weight(a)
            .partial_cmp(&graph.weight(b))
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut best_value = f64::INFINITY;
    let mut best_mask = 0u32;
    let mut dsu = UnionFind::new(n);
    for mask in 0..(1u32 << n) {
        if edge_masks.iter().any(|&em| em & mask == 0) {
            continue;
        }
        let value = mask.count_ones() as f64 - max_gain(graph, &order, mask, &mut dsu);
        if value < best_value - 1e-12 {
            best_value = value;
            best_mask = mask;
        } else if value <= best_value + 1e-12 && lex_less(mask, best_mask) {
            best_mask = mask;
        }
    }
    let chosen = gain_forest_edges(graph, &order, best_mask, &mut dsu);
    let comps = connected_components(
        graph,
        |v| best_mask >> v & 1 == 1,
        |e| chosen.contains(&e),
    );
    let forest = Forest::new(
        comps
            .into_iter()
            .map(|(vertices, edges)| crate::graph::Tree {
                vertices,
                edges: edges.into_iter().collect(),
            })
            .collect(),
    );
    Ok((forest, best_value))
}

/// Total gain of the maximum-weight spanning forest of `G[mask]` under
/// gains `1 − w_e`; only strictly positive gains are taken.
fn max_gain(graph: &Graph, order: &[usize], mask: u32, dsu: &mut UnionFind) -> f64 {
    dsu.reset();
    let mut total = 0.0;
    for &id in order {
        let e = graph.edge(id);
        let gain = 1.0 - e.w;
        if gain <= 0.0 {
            break;
        }
        if mask >> e.u & 1 == 1 && mask >> e.v & 1 == 1 && dsu.union(e.u, e.v) {
            total += gain;
        }
    }
    total
}

fn gain_forest_edges(graph: &Graph, order: &[usize], mask: u32, dsu: &mut UnionFind) -> Vec<usize> {
    dsu.reset();
    let mut chosen = Vec::new();
    for &id in order {
        let e = graph.edge(id);
        if 1.0 - e.w <= 0.0 {
            break;
        }
        if mask >> e.u & 1 == 1 && mask >> e.v & 1 == 1 && dsu.union(e.u, e.v) {
            chosen.push(id);
        }
    }
    chosen
}

/// Compares bitmask vertex sets as ascending sequences.
fn lex_less(a: u32, b: u32) -> bool {
    let (mut a, mut b) = (a, b);
    loop {
        if a == b {
            return false;
        }
        if a == 0 {
            return true;
        }
        if b == 0 {
            return false;
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la < lb;
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// Optimal bounded forest cover by enumerating covers and set partitions.
/// Returns a witness and the minimum tree count.
pub fn exact_bfc(graph: &Graph, lambda: f64) -> Result<(BfcSolution, usize)> {
    exact_bfc_with_budget(graph, lambda, &ExactBudget::bfc())
}

pub fn exact_bfc_with_budget(
    graph: &Graph,
    lambda: f64,
    budget: &ExactBudget,
) -> Result<(BfcSolution, usize)> {
    budget.check(graph)?;
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::NonPositiveLambda { lambda });
    }
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let full = 1u32 << n;
    let edge_masks: Vec<u32> = graph
        .edges()
        .iter()
        .map(|e| (1u32 << e.u) | (1u32 << e.v))
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        graph
            .weight(a)
            .partial_cmp(&graph.weight(b))
            .unwrap()
            .then(a.cmp(&b))
    });

    // valid[p]: G[p] is connected and its MST weight fits the budget.
    let mut valid = vec![false; full as usize];
    let mut dsu = UnionFind::new(n);
    for p in 1..full {
        valid[p as usize] = part_fits(graph, &order, p, lambda, &mut dsu);
    }

    // dp[mask] = fewest valid parts partitioning mask; every part contains
    // the lowest vertex of its mask, so each state is scanned once.
    const UNREACHABLE: u32 = u32::MAX;
    let mut dp = vec![UNREACHABLE; full as usize];
    let mut choice = vec![0u32; full as usize];
    dp[0] = 0;
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let mut sub = mask;
        while sub != 0 {
            if sub & low != 0 && valid[sub as usize] && dp[(mask ^ sub) as usize] != UNREACHABLE {
                let cand = dp[(mask ^ sub) as usize] + 1;
                if cand < dp[mask as usize] {
                    dp[mask as usize] = cand;
                    choice[mask as usize] = sub;
                }
            }
            sub = (sub - 1) & mask;
        }
    }

    let mut best: Option<(u32, u32)> = None; // (cover mask, parts)
    for mask in 0..full {
        if edge_masks.iter().any(|&em| em & mask == 0) {
            continue;
        }
        if dp[mask as usize] == UNREACHABLE {
            continue;
        }
        if best.is_none_or(|(_, k)| dp[mask as usize] < k) {
            best = Some((mask, dp[mask as usize]));
        }
    }
    let (cover, k) = best.expect("the full vertex set always partitions into singletons");

    let mut trees = Vec::new();
    let mut rest = cover;
    while rest != 0 {
        let part = choice[rest as usize];
        let vertices: BTreeSet<usize> = (0..n).filter(|&v| part >> v & 1 == 1).collect();
        trees.push(kruskal_mst(graph, &vertices, |_| true)?);
        rest ^= part;
    }
    Ok((
        BfcSolution {
            trees,
            lambda,
        },
        k as usize,
    ))
}

fn part_fits(graph: &Graph, order: &[usize], part: u32, lambda: f64, dsu: &mut UnionFind) -> bool {
    let size = part.count_ones() as usize;
    if size == 1 {
        return true;
    }
    dsu.reset();
    let mut weight = 0.0;
    let mut joined = 0;
    for &id in order {
        let e = graph.edge(id);
        if part >> e.u & 1 == 1 && part >> e.v & 1 == 1 && dsu.union(e.u, e.v) {
            weight += e.w;
            joined += 1;
            if joined + 1 == size {
                break;
            }
        }
    }
    joined + 1 == size && weight <= lambda + 1e-9
}

/// Exhaustive minimizer of Σ_{i∈S} x_i − Σ_{(i,j)∈E(S)} y_ij over all sets
/// with at least one induced edge. `None` iff the graph has no edges. Ties
/// go to the first set in ascending bitmask order.
pub fn brute_force_separation(
    graph: &Graph,
    sol: &FractionalSolution,
) -> Result<Option<(BTreeSet<usize>, f64)>> {
    brute_force_separation_with_budget(graph, sol, &ExactBudget::separation())
}

pub fn brute_force_separation_with_budget(
    graph: &Graph,
    sol: &FractionalSolution,
    budget: &ExactBudget,
) -> Result<Option<(BTreeSet<usize>, f64)>> {
    budget.check(graph)?;
    let n = graph.vertex_count();
    let edge_masks: Vec<u32> = graph
        .edges()
        .iter()
        .map(|e| (1u32 << e.u) | (1u32 << e.v))
        .collect();
    let mut best: Option<(u32, f64)> = None;
    for mask in 1..(1u32 << n) {
        if !edge_masks.iter().any(|&em| mask | em == mask) {
            continue;
        }
        let xs: f64 = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| sol.x[v])
            .sum();
        let ys: f64 = edge_masks
            .iter()
            .enumerate()
            .filter(|&(_, &em)| em & mask == em)
            .map(|(id, _)| sol.y[id])
            .sum();
        let value = xs - ys;
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((mask, value));
        }
    }
    Ok(best.map(|(mask, value)| {
        (
            (0..n).filter(|&v| mask >> v & 1 == 1).collect(),
            value,
        )
    }))
}

/// Independent brute-force minimum vertex cover size, used to cross-check
/// the all-weights-one reduction.
pub fn brute_force_min_vertex_cover(graph: &Graph) -> usize {
    let n = graph.vertex_count();
    assert!(n <= 20, "brute-force vertex cover limited to 20 vertices");
    let edge_masks: Vec<u32> = graph
        .edges()
        .iter()
        .map(|e| (1u32 << e.u) | (1u32 << e.v))
        .collect();
    (0..(1u32 << n))
        .filter(|&mask| edge_masks.iter().all(|&em| em & mask != 0))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{approx_eq, weighted_index};

    #[test]
    fn single_edge_prefers_one_endpoint() {
        let g = Graph::fc(2, &[(0, 1, 0.4)]).unwrap();
        let (forest, value) = exact_fc(&g).unwrap();
        assert!(approx_eq(value, 1.0));
        assert_eq!(forest.trees.len(), 1);
        // cover {0} is lexicographically first among the value-1 covers
        assert_eq!(forest.vertex_set(), BTreeSet::from([0]));
    }

    #[test]
    fn triangle_all_ones_needs_two_singletons() {
        let g = Graph::fc(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let (forest, value) = exact_fc(&g).unwrap();
        assert!(approx_eq(value, 2.0));
        assert_eq!(forest.trees.len(), 2);
        assert!(forest.trees.iter().all(|t| t.edges.is_empty()));
    }

    #[test]
    fn zero_weight_path_costs_one() {
        let g = Graph::fc(3, &[(0, 1, 0.0), (1, 2, 0.0)]).unwrap();
        let (forest, value) = exact_fc(&g).unwrap();
        assert!(approx_eq(value, 1.0));
        assert!(approx_eq(weighted_index(&g, &forest).unwrap(), 1.0));
    }

    #[test]
    fn budget_is_enforced() {
        let edges: Vec<(usize, usize, f64)> = (0..8).map(|i| (i, i + 1, 0.5)).collect();
        let g = Graph::fc(9, &edges).unwrap();
        assert!(matches!(exact_fc(&g), Err(Error::OverBudget { .. })));
        assert!(exact_fc_with_budget(
            &g,
            &ExactBudget {
                max_vertices: 9,
                max_edges: 36
            }
        )
        .is_ok());
    }

    #[test]
    fn relabeling_does_not_change_the_optimum() {
        let g = Graph::fc(
            5,
            &[
                (0, 1, 0.3),
                (1, 2, 0.9),
                (2, 3, 0.1),
                (3, 4, 0.7),
                (0, 4, 0.5),
                (1, 3, 0.2),
            ],
        )
        .unwrap();
        let (_, base) = exact_fc(&g).unwrap();
        // rotate labels by 2
        let relabel = |v: usize| (v + 2) % 5;
        let edges: Vec<(usize, usize, f64)> = g
            .edges()
            .iter()
            .map(|e| (relabel(e.u), relabel(e.v), e.w))
            .collect();
        let h = Graph::fc(5, &edges).unwrap();
        let (_, permuted) = exact_fc(&h).unwrap();
        assert!(approx_eq(base, permuted));
    }

    #[test]
    fn all_ones_equals_minimum_vertex_cover() {
        let g = Graph::fc(
            5,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 3, 1.0),
                (3, 4, 1.0),
                (4, 0, 1.0),
            ],
        )
        .unwrap();
        let (_, value) = exact_fc(&g).unwrap();
        assert_eq!(value as usize, brute_force_min_vertex_cover(&g));
        assert_eq!(value as usize, 3); // odd cycle
    }

    /// For a fixed cover the Kruskal inner step must agree with enumerating
    /// every forest on G[S].
    #[test]
    fn inner_step_matches_forest_enumeration() {
        let g = Graph::fc(
            5,
            &[
                (0, 1, 0.25),
                (1, 2, 0.5),
                (2, 3, 0.125),
                (3, 4, 1.0),
                (0, 4, 0.625),
                (1, 3, 0.375),
                (0, 2, 0.875),
            ],
        )
        .unwrap();
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.sort_by(|&a, &b| {
            g.weight(a)
                .partial_cmp(&g.weight(b))
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut dsu = UnionFind::new(5);
        for mask in 1u32..32 {
            let inside: Vec<usize> = (0..g.edge_count())
                .filter(|&e| {
                    let em = (1u32 << g.edge(e).u) | (1u32 << g.edge(e).v);
                    em & mask == em
                })
                .collect();
            // enumerate all acyclic edge subsets of G[mask]
            let mut best = 0.0f64;
            for pick in 0..(1u32 << inside.len()) {
                let mut d = UnionFind::new(5);
                let mut ok = true;
                let mut gain = 0.0;
                for (i, &e) in inside.iter().enumerate() {
                    if pick >> i & 1 == 1 {
                        if !d.union(g.edge(e).u, g.edge(e).v) {
                            ok = false;
                            break;
                        }
                        gain += 1.0 - g.weight(e);
                    }
                }
                if ok {
                    best = best.max(gain);
                }
            }
            let kruskal = max_gain(&g, &order, mask, &mut dsu);
            assert!(
                approx_eq(best, kruskal),
                "mask {mask:05b}: enumeration {best} vs kruskal {kruskal}"
            );
        }
    }

    #[test]
    fn bfc_single_edge_fits_one_tree() {
        let g = Graph::bfc(2, &[(0, 1, 2.0)]).unwrap();
        let (sol, k) = exact_bfc(&g, 5.0).unwrap();
        assert_eq!(k, 1);
        assert!(sol.validate(&g).is_ok());
    }

    #[test]
    fn bfc_star_center_suffices() {
        let lambda = 3.0;
        let g = Graph::bfc(
            5,
            &[
                (0, 1, lambda),
                (0, 2, lambda),
                (0, 3, lambda),
                (0, 4, lambda),
            ],
        )
        .unwrap();
        let (sol, k) = exact_bfc(&g, lambda).unwrap();
        assert_eq!(k, 1);
        assert_eq!(sol.trees[0].vertices, BTreeSet::from([0]));
    }

    #[test]
    fn bfc_two_disjoint_edges_need_two_trees() {
        let lambda = 1.5;
        let g = Graph::bfc(4, &[(0, 1, lambda), (2, 3, lambda)]).unwrap();
        let (_, k) = exact_bfc(&g, lambda).unwrap();
        assert_eq!(k, 2);
    }

    #[test]
    fn separation_brute_force_triangle() {
        let g = Graph::fc(3, &[(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5)]).unwrap();
        let sol = FractionalSolution {
            x: vec![0.6, 0.6, 0.6],
            y: vec![0.4, 0.4, 0.4],
            objective: f64::NAN,
        };
        let (set, value) = brute_force_separation(&g, &sol).unwrap().unwrap();
        assert!(approx_eq(value, 0.6));
        assert_eq!(set, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn separation_brute_force_tight_edge() {
        let g = Graph::fc(2, &[(0, 1, 0.0)]).unwrap();
        let sol = FractionalSolution {
            x: vec![1.0, 1.0],
            y: vec![1.0],
            objective: f64::NAN,
        };
        let (set, value) = brute_force_separation(&g, &sol).unwrap().unwrap();
        assert!(approx_eq(value, 1.0));
        assert_eq!(set, BTreeSet::from([0, 1]));
    }

    #[test]
    fn separation_brute_force_no_edges() {
        let g = Graph::fc(3, &[]).unwrap();
        let sol = FractionalSolution {
            x: vec![0.0, 0.0, 0.0],
            y: vec![],
            objective: f64::NAN,
        };
        assert!(brute_force_separation(&g, &sol).unwrap().is_none());
    }
}
