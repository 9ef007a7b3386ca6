//! The three forest cover approximation algorithms.
//!
//! *Binary weights.* Vertices touching a weight-0 edge form `V_0`; each
//! connected component of the weight-0 subgraph contributes one spanning
//! tree. A maximum matching of the weight-1 subgraph on the remaining
//! vertices contributes one two-vertex tree per matched edge. The result
//! costs `k + 2|M|` while the dual assignment putting 1 on every component
//! set and matched pair is feasible with value `k + |M|`, so the algorithm
//! is a 2-approximation and ships its own lower-bound certificate.
//!
//! *Real weights.* [`randomized_fc`] rounds each weight to 0/1 by sampling
//! an indicator that is 1 with probability `1 − w_e`, solves the binary
//! instance, repeats `m = ⌈|E|/(2δ²)⌉` times with `δ = ε²`, and keeps the
//! candidate whose true weighted index is smallest. Every candidate is
//! feasible for the original graph, and with high probability the best one
//! is within `2 + ε` of optimal.
//!
//! *LP rounding.* [`lp_rounding_fc`] solves the relaxation, takes the
//! support subgraph, spans each component with a Kruskal MST, deletes
//! pendant vertices whose fractional value is below one half, and keeps
//! isolated support vertices with value at least one half. The rounded
//! forest costs at most twice the LP optimum.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use crate::graph::{
    connected_components, is_forest_cover, kruskal_mst, weighted_index, Forest, Graph, Tree,
    WeightMode,
};
use crate::lp::{cutting_plane_solve_with_tol, CuttingPlaneOutcome};
use crate::matching::maximum_matching;
use crate::{Error, Result, TOL_STRUCT};

/// Sparse feasible point of the dual LP; its objective value lower-bounds
/// the optimal weighted index by weak duality.
#[derive(Clone, Debug, Default)]
pub struct DualCertificate {
    /// z_e, keyed by edge id.
    pub edge_values: BTreeMap<usize, f64>,
    /// z_ue, keyed by (vertex, edge id).
    pub incidence_values: BTreeMap<(usize, usize), f64>,
    /// z_S as (vertex set, value) pairs.
    pub set_values: Vec<(BTreeSet<usize>, f64)>,
}

impl DualCertificate {
    /// Dual objective Σ z_e + Σ z_S.
    pub fn bound(&self) -> f64 {
        self.edge_values.values().sum::<f64>()
            + self.set_values.iter().map(|(_, v)| v).sum::<f64>()
    }
}

/// Check both dual constraint families within [`TOL_STRUCT`]:
/// per vertex Σ_{e∋u} z_e + Σ_{e∋u} z_ue + Σ_{S∋u} z_S ≤ 1 and per edge
/// Σ_{S⊇e} z_S + z_ue + z_ve ≥ 1 − w_e, plus nonnegativity.
pub fn check_dual_feasibility(graph: &Graph, cert: &DualCertificate) -> bool {
    let nonneg = cert.edge_values.values().all(|&v| v >= -TOL_STRUCT)
        && cert.incidence_values.values().all(|&v| v >= -TOL_STRUCT)
        && cert.set_values.iter().all(|(_, v)| *v >= -TOL_STRUCT);
    if !nonneg {
        return false;
    }
    for u in 0..graph.vertex_count() {
        let mut load = 0.0;
        for &(_, e) in graph.neighbors(u) {
            load += cert.edge_values.get(&e).copied().unwrap_or(0.0);
            load += cert.incidence_values.get(&(u, e)).copied().unwrap_or(0.0);
        }
        load += cert
            .set_values
            .iter()
            .filter(|(s, _)| s.contains(&u))
            .map(|(_, v)| v)
            .sum::<f64>();
        if load > 1.0 + TOL_STRUCT {
            return false;
        }
    }
    for (id, edge) in graph.edges().iter().enumerate() {
        let mut cover = cert
            .incidence_values
            .get(&(edge.u, id))
            .copied()
            .unwrap_or(0.0)
            + cert
                .incidence_values
                .get(&(edge.v, id))
                .copied()
                .unwrap_or(0.0);
        cover += cert
            .set_values
            .iter()
            .filter(|(s, _)| s.contains(&edge.u) && s.contains(&edge.v))
            .map(|(_, v)| v)
            .sum::<f64>();
        if cover < (1.0 - edge.w) - TOL_STRUCT {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcMethod {
    Binary,
    Randomized,
    LpRounding,
}

/// Per-run counters for the randomized algorithm.
#[derive(Clone, Debug)]
pub struct ExperimentStats {
    /// m demanded by the ⌈|E|/(2δ²)⌉ formula.
    pub m_full: usize,
    /// Experiments actually run.
    pub m_run: usize,
    /// True when the cap truncated the run; the high-probability guarantee
    /// then no longer applies and the run is merely a heuristic.
    pub cap_hit: bool,
    /// Mean of the per-experiment dual bounds. A statistic, not a feasible
    /// dual point for the original instance.
    pub mean_dual_bound: f64,
    /// Index of the winning experiment.
    pub selected_index: usize,
    /// k + 2|M| of the winning experiment under its 0/1 weights.
    pub selected_experiment_objective: f64,
    /// Weighted index of the winner under the original weights.
    pub selected_true_wi: f64,
}

#[derive(Clone, Debug)]
pub struct LpStats {
    pub lp_solves: usize,
    pub cuts: usize,
}

#[derive(Clone, Debug, Default)]
pub struct FcDiagnostics {
    pub lp: Option<LpStats>,
    pub experiments: Option<ExperimentStats>,
    /// Final cut pool and fractional solution, for `--dump-cuts`.
    pub lp_outcome: Option<CuttingPlaneOutcome>,
    pub elapsed: Duration,
}

/// Output of an approximation run: the forest, its cost, and (when the
/// method provides one) a certified lower bound with `bound ≤ wi`.
#[derive(Clone, Debug)]
pub struct FcResult {
    pub forest: Forest,
    pub weighted_index: f64,
    pub lower_bound: Option<f64>,
    pub method: FcMethod,
    pub diagnostics: FcDiagnostics,
}

/// 2-approximation for instances whose weights are all 0 or 1, together
/// with the dual certificate of its `k + |M|` lower bound.
pub fn forest_cover_binary(graph: &Graph) -> Result<(FcResult, DualCertificate)> {
    let start = Instant::now();
    require_fc(graph)?;
    for (id, e) in graph.edges().iter().enumerate() {
        if e.w != 0.0 && e.w != 1.0 {
            return Err(Error::NonBinaryWeight {
                edge: id,
                weight: e.w,
            });
        }
    }
    let n = graph.vertex_count();
    let mut touches_zero = vec![false; n];
    for e in graph.edges() {
        if e.w == 0.0 {
            touches_zero[e.u] = true;
            touches_zero[e.v] = true;
        }
    }
    let components = connected_components(
        graph,
        |v| touches_zero[v],
        |e| graph.weight(e) == 0.0,
    );
    let mut trees = Vec::new();
    let mut cert = DualCertificate::default();
    for (vertices, _) in &components {
        trees.push(kruskal_mst(graph, vertices, |e| graph.weight(e) == 0.0)?);
        cert.set_values.push((vertices.clone(), 1.0));
    }
    let k = components.len();

    let outside: BTreeSet<usize> = (0..n).filter(|&v| !touches_zero[v]).collect();
    let matching = maximum_matching(graph, &outside, |e| graph.weight(e) == 1.0);
    for &e in &matching.edges {
        let edge = graph.edge(e);
        trees.push(Tree::from_edges(graph, [e]));
        cert.set_values
            .push((BTreeSet::from([edge.u, edge.v]), 1.0));
    }

    let forest = Forest::new(trees);
    let wi = (k + 2 * matching.size()) as f64;
    debug_assert_eq!(weighted_index(graph, &forest)?, wi);
    debug_assert!(is_forest_cover(graph, &forest)?);
    let bound = cert.bound();
    Ok((
        FcResult {
            forest,
            weighted_index: wi,
            lower_bound: Some(bound),
            method: FcMethod::Binary,
            diagnostics: FcDiagnostics {
                elapsed: start.elapsed(),
                ..Default::default()
            },
        },
        cert,
    ))
}

/// Default cap on the number of experiments run by [`randomized_fc`].
pub const DEFAULT_EXPERIMENT_CAP: usize = 10_000;

/// The probabilistic (2+ε)-approximation.
///
/// `δ = ε²` and `m = ⌈|E|/(2δ²)⌉` experiments are drawn (capped at
/// `max_experiments`, default [`DEFAULT_EXPERIMENT_CAP`]); each experiment
/// replaces edge `e` by weight `1 − W_e` with `W_e ~ Bernoulli(1 − w_e)`,
/// runs the binary algorithm, and the forest with the smallest weighted
/// index under the *original* weights wins (ties to the earliest
/// experiment). Indicators derive from `(seed, experiment, edge)` alone, so
/// reruns with one seed are bit-identical and experiment order is
/// irrelevant.
pub fn randomized_fc(
    graph: &Graph,
    epsilon: f64,
    seed: u64,
    max_experiments: Option<usize>,
) -> Result<FcResult> {
    let start = Instant::now();
    require_fc(graph)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon });
    }
    let delta = epsilon * epsilon;
    let m_edges = graph.edge_count();
    if m_edges == 0 {
        return Ok(FcResult {
            forest: Forest::empty(),
            weighted_index: 0.0,
            lower_bound: None,
            method: FcMethod::Randomized,
            diagnostics: FcDiagnostics {
                experiments: Some(ExperimentStats {
                    m_full: 0,
                    m_run: 0,
                    cap_hit: false,
                    mean_dual_bound: 0.0,
                    selected_index: 0,
                    selected_experiment_objective: 0.0,
                    selected_true_wi: 0.0,
                }),
                elapsed: start.elapsed(),
                ..Default::default()
            },
        });
    }
    let m_full = (m_edges as f64 / (2.0 * delta * delta)).ceil() as usize;
    let cap = max_experiments.unwrap_or(DEFAULT_EXPERIMENT_CAP);
    let m_run = m_full.min(cap);

    let mut best: Option<(f64, usize, f64, Forest)> = None;
    let mut bound_sum = 0.0;
    let mut weights = vec![0.0; m_edges];
    for i in 0..m_run {
        for (e, edge) in graph.edges().iter().enumerate() {
            let hit = unit_draw(seed, i as u64, e as u64) < 1.0 - edge.w;
            weights[e] = if hit { 0.0 } else { 1.0 };
        }
        let binary = graph.reweighted(WeightMode::FcNormalized, &weights)?;
        let (result, _) = forest_cover_binary(&binary)?;
        bound_sum += result.lower_bound.unwrap_or(0.0);
        let true_wi = weighted_index(graph, &result.forest)?;
        if best.as_ref().is_none_or(|(b, _, _, _)| true_wi < *b) {
            best = Some((true_wi, i, result.weighted_index, result.forest));
        }
    }
    let (wi, index, experiment_objective, forest) = best.expect("at least one experiment ran");
    Ok(FcResult {
        forest,
        weighted_index: wi,
        lower_bound: None,
        method: FcMethod::Randomized,
        diagnostics: FcDiagnostics {
            experiments: Some(ExperimentStats {
                m_full,
                m_run,
                cap_hit: m_run < m_full,
                mean_dual_bound: bound_sum / m_run as f64,
                selected_index: index,
                selected_experiment_objective: experiment_objective,
                selected_true_wi: wi,
            }),
            elapsed: start.elapsed(),
            ..Default::default()
        },
    })
}

/// Counter-based uniform draw in [0, 1): a splitmix64 chain over
/// (seed, experiment, edge), independent of evaluation order.
pub(crate) fn unit_draw(seed: u64, experiment: u64, edge: u64) -> f64 {
    use crate::generate::splitmix64;
    let h = splitmix64(splitmix64(splitmix64(seed) ^ experiment) ^ edge);
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Clone, Copy, Debug)]
pub struct RoundingOptions {
    /// Re-scan for new low-value pendants until none remain, instead of the
    /// single pass over the initial MST's pendants that the approximation
    /// proof covers. Off by default.
    pub fixed_point_pruning: bool,
    /// Violation tolerance handed to the separation oracle.
    pub separation_tol: f64,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        RoundingOptions {
            fixed_point_pruning: false,
            separation_tol: crate::TOL_LP_FEAS,
        }
    }
}

/// Deterministic 2-approximation by LP rounding. `lower_bound` is the LP
/// objective, and the returned forest costs at most twice it.
pub fn lp_rounding_fc(graph: &Graph) -> Result<FcResult> {
    lp_rounding_fc_with(graph, &RoundingOptions::default())
}

pub fn lp_rounding_fc_with(graph: &Graph, options: &RoundingOptions) -> Result<FcResult> {
    let start = Instant::now();
    require_fc(graph)?;
    let outcome = cutting_plane_solve_with_tol(graph, options.separation_tol)?;
    let sol = &outcome.solution;
    // The support subgraph G*: strictly positive x and y, with tolerance.
    let mut in_support: Vec<bool> = sol.x.iter().map(|&x| x > TOL_STRUCT).collect();
    let edge_support: Vec<bool> = (0..graph.edge_count())
        .map(|e| sol.y[e] > TOL_STRUCT)
        .collect();
    for (e, edge) in graph.edges().iter().enumerate() {
        if edge_support[e] {
            in_support[edge.u] = true;
            in_support[edge.v] = true;
        }
    }

    let half = 0.5 - TOL_STRUCT;
    let mut trees = Vec::new();
    for (vertices, edges) in
        connected_components(graph, |v| in_support[v], |e| edge_support[e])
    {
        if edges.is_empty() {
            // Isolated support vertex: kept as a singleton iff x* ≥ 0.5.
            let v = *vertices.iter().next().unwrap();
            if sol.x[v] >= half {
                trees.push(Tree::singleton(v));
            }
        } else {
            let mst = kruskal_mst(graph, &vertices, |e| edge_support[e])?;
            trees.push(prune_pendants(
                graph,
                mst,
                &sol.x,
                half,
                options.fixed_point_pruning,
            ));
        }
    }
    let forest = Forest::new(trees);
    let wi = weighted_index(graph, &forest)?;
    debug_assert!(is_forest_cover(graph, &forest)?);
    Ok(FcResult {
        forest,
        weighted_index: wi,
        lower_bound: Some(sol.objective),
        method: FcMethod::LpRounding,
        diagnostics: FcDiagnostics {
            lp: Some(LpStats {
                lp_solves: outcome.lp_solves,
                cuts: outcome.cuts.len(),
            }),
            lp_outcome: Some(outcome),
            elapsed: start.elapsed(),
            ..Default::default()
        },
    })
}

/// Delete pendant MST vertices with fractional value below one half, along
/// with their single incident edge. All pendants of the current tree are
/// collected first and removed together; one pass unless `fixed_point`.
fn prune_pendants(graph: &Graph, mst: Tree, x: &[f64], half: f64, fixed_point: bool) -> Tree {
    let mut vertices = mst.vertices;
    let mut edges = mst.edges;
    loop {
        if vertices.len() <= 1 {
            break;
        }
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &e in &edges {
            *degree.entry(graph.edge(e).u).or_insert(0) += 1;
            *degree.entry(graph.edge(e).v).or_insert(0) += 1;
        }
        let doomed: BTreeSet<usize> = vertices
            .iter()
            .copied()
            .filter(|&v| degree.get(&v).copied().unwrap_or(0) == 1 && x[v] < half)
            .collect();
        if doomed.is_empty() {
            break;
        }
        edges.retain(|&e| {
            let edge = graph.edge(e);
            !doomed.contains(&edge.u) && !doomed.contains(&edge.v)
        });
        vertices.retain(|v| !doomed.contains(v));
        if !fixed_point {
            break;
        }
    }
    Tree { vertices, edges }
}

fn require_fc(graph: &Graph) -> Result<()> {
    if graph.mode() != WeightMode::FcNormalized {
        return Err(Error::ModeMismatch {
            expected: WeightMode::FcNormalized,
            found: graph.mode(),
        });
    }
    Ok(())
}
