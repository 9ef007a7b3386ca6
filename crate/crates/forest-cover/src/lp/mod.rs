//! LP relaxation of the forest cover problem, solved by lazy constraint
//! generation.
//!
//! The relaxation has a variable `x_i` per vertex and `y_e` per edge,
//! objective `min Σ x_i − Σ y_e (1 − w_e)`, cover constraints
//! `x_u + x_v ≥ 1`, linkage `x_u ≥ y_e`, `x_v ≥ y_e`, and one subset
//! constraint `Σ_{i∈S} x_i − Σ_{e∈E(S)} y_e ≥ 1` for every vertex set `S`
//! inducing at least one edge. The subset family is exponential, so
//! [`cutting_plane_solve`] alternates a base-LP solve with the exact
//! [`separation_oracle`]: per edge `(s,t)` the most violated superset of
//! `{s,t}` is a maximum-weight-closure problem, answered by one min cut.

pub mod flow;
pub mod simplex;

use std::collections::BTreeSet;

use crate::graph::{Graph, WeightMode};
use crate::{Error, Result, TOL_LP_FEAS};
use flow::FlowNetwork;
use simplex::{DenseLp, Rel, Row};

/// A lazily added subset constraint, identified by its vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCut {
    pub vertices: BTreeSet<usize>,
}

impl SubsetCut {
    /// Left-hand side Σ_{i∈S} x_i − Σ_{(i,j)∈E(S)} y_ij at a given point.
    pub fn lhs(&self, graph: &Graph, x: &[f64], y: &[f64]) -> f64 {
        let xs: f64 = self.vertices.iter().map(|&v| x[v]).sum();
        let ys: f64 = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| self.vertices.contains(&e.u) && self.vertices.contains(&e.v))
            .map(|(id, _)| y[id])
            .sum();
        xs - ys
    }
}

/// A point of the relaxation: per-vertex and per-edge values plus the
/// objective they attain.
#[derive(Clone, Debug)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: f64,
}

impl FractionalSolution {
    /// Feasibility for the base constraints and the given cut pool, within
    /// `tol`.
    pub fn is_feasible(&self, graph: &Graph, cuts: &[SubsetCut], tol: f64) -> bool {
        for (id, e) in graph.edges().iter().enumerate() {
            if self.x[e.u] + self.x[e.v] < 1.0 - tol {
                return false;
            }
            if self.y[id] > self.x[e.u] + tol || self.y[id] > self.x[e.v] + tol {
                return false;
            }
        }
        let in_range =
            |v: f64| (-tol..=1.0 + tol).contains(&v);
        if !self.x.iter().all(|&v| in_range(v)) || !self.y.iter().all(|&v| in_range(v)) {
            return false;
        }
        cuts.iter().all(|c| c.lhs(graph, &self.x, &self.y) >= 1.0 - tol)
    }
}

/// Interface of the LP backend so an external solver can replace the
/// bundled simplex without touching the cutting-plane logic.
pub trait LpBackend {
    fn solve(&self, lp: &DenseLp) -> Result<simplex::LpSolution>;
}

/// The in-tree dense simplex.
#[derive(Clone, Copy, Debug, Default)]
pub struct BundledSimplex;

impl LpBackend for BundledSimplex {
    fn solve(&self, lp: &DenseLp) -> Result<simplex::LpSolution> {
        simplex::solve(lp)
    }
}

/// The base relaxation plus the current cut pool.
#[derive(Clone, Debug)]
pub struct LpModel<'g> {
    graph: &'g Graph,
    cuts: Vec<SubsetCut>,
}

impl<'g> LpModel<'g> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        if graph.mode() != WeightMode::FcNormalized {
            return Err(Error::ModeMismatch {
                expected: WeightMode::FcNormalized,
                found: graph.mode(),
            });
        }
        Ok(LpModel {
            graph,
            cuts: Vec::new(),
        })
    }

    pub fn cuts(&self) -> &[SubsetCut] {
        &self.cuts
    }

    /// Pool the cut. The pool is persistent: cuts are never removed.
    pub fn add_cut(&mut self, cut: SubsetCut) {
        debug_assert!(
            !self.cuts.contains(&cut),
            "separation returned an already pooled cut"
        );
        self.cuts.push(cut);
    }

    fn to_dense(&self) -> DenseLp {
        let g = self.graph;
        let n = g.vertex_count();
        let m = g.edge_count();
        let xv = |i: usize| i;
        let yv = |e: usize| n + e;
        let mut objective = vec![0.0; n + m];
        for c in objective.iter_mut().take(n) {
            *c = 1.0;
        }
        for (e, edge) in g.edges().iter().enumerate() {
            objective[yv(e)] = -(1.0 - edge.w);
        }
        let mut rows = Vec::with_capacity(3 * m + n + self.cuts.len());
        for (e, edge) in g.edges().iter().enumerate() {
            rows.push(Row {
                coeffs: vec![(xv(edge.u), 1.0), (xv(edge.v), 1.0)],
                rel: Rel::Ge,
                rhs: 1.0,
            });
            rows.push(Row {
                coeffs: vec![(xv(edge.u), 1.0), (yv(e), -1.0)],
                rel: Rel::Ge,
                rhs: 0.0,
            });
            rows.push(Row {
                coeffs: vec![(xv(edge.v), 1.0), (yv(e), -1.0)],
                rel: Rel::Ge,
                rhs: 0.0,
            });
        }
        // x_i <= 1; the linkage rows then bound every y_e by 1 as well.
        for i in 0..n {
            rows.push(Row {
                coeffs: vec![(xv(i), 1.0)],
                rel: Rel::Le,
                rhs: 1.0,
            });
        }
        for cut in &self.cuts {
            let mut coeffs: Vec<(usize, f64)> =
                cut.vertices.iter().map(|&i| (xv(i), 1.0)).collect();
            for (e, edge) in g.edges().iter().enumerate() {
                if cut.vertices.contains(&edge.u) && cut.vertices.contains(&edge.v) {
                    coeffs.push((yv(e), -1.0));
                }
            }
            rows.push(Row {
                coeffs,
                rel: Rel::Ge,
                rhs: 1.0,
            });
        }
        DenseLp {
            num_vars: n + m,
            objective,
            rows,
        }
    }

    pub fn solve_with(&self, backend: &impl LpBackend) -> Result<FractionalSolution> {
        let g = self.graph;
        let n = g.vertex_count();
        let m = g.edge_count();
        let sol = backend.solve(&self.to_dense())?;
        let x = sol.values[..n].to_vec();
        let y = sol.values[n..n + m].to_vec();
        let objective: f64 = x.iter().sum::<f64>()
            - y.iter()
                .zip(g.edges())
                .map(|(yv, e)| yv * (1.0 - e.w))
                .sum::<f64>();
        Ok(FractionalSolution { x, y, objective })
    }
}

/// Optimal basic solution of the model as it currently stands (base
/// constraints plus pooled cuts).
pub fn solve_base_lp(model: &LpModel) -> Result<FractionalSolution> {
    model.solve_with(&BundledSimplex)
}

/// A violated subset constraint together with its left-hand-side value.
#[derive(Clone, Debug)]
pub struct SeparationResult {
    pub cut: SubsetCut,
    pub value: f64,
}

/// Exact separation for the subset constraints.
///
/// For each edge `(s,t)` the subproblem min over `S ⊇ {s,t}` of
/// `Σ_{i∈S} x*_i − Σ_{(i,j)∈E(S)} y*_ij` is solved by one min cut on the
/// closure network: source → edge-node (capacity `y*`), edge-node → both
/// endpoints (∞), vertex → sink (capacity `x*`), and ∞ arcs from the source
/// pinning `s` and `t` to the source side. Zero-value edge-nodes are
/// omitted. The global minimizer over all edges is returned (ties to the
/// lower edge id) when its value is below `1 − tol`.
pub fn separation_oracle(
    graph: &Graph,
    sol: &FractionalSolution,
    tol: f64,
) -> Option<SeparationResult> {
    let mut best: Option<SeparationResult> = None;
    for e in 0..graph.edge_count() {
        let (set, _) = most_violated_superset(graph, sol, e);
        let value = exact_lhs(graph, sol, &set);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(SeparationResult {
                cut: SubsetCut { vertices: set },
                value,
            });
        }
    }
    best.filter(|b| b.value < 1.0 - tol)
}

/// Min cut for the per-edge subproblem; returns the chosen vertex set and
/// the flow value (the latter only used by tests).
fn most_violated_superset(
    graph: &Graph,
    sol: &FractionalSolution,
    pinned_edge: usize,
) -> (BTreeSet<usize>, f64) {
    let n = graph.vertex_count();
    let edge_nodes: Vec<usize> = (0..graph.edge_count())
        .filter(|&e| sol.y[e] > 0.0)
        .collect();
    // node ids: 0 = source, 1 = sink, 2..2+n vertices, then edge nodes
    let source = 0;
    let sink = 1;
    let vnode = |v: usize| 2 + v;
    let mut net = FlowNetwork::new(2 + n + edge_nodes.len());
    for (slot, &e) in edge_nodes.iter().enumerate() {
        let enode = 2 + n + slot;
        let edge = graph.edge(e);
        net.add_arc(source, enode, sol.y[e]);
        net.add_arc(enode, vnode(edge.u), f64::INFINITY);
        net.add_arc(enode, vnode(edge.v), f64::INFINITY);
    }
    for v in 0..n {
        net.add_arc(vnode(v), sink, sol.x[v].max(0.0));
    }
    let pinned = graph.edge(pinned_edge);
    net.add_arc(source, vnode(pinned.u), f64::INFINITY);
    net.add_arc(source, vnode(pinned.v), f64::INFINITY);
    let flow = net.max_flow(source, sink);
    let side = net.source_side(source);
    let set: BTreeSet<usize> = (0..n).filter(|&v| side[vnode(v)]).collect();
    (set, flow)
}

/// Σ_{i∈S} x_i − Σ_{(i,j)∈E(S)} y_ij recomputed combinatorially, so reported
/// violations do not inherit max-flow roundoff.
fn exact_lhs(graph: &Graph, sol: &FractionalSolution, set: &BTreeSet<usize>) -> f64 {
    SubsetCut {
        vertices: set.clone(),
    }
    .lhs(graph, &sol.x, &sol.y)
}

/// Result of the cutting-plane loop: the final solution, the cut pool that
/// pinned it down, and how many base-LP solves it took.
#[derive(Clone, Debug)]
pub struct CuttingPlaneOutcome {
    pub solution: FractionalSolution,
    pub cuts: Vec<SubsetCut>,
    pub lp_solves: usize,
}

/// Solve the full relaxation: iterate base-LP solves and exact separation
/// until no subset constraint is violated. Errors with diagnostics if the
/// iteration cap (10·n²) is exceeded.
pub fn cutting_plane_solve(graph: &Graph) -> Result<CuttingPlaneOutcome> {
    cutting_plane_solve_with_tol(graph, TOL_LP_FEAS)
}

/// [`cutting_plane_solve`] with a caller-chosen violation tolerance.
pub fn cutting_plane_solve_with_tol(graph: &Graph, tol: f64) -> Result<CuttingPlaneOutcome> {
    let mut model = LpModel::new(graph)?;
    let cap = 10 * graph.vertex_count() * graph.vertex_count() + 10;
    let mut lp_solves = 0;
    loop {
        let sol = solve_base_lp(&model)?;
        lp_solves += 1;
        match separation_oracle(graph, &sol, tol) {
            None => {
                return Ok(CuttingPlaneOutcome {
                    solution: sol,
                    cuts: model.cuts.clone(),
                    lp_solves,
                })
            }
            Some(found) => {
                if lp_solves > cap {
                    return Err(Error::IterationCap {
                        cap,
                        cuts: model.cuts.len(),
                        objective: sol.objective,
                    });
                }
                model.add_cut(found.cut);
            }
        }
    }
}

/// Text report of the cut pool and final solution, one line per cut.
pub fn dump_cut_report(graph: &Graph, outcome: &CuttingPlaneOutcome) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let sol = &outcome.solution;
    writeln!(
        out,
        "cut pool: {} cuts after {} LP solves (vertex ids 0-based)",
        outcome.cuts.len(),
        outcome.lp_solves
    )
    .unwrap();
    for cut in &outcome.cuts {
        let ids: Vec<String> = cut.vertices.iter().map(|v| v.to_string()).collect();
        writeln!(
            out,
            "S = {{{}}}: lhs = {:.9}",
            ids.join(", "),
            cut.lhs(graph, &sol.x, &sol.y)
        )
        .unwrap();
    }
    writeln!(out, "objective = {:.9}", sol.objective).unwrap();
    for (i, v) in sol.x.iter().enumerate() {
        writeln!(out, "x[{i}] = {v:.9}").unwrap();
    }
    for (e, v) in sol.y.iter().enumerate() {
        let edge = graph.edge(e);
        writeln!(out, "y[{e}] = {v:.9}  (edge {} - {})", edge.u, edge.v).unwrap();
    }
    out
}
