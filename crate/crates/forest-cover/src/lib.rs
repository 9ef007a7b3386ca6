//! Solvers for the forest cover and bounded forest cover problems.
//!
//! A *forest cover* of an edge-weighted graph is a forest whose vertices form
//! a vertex cover. Its cost is the weighted index: the sum of the forest's
//! edge weights plus the number of trees. This crate bundles four solvers for
//! the minimization problem plus a pipeline for the bounded variant:
//!
//! * [`exact::exact_fc`] — exponential-time enumeration, the ground truth at
//!   desk scale;
//! * [`fc::forest_cover_binary`] — 2-approximation for 0/1 weights that also
//!   emits a feasible dual certificate of its lower bound;
//! * [`fc::randomized_fc`] — (2+ε)-approximation for weights in \[0,1\] built
//!   from repeated randomized rounding of the weights to 0/1;
//! * [`fc::lp_rounding_fc`] — deterministic 2-approximation that rounds the
//!   optimal solution of the LP relaxation, solved by a cutting-plane loop
//!   with an exact min-cut separation oracle ([`lp`]);
//! * [`bfc::bfc_6approx`] — 6-approximation for the bounded forest cover
//!   problem (fewest trees of bounded weight whose vertices form a cover).
//!
//! Instance files, generators and machine-readable run reports live in
//! [`instance`], [`generate`] and [`report`]; the `fcover` binary in the
//! companion CLI crate wraps everything.

pub mod bfc;
pub mod book;
pub mod exact;
pub mod fc;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod matching;
pub mod report;

pub use graph::{Forest, Graph, Tree, WeightMode};

/// Absolute tolerance for structural float comparisons (weighted index
/// identities, dual feasibility).
pub const TOL_STRUCT: f64 = 1e-9;

/// Absolute tolerance for LP constraint feasibility and cut violation.
pub const TOL_LP_FEAS: f64 = 1e-7;

/// Absolute tolerance for LP objective claims.
pub const TOL_LP_OBJ: f64 = 1e-6;

/// Errors produced by graph construction, solvers and file parsing.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("parallel edge between {u} and {v}")]
    ParallelEdge { u: usize, v: usize },
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} has weight {weight} outside the range allowed by {mode:?}")]
    WeightOutOfRange {
        edge: usize,
        weight: f64,
        mode: graph::WeightMode,
    },
    #[error("expected a graph in {expected:?} mode, got {found:?}")]
    ModeMismatch {
        expected: graph::WeightMode,
        found: graph::WeightMode,
    },
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("vertex set is not connected by the selected edges ({0})")]
    Disconnected(String),
    #[error("edge {edge} has non-binary weight {weight}")]
    NonBinaryWeight { edge: usize, weight: f64 },
    #[error("epsilon {epsilon} outside (0, 1]")]
    EpsilonOutOfRange { epsilon: f64 },
    #[error("edge {edge} has weight {weight} > lambda = {lambda}")]
    LambdaExceeded {
        edge: usize,
        weight: f64,
        lambda: f64,
    },
    #[error("lambda {lambda} must be positive")]
    NonPositiveLambda { lambda: f64 },
    #[error("edge {edge} has weight {weight} > beta = {beta}")]
    BetaExceeded { edge: usize, weight: f64, beta: f64 },
    #[error("instance over budget: {what} = {got}, limit {limit}")]
    OverBudget {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("linear program infeasible: {0}")]
    Infeasible(String),
    #[error("linear program unbounded")]
    Unbounded,
    #[error("simplex stalled after {iterations} iterations")]
    SimplexStalled { iterations: usize },
    #[error(
        "cutting-plane iteration cap {cap} exceeded ({cuts} cuts in pool, last objective {objective})"
    )]
    IterationCap {
        cap: usize,
        cuts: usize,
        objective: f64,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
