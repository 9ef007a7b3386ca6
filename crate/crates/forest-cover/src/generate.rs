//! Instance generators, all deterministic per seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::{Error, Result};

/// What kind of instance to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// G(n, p) with weights uniform in [0, 1).
    GnpUniform,
    /// G(n, p) with weight 1 with probability `one_bias`, else 0.
    GnpBinary,
    /// G(n, p) run through the vertex cover reduction: every weight is 1.
    FromVc,
    Path,
    Star,
    Cycle,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gnp-uniform" => Ok(GeneratorKind::GnpUniform),
            "gnp-binary" => Ok(GeneratorKind::GnpBinary),
            "from-vc" => Ok(GeneratorKind::FromVc),
            "path" => Ok(GeneratorKind::Path),
            "star" => Ok(GeneratorKind::Star),
            "cycle" => Ok(GeneratorKind::Cycle),
            other => Err(Error::BadParams(format!("unknown generator kind {other:?}"))),
        }
    }
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::GnpUniform => "gnp-uniform",
            GeneratorKind::GnpBinary => "gnp-binary",
            GeneratorKind::FromVc => "from-vc",
            GeneratorKind::Path => "path",
            GeneratorKind::Star => "star",
            GeneratorKind::Cycle => "cycle",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub n: usize,
    /// Edge probability for the G(n, p) kinds.
    pub edge_probability: f64,
    /// Probability of weight 1 for `gnp-binary`.
    pub one_bias: f64,
    /// Edge weight for the path/star/cycle fixtures.
    pub fixture_weight: f64,
    /// When set, emit a BFC-raw instance instead: random weights become
    /// uniform in (0, max], fixtures use `fixture_weight` unscaled.
    pub bfc_max_weight: Option<f64>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 8,
            edge_probability: 0.5,
            one_bias: 0.5,
            fixture_weight: 1.0,
            bfc_max_weight: None,
        }
    }
}

/// splitmix64's output mixing step; the workhorse behind derived seeds and
/// the randomized algorithm's counter-based indicator stream.
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable per-trial seed derivation, so batched runs are reproducible and
/// order-independent.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base) ^ index)
}

/// The approximation-preserving reduction from vertex cover: same graph,
/// every weight 1.
pub fn vc_reduction(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    let weighted: Vec<(usize, usize, f64)> =
        edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    Graph::fc(n, &weighted)
}

pub fn generate(kind: GeneratorKind, params: &GenParams, seed: u64) -> Result<Graph> {
    validate(kind, params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n;
    match kind {
        GeneratorKind::GnpUniform => {
            let topo = gnp_topology(n, params.edge_probability, &mut rng);
            match params.bfc_max_weight {
                None => {
                    let edges: Vec<(usize, usize, f64)> = topo
                        .into_iter()
                        .map(|(u, v)| (u, v, rng.random::<f64>()))
                        .collect();
                    Graph::fc(n, &edges)
                }
                Some(max) => {
                    let edges: Vec<(usize, usize, f64)> = topo
                        .into_iter()
                        .map(|(u, v)| (u, v, (1.0 - rng.random::<f64>()) * max))
                        .collect();
                    Graph::bfc(n, &edges)
                }
            }
        }
        GeneratorKind::GnpBinary => {
            let topo = gnp_topology(n, params.edge_probability, &mut rng);
            let edges: Vec<(usize, usize, f64)> = topo
                .into_iter()
                .map(|(u, v)| {
                    let w = if rng.random_bool(params.one_bias) { 1.0 } else { 0.0 };
                    (u, v, w)
                })
                .collect();
            Graph::fc(n, &edges)
        }
        GeneratorKind::FromVc => {
            let topo = gnp_topology(n, params.edge_probability, &mut rng);
            vc_reduction(n, &topo)
        }
        GeneratorKind::Path => {
            let topo: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            fixture(n, &topo, params)
        }
        GeneratorKind::Star => {
            let topo: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
            fixture(n, &topo, params)
        }
        GeneratorKind::Cycle => {
            let mut topo: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            topo.push((n - 1, 0));
            fixture(n, &topo, params)
        }
    }
}

fn fixture(n: usize, topo: &[(usize, usize)], params: &GenParams) -> Result<Graph> {
    let edges: Vec<(usize, usize, f64)> = topo
        .iter()
        .map(|&(u, v)| (u, v, params.fixture_weight))
        .collect();
    match params.bfc_max_weight {
        None => Graph::fc(n, &edges),
        Some(_) => Graph::bfc(n, &edges),
    }
}

fn gnp_topology(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn validate(kind: GeneratorKind, params: &GenParams) -> Result<()> {
    let prob_ok = |p: f64| (0.0..=1.0).contains(&p);
    if !prob_ok(params.edge_probability) {
        return Err(Error::BadParams(format!(
            "edge probability {} outside [0, 1]",
            params.edge_probability
        )));
    }
    if !prob_ok(params.one_bias) {
        return Err(Error::BadParams(format!(
            "bias {} outside [0, 1]",
            params.one_bias
        )));
    }
    if !params.fixture_weight.is_finite() {
        return Err(Error::BadParams("fixture weight must be finite".into()));
    }
    if let Some(max) = params.bfc_max_weight {
        if !(max > 0.0 && max.is_finite()) {
            return Err(Error::BadParams(format!(
                "bfc max weight {max} must be positive"
            )));
        }
    }
    if kind == GeneratorKind::Cycle && params.n > 0 && params.n < 3 {
        return Err(Error::BadParams(
            "a cycle needs at least 3 vertices".into(),
        ));
    }
    Ok(())
}
