//! `fcover` — command-line driver for the forest cover solver suite.
//!
//! Subcommands: `exact`, `binary`, `random`, `round`, `bfc`, `gen`,
//! `verify`, `bench`. Solver commands read a DIMACS-like instance file,
//! print a JSON run report to stdout (or `--out`) and a one-line summary to
//! stderr. Exit codes: 0 success, 2 usage, 3 instance error, 4 solver
//! failure or budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use forest_cover::bfc::{bfc_6approx, BfcSolution};
use forest_cover::exact::{exact_bfc, exact_fc};
use forest_cover::fc::{
    forest_cover_binary, lp_rounding_fc_with, randomized_fc, FcResult, RoundingOptions,
};
use forest_cover::generate::{derive_seed, generate, GenParams, GeneratorKind};
use forest_cover::graph::{is_forest_cover, weighted_index, Forest, Graph, Tree, WeightMode};
use forest_cover::instance::{emit_instance, emit_solution, parse_instance, parse_solution};
use forest_cover::lp::dump_cut_report;
use forest_cover::report::{BenchSummary, InstanceInfo, RunReport};
use forest_cover::Error;

#[derive(Parser)]
#[command(
    name = "fcover",
    version,
    about = "Solvers for the forest cover and bounded forest cover problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact solver by enumeration (small instances only)
    Exact(ExactArgs),
    /// 2-approximation for 0/1 weights, with a dual lower-bound certificate
    Binary(SolveArgs),
    /// Probabilistic (2+epsilon)-approximation
    Random(RandomArgs),
    /// Deterministic 2-approximation by LP rounding
    Round(RoundArgs),
    /// 6-approximation for bounded forest cover
    Bfc(BfcArgs),
    /// Generate an instance file
    Gen(GenArgs),
    /// Re-check a stored solution file against its instance
    Verify(VerifyArgs),
    /// Sweep generated instances and report approximation ratios
    Bench(BenchArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Instance file
    #[arg(long)]
    input: PathBuf,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the solution as a text file (`s`/`t` lines)
    #[arg(long)]
    solution_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Tree weight budget; required for bfc instances
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct RandomArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Approximation slack: the guarantee is (2 + epsilon) with high probability
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Seed echoed in the report; reruns with the same seed are identical
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on the number of experiments (default 10000); capped runs are heuristic
    #[arg(long)]
    max_experiments: Option<usize>,
}

#[derive(Args)]
struct RoundArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Violation tolerance for the separation oracle
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Prune low-value pendants to a fixed point instead of one pass
    #[arg(long)]
    fixed_point_pruning: bool,
    /// Print the cut pool and final fractional solution to stderr
    #[arg(long)]
    dump_cuts: bool,
}

#[derive(Args)]
struct BfcArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Tree weight budget
    #[arg(long)]
    lambda: f64,
}

#[derive(Args)]
struct GenArgs {
    /// gnp-uniform | gnp-binary | from-vc | path | star | cycle
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Edge probability for the gnp kinds
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Probability of weight 1 for gnp-binary
    #[arg(long, default_value_t = 0.5)]
    bias: f64,
    /// Edge weight for path/star/cycle fixtures
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    /// Emit a BFC-raw instance with weights in (0, MAX] instead of an FC one
    #[arg(long)]
    max_weight: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the instance here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file
    #[arg(long)]
    input: PathBuf,
    /// Solution file to check
    #[arg(long)]
    solution: PathBuf,
    /// Tree weight budget; required when the instance is bfc
    #[arg(long)]
    lambda: Option<f64>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Generator kind for the sweep
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    bias: f64,
    /// binary | round | random | bfc
    #[arg(long, default_value = "binary")]
    method: String,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Tree weight budget (bfc method)
    #[arg(long)]
    lambda: Option<f64>,
    /// Max raw edge weight for generated bfc instances (default: lambda)
    #[arg(long)]
    max_weight: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure classed by exit code.
enum Failure {
    Usage(String),
    Instance(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Instance(_) => 3,
            Failure::Solver(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Instance(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let msg = err.to_string();
        match err {
            Error::SelfLoop { .. }
            | Error::ParallelEdge { .. }
            | Error::VertexOutOfRange { .. }
            | Error::WeightOutOfRange { .. }
            | Error::ModeMismatch { .. }
            | Error::InvalidForest(_)
            | Error::NonBinaryWeight { .. }
            | Error::EpsilonOutOfRange { .. }
            | Error::LambdaExceeded { .. }
            | Error::NonPositiveLambda { .. }
            | Error::BetaExceeded { .. }
            | Error::Parse { .. }
            | Error::BadParams(_) => Failure::Instance(msg),
            Error::Disconnected(_)
            | Error::OverBudget { .. }
            | Error::Infeasible(_)
            | Error::Unbounded
            | Error::SimplexStalled { .. }
            | Error::IterationCap { .. } => Failure::Solver(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exact(args) => cmd_exact(args),
        Command::Binary(args) => cmd_binary(args),
        Command::Random(args) => cmd_random(args),
        Command::Round(args) => cmd_round(args),
        Command::Bfc(args) => cmd_bfc(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("fcover: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn read_instance(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Instance(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn instance_info(graph: &Graph, source: &Path) -> InstanceInfo {
    InstanceInfo {
        kind: match graph.mode() {
            WeightMode::FcNormalized => "fc".into(),
            WeightMode::BfcRaw => "bfc".into(),
        },
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        source: Some(source.display().to_string()),
    }
}

fn emit_report(report: &RunReport, out: &Option<PathBuf>) -> Result<(), Failure> {
    let json = report.to_json()?;
    eprintln!("{}", report.text_summary());
    match out {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| Failure::Instance(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn write_solution(
    path: &Option<PathBuf>,
    mode: WeightMode,
    trees: &[Tree],
) -> Result<(), Failure> {
    if let Some(path) = path {
        let text = emit_solution(mode, trees);
        std::fs::write(path, text)
            .map_err(|e| Failure::Instance(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn ms(duration: std::time::Duration) -> f64 {
    duration.as_secs_f64() * 1e3
}

fn fc_report(method: &str, graph: &Graph, source: &Path, result: &FcResult) -> RunReport {
    let mut report = RunReport::new(method, instance_info(graph, source), result.weighted_index);
    if let Some(bound) = result.lower_bound {
        report = report.with_bound(bound);
    }
    report
        .timings_ms
        .insert("total".into(), ms(result.diagnostics.elapsed));
    if let Some(lp) = &result.diagnostics.lp {
        report.diagnostics.lp_solves = Some(lp.lp_solves);
        report.diagnostics.cuts = Some(lp.cuts);
    }
    if let Some(stats) = &result.diagnostics.experiments {
        report.diagnostics.experiments_requested = Some(stats.m_full);
        report.diagnostics.experiments_run = Some(stats.m_run);
        report.diagnostics.cap_hit = Some(stats.cap_hit);
        report.diagnostics.mean_dual_bound = Some(stats.mean_dual_bound);
        report.diagnostics.selected_experiment = Some(stats.selected_index);
        report.diagnostics.selected_experiment_objective =
            Some(stats.selected_experiment_objective);
    }
    report.diagnostics.trees = Some(result.forest.trees.len());
    report
}

fn cmd_exact(args: ExactArgs) -> Result<(), Failure> {
    let graph = read_instance(&args.io.input)?;
    let start = Instant::now();
    match graph.mode() {
        WeightMode::FcNormalized => {
            if args.lambda.is_some() {
                return Err(Failure::Usage(
                    "--lambda only applies to bfc instances".into(),
                ));
            }
            let (forest, value) = exact_fc(&graph)?;
            let mut report = RunReport::new("exact", instance_info(&graph, &args.io.input), value);
            report.timings_ms.insert("total".into(), ms(start.elapsed()));
            report.diagnostics.trees = Some(forest.trees.len());
            write_solution(&args.io.solution_out, graph.mode(), &forest.trees)?;
            emit_report(&report, &args.io.out)
        }
        WeightMode::BfcRaw => {
            let Some(lambda) = args.lambda else {
                return Err(Failure::Usage(
                    "bfc instances need --lambda for the exact solver".into(),
                ));
            };
            let (solution, count) = exact_bfc(&graph, lambda)?;
            let mut report = RunReport::new(
                "exact",
                instance_info(&graph, &args.io.input),
                count as f64,
            );
            report.lambda = Some(lambda);
            report.timings_ms.insert("total".into(), ms(start.elapsed()));
            report.diagnostics.trees = Some(solution.count());
            write_solution(&args.io.solution_out, graph.mode(), &solution.trees)?;
            emit_report(&report, &args.io.out)
        }
    }
}

fn cmd_binary(args: SolveArgs) -> Result<(), Failure> {
    let graph = read_instance(&args.io.input)?;
    let (result, _certificate) = forest_cover_binary(&graph)?;
    let report = fc_report("binary", &graph, &args.io.input, &result);
    write_solution(&args.io.solution_out, graph.mode(), &result.forest.trees)?;
    emit_report(&report, &args.io.out)
}

fn cmd_random(args: RandomArgs) -> Result<(), Failure> {
    let graph = read_instance(&args.io.input)?;
    let result = randomized_fc(&graph, args.epsilon, args.seed, args.max_experiments)?;
    let mut report = fc_report("random", &graph, &args.io.input, &result);
    report.seed = Some(args.seed);
    report.epsilon = Some(args.epsilon);
    write_solution(&args.io.solution_out, graph.mode(), &result.forest.trees)?;
    emit_report(&report, &args.io.out)
}

fn cmd_round(args: RoundArgs) -> Result<(), Failure> {
    let graph = read_instance(&args.io.input)?;
    let options = RoundingOptions {
        fixed_point_pruning: args.fixed_point_pruning,
        separation_tol: args.tol,
    };
    let result = lp_rounding_fc_with(&graph, &options)?;
    if args.dump_cuts {
        if let Some(outcome) = &result.diagnostics.lp_outcome {
            eprint!("{}", dump_cut_report(&graph, outcome));
        }
    }
    let report = fc_report("round", &graph, &args.io.input, &result);
    write_solution(&args.io.solution_out, graph.mode(), &result.forest.trees)?;
    emit_report(&report, &args.io.out)
}

fn cmd_bfc(args: BfcArgs) -> Result<(), Failure> {
    let graph = read_instance(&args.io.input)?;
    let start = Instant::now();
    let outcome = bfc_6approx(&graph, args.lambda)?;
    let mut report = RunReport::new(
        "bfc",
        instance_info(&graph, &args.io.input),
        outcome.solution.count() as f64,
    );
    report.lambda = Some(args.lambda);
    report.timings_ms.insert("total".into(), ms(start.elapsed()));
    report.diagnostics.trees = Some(outcome.solution.count());
    report.diagnostics.wi_before_removal = Some(outcome.diagnostics.wi_before_removal);
    report.diagnostics.wi_after_removal = Some(outcome.diagnostics.wi_after_removal);
    if let Some(lp) = &outcome.diagnostics.lp {
        report.diagnostics.lp_solves = Some(lp.lp_solves);
        report.diagnostics.cuts = Some(lp.cuts);
    }
    write_solution(
        &args.io.solution_out,
        graph.mode(),
        &outcome.solution.trees,
    )?;
    emit_report(&report, &args.io.out)
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let kind: GeneratorKind = args.kind.parse()?;
    let params = GenParams {
        n: args.n,
        edge_probability: args.p,
        one_bias: args.bias,
        fixture_weight: args.weight,
        bfc_max_weight: args.max_weight,
    };
    let graph = generate(kind, &params, args.seed)?;
    let text = emit_instance(&graph);
    eprintln!(
        "generated {} ({} vertices, {} edges, seed {})",
        kind.name(),
        graph.vertex_count(),
        graph.edge_count(),
        args.seed
    );
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Instance(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let graph = read_instance(&args.input)?;
    let text = std::fs::read_to_string(&args.solution)
        .map_err(|e| Failure::Instance(format!("cannot read {}: {e}", args.solution.display())))?;
    let (kind, trees) = parse_solution(&text)?;
    if kind != graph.mode() {
        return Err(Failure::Instance(format!(
            "solution kind {kind:?} does not match instance kind {:?}",
            graph.mode()
        )));
    }
    let mut report = RunReport::new("verify", instance_info(&graph, &args.input), 0.0);
    report.diagnostics.trees = Some(trees.len());
    let verdict: Result<f64, String> = match graph.mode() {
        WeightMode::FcNormalized => {
            if args.lambda.is_some() {
                return Err(Failure::Usage(
                    "--lambda only applies to bfc instances".into(),
                ));
            }
            let forest = Forest::new(trees);
            match weighted_index(&graph, &forest) {
                Err(e) => Err(e.to_string()),
                Ok(wi) => match is_forest_cover(&graph, &forest) {
                    Ok(true) => Ok(wi),
                    Ok(false) => Err("forest vertices do not cover every edge".into()),
                    Err(e) => Err(e.to_string()),
                },
            }
        }
        WeightMode::BfcRaw => {
            let Some(lambda) = args.lambda else {
                return Err(Failure::Usage(
                    "bfc instances need --lambda for verification".into(),
                ));
            };
            report.lambda = Some(lambda);
            let solution = BfcSolution { trees, lambda };
            match solution.validate(&graph) {
                Ok(()) => Ok(solution.count() as f64),
                Err(e) => Err(e.to_string()),
            }
        }
    };
    match verdict {
        Ok(objective) => {
            report.objective = objective;
            report.diagnostics.valid = Some(true);
            emit_report(&report, &args.out)
        }
        Err(reason) => {
            report.diagnostics.valid = Some(false);
            emit_report(&report, &args.out)?;
            Err(Failure::Instance(format!("solution invalid: {reason}")))
        }
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let kind: GeneratorKind = args.kind.parse()?;
    if args.trials == 0 {
        return Err(Failure::Usage("bench needs at least one trial".into()));
    }
    let is_bfc = args.method == "bfc";
    let lambda = match (is_bfc, args.lambda) {
        (true, Some(l)) => l,
        (true, None) => {
            return Err(Failure::Usage("method bfc needs --lambda".into()));
        }
        (false, _) => 0.0,
    };
    let params = GenParams {
        n: args.n,
        edge_probability: args.p,
        one_bias: args.bias,
        fixture_weight: 1.0,
        bfc_max_weight: if is_bfc {
            Some(args.max_weight.unwrap_or(lambda))
        } else {
            None
        },
    };
    let start = Instant::now();
    let mut max_ratio: f64 = 0.0;
    let mut ratio_sum = 0.0;
    eprintln!("trial seed vertices edges value reference ratio");
    for trial in 0..args.trials {
        let seed = derive_seed(args.seed, trial as u64);
        let graph = generate(kind, &params, seed)?;
        let (value, reference, ref_name) = run_bench_trial(&args.method, &graph, &args, lambda, seed)?;
        let ratio = if reference > 0.0 {
            value / reference
        } else if value <= 1e-9 {
            1.0
        } else {
            return Err(Failure::Solver(format!(
                "trial {trial}: value {value} against zero reference"
            )));
        };
        max_ratio = max_ratio.max(ratio);
        ratio_sum += ratio;
        eprintln!(
            "{trial} {seed} {} {} {value:.6} {ref_name}={reference:.6} {ratio:.4}",
            graph.vertex_count(),
            graph.edge_count()
        );
    }
    let mut report = RunReport::new(
        "bench",
        InstanceInfo {
            kind: if is_bfc { "bfc".into() } else { "fc".into() },
            vertices: args.n,
            edges: 0,
            source: Some(format!(
                "{}(n={}, p={}, bias={}, seed={})",
                kind.name(),
                args.n,
                args.p,
                args.bias,
                args.seed
            )),
        },
        max_ratio,
    );
    report.seed = Some(args.seed);
    if is_bfc {
        report.lambda = Some(lambda);
    }
    if args.method == "random" {
        report.epsilon = Some(args.epsilon);
    }
    report.timings_ms.insert("total".into(), ms(start.elapsed()));
    report.bench = Some(BenchSummary {
        trials: args.trials,
        max_ratio,
        mean_ratio: ratio_sum / args.trials as f64,
        reference: bench_reference_name(&args.method).into(),
    });
    emit_report(&report, &args.out)
}

fn bench_reference_name(method: &str) -> &'static str {
    match method {
        "bfc" => "exact-bfc",
        _ => "exact-fc",
    }
}

fn run_bench_trial(
    method: &str,
    graph: &Graph,
    args: &BenchArgs,
    lambda: f64,
    seed: u64,
) -> Result<(f64, f64, &'static str), Failure> {
    match method {
        "binary" => {
            let (result, _) = forest_cover_binary(graph)?;
            let (_, opt) = exact_fc(graph)?;
            Ok((result.weighted_index, opt, "opt"))
        }
        "round" => {
            let result = lp_rounding_fc_with(graph, &RoundingOptions::default())?;
            let (_, opt) = exact_fc(graph)?;
            Ok((result.weighted_index, opt, "opt"))
        }
        "random" => {
            let result = randomized_fc(graph, args.epsilon, seed, None)?;
            let (_, opt) = exact_fc(graph)?;
            Ok((result.weighted_index, opt, "opt"))
        }
        "bfc" => {
            let outcome = bfc_6approx(graph, lambda)?;
            let (_, opt) = exact_bfc(graph, lambda)?;
            Ok((outcome.solution.count() as f64, opt as f64, "opt"))
        }
        other => Err(Failure::Usage(format!(
            "unknown bench method {other:?} (binary | round | random | bfc)"
        ))),
    }
}
