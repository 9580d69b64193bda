use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use arbmatch::estimators::{
    alg1_estimate, alg2_estimate, alg4_estimate_e_alpha, dynamic_estimate,
    estimate_matching_logspace, Alg1Params, Estimate,
};
use arbmatch::graph::{characterize, greedy_maximal_matching, Graph};
use arbmatch::harness::{check_lemmas, run_experiment_to, summarize, ExperimentConfig};
use arbmatch::stream::{
    generate_dynamic_stream, generate_random_tree, generate_star_forest, generate_union_of_forests,
    order_stream, parse_graph, parse_stream, serialize_graph, serialize_stream, EdgeStream,
    OrderingPolicy,
};

#[derive(Parser)]
#[command(
    name = "arbmatch",
    version,
    about = "Matching-size estimation for bounded-arboricity graph streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file.
    Generate(GenerateArgs),
    /// Turn a graph file into an edge stream file.
    Order(OrderArgs),
    /// Exact offline quantities as JSON.
    Oracle(OracleArgs),
    /// Run one estimator over a stream file and print a one-line JSON result.
    Estimate(EstimateArgs),
    /// Run a batch of trials from a key=value config file and write CSV.
    Experiment(ExperimentArgs),
    /// Check the offline inequalities on a graph file.
    CheckLemmas(CheckLemmasArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    UnionForests,
    StarForest,
    RandomTree,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    c: usize,
    /// Number of stars.
    #[arg(long)]
    k: Option<usize>,
    /// Leaves per star.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    graph: PathBuf,
    /// One of as-generated, uniform-random, star-by-star, leaves-last, centers-first.
    #[arg(long, default_value = "as-generated")]
    policy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Interleave this fraction of transient decoy edges (insert then delete).
    #[arg(long)]
    delete_fraction: Option<f64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Insert-only stream; its final graph is used when no graph is given.
    #[arg(long)]
    stream: Option<PathBuf>,
    #[arg(long)]
    mu: usize,
    /// Goodness threshold for `e_alpha`; needs a stream.
    #[arg(long)]
    alpha: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Greedy,
    Alg1,
    Alg2,
    Alg4,
    Logspace,
    Dynamic,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    stream: PathBuf,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Arboricity bound; defaults to the one declared in the stream file.
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    config: PathBuf,
    /// Overrides the config's output path; `-` writes to stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckLemmasArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    mu: usize,
    #[arg(long, default_value_t = 10)]
    orderings: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides the arboricity declared in the graph file.
    #[arg(long)]
    c: Option<usize>,
}

/// Failure carrying its exit code: 1 for a violation or Fail, 2 for bad input.
struct Exit(u8, String);

fn usage(e: impl std::fmt::Display) -> Exit {
    Exit(2, e.to_string())
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Exit> {
    parse_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_stream(path: &Path) -> Result<EdgeStream, Exit> {
    parse_stream(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Exit> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(usage),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Exit> {
    v.ok_or_else(|| usage(format!("--{flag} is required here")))
}

fn generate(a: GenerateArgs) -> Result<(), Exit> {
    let g = match a.kind {
        Kind::UnionForests => generate_union_of_forests(need(a.n, "n")?, a.c, a.seed),
        Kind::StarForest => generate_star_forest(need(a.k, "k")?, need(a.s, "s")?),
        Kind::RandomTree => generate_random_tree(need(a.n, "n")?, a.seed),
    };
    emit(a.out.as_deref(), &serialize_graph(&g))
}

fn order(a: OrderArgs) -> Result<(), Exit> {
    let g = load_graph(&a.graph)?;
    let policy = OrderingPolicy::from_name(&a.policy, a.seed).ok_or_else(|| {
        usage(format!(
            "unknown policy {:?}; expected one of {}",
            a.policy,
            OrderingPolicy::NAMES.join(", ")
        ))
    })?;
    let mut stream = order_stream(&g, policy);
    if let Some(f) = a.delete_fraction {
        if !(0.0..=1.0).contains(&f) {
            return Err(usage("--delete-fraction must be in [0, 1]"));
        }
        let ordered = stream.live_graph();
        stream = generate_dynamic_stream(&ordered, f, a.seed).map_err(usage)?;
    }
    emit(a.out.as_deref(), &serialize_stream(&stream))
}

fn oracle(a: OracleArgs) -> Result<(), Exit> {
    let stream = a.stream.as_deref().map(load_stream).transpose()?;
    let g = match (&a.graph, &stream) {
        (Some(p), _) => load_graph(p)?,
        (None, Some(s)) => s.live_graph(),
        (None, None) => return Err(usage("give --graph or --stream")),
    };
    let mut report = characterize(&g, a.mu);
    if let Some(alpha) = a.alpha {
        let s = need(stream.as_ref(), "stream")?;
        report = report.with_alpha_good(s, alpha).map_err(usage)?;
    }
    let mut value = serde_json::to_value(&report).map_err(usage)?;
    if let Some(s) = stream.as_ref().filter(|s| s.is_insert_only()) {
        value["greedy"] = json!(greedy_maximal_matching(s).map_err(usage)?);
    }
    println!("{value}");
    Ok(())
}

fn estimate(a: EstimateArgs) -> Result<(), Exit> {
    let stream = load_stream(&a.stream)?;
    let c = a.c.or(stream.c_declared()).unwrap_or(1);
    let mu = || need(a.mu, "mu");
    let est: Estimate = match a.algorithm {
        Algorithm::Greedy => {
            let r = greedy_maximal_matching(&stream).map_err(usage)?;
            println!("{}", json!({ "algorithm": "greedy", "value": r }));
            return Ok(());
        }
        Algorithm::Alg1 => {
            let params = Alg1Params::new(mu()?, need(a.p, "p")?, c, a.epsilon).map_err(usage)?;
            alg1_estimate(&stream, params, a.seed)
        }
        Algorithm::Alg2 => alg2_estimate(&stream, c, mu()?, a.epsilon, a.seed),
        Algorithm::Alg4 => {
            alg4_estimate_e_alpha(&stream, need(a.alpha, "alpha")?, c, a.epsilon, a.seed)
        }
        Algorithm::Logspace => estimate_matching_logspace(&stream, c, a.epsilon, a.seed),
        Algorithm::Dynamic => dynamic_estimate(&stream, c, mu()?, a.epsilon, a.seed),
    }
    .map_err(usage)?;
    println!("{}", serde_json::to_string(&est).map_err(usage)?);
    if est.is_fail() {
        return Err(Exit(1, "estimator failed".into()));
    }
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<(), Exit> {
    let mut config = ExperimentConfig::parse(&read(&a.config)?).map_err(usage)?;
    if let Some(out) = a.out {
        config.output = Some(out);
    }
    let records = match config.output.as_deref() {
        Some(p) if p != Path::new("-") => {
            let file = fs::File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            let mut w = io::BufWriter::new(file);
            let r = run_experiment_to(&config, Some(&mut w));
            w.flush().map_err(usage)?;
            r
        }
        _ => run_experiment_to(&config, Some(&mut io::stdout().lock())),
    }
    .map_err(usage)?;
    let bounds = config.algorithm.ratio_bounds(config.c, config.epsilon);
    let summary = summarize(&records, bounds);
    eprintln!("{}", serde_json::to_string(&summary).map_err(usage)?);
    Ok(())
}

fn lemmas(a: CheckLemmasArgs) -> Result<(), Exit> {
    let mut g = load_graph(&a.graph)?;
    if let Some(c) = a.c {
        g = g.with_declared_arboricity(c);
    }
    let report = check_lemmas(&g, a.orderings, a.mu, a.seed).map_err(usage)?;
    println!("{}", serde_json::to_string_pretty(&report).map_err(usage)?);
    if let Some(v) = &report.first_violation {
        return Err(Exit(1, format!("violation of {}: {}", v.check, v.detail)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Order(a) => order(a),
        Command::Oracle(a) => oracle(a),
        Command::Estimate(a) => estimate(a),
        Command::Experiment(a) => experiment(a),
        Command::CheckLemmas(a) => lemmas(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("arbmatch: {msg}");
            ExitCode::from(code)
        }
    }
}
