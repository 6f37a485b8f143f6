//! Command-line surface for the netsmooth estimators.
//!
//! Subcommands: `simulate` (draw a network from a graphon), `estimate`
//! (fit one estimator to one network), `bench` (replicated error table),
//! `sweep` (bandwidth-constant grid), `linkpred` (masked-edge ROC/AUC).
//! Every command is deterministic given its `--seed`. Exit codes: 0 on
//! success, 1 on usage errors, 2 on data or numeric errors.

pub mod io;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netsmooth::evaluation::{bandwidth_sweep, run_replications};
use netsmooth::linkpred::{apply_mask, jaccard_scores, roc_curve, ScoreMatrix};
use netsmooth::model::{build_probability_matrix, sample_adjacency, sample_latent};
use netsmooth::{AdjacencyMatrix, GraphonSpec, Method, RngSeed};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// CLI failure split by exit code: bad invocations versus bad inputs.
#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments or identifiers (exit 1).
    Usage(String),
    /// Unreadable, malformed, or numerically invalid data (exit 2).
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }

    fn with_context(self, ctx: &str) -> CliError {
        match self {
            CliError::Usage(m) => CliError::Usage(m),
            CliError::Data(m) => CliError::Data(format!("{ctx}: {m}")),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<netsmooth::Error> for CliError {
    /// Library errors surfacing mid-computation concern the data, not the
    /// invocation; argument validation maps to `Usage` explicitly instead.
    fn from(e: netsmooth::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(
    name = "netsmooth",
    version,
    about = "Edge-probability estimation for networks by neighborhood smoothing"
)]
struct Cli {
    /// Cap on worker threads for the parallel kernels (default: all cores).
    #[arg(long, global = true, env = "NBS_THREADS", value_name = "T")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one network from a graphon model.
    Simulate(SimulateArgs),
    /// Estimate the edge-probability matrix of one observed network.
    Estimate(EstimateArgs),
    /// Replicated error benchmark across graphons and estimators.
    Bench(BenchArgs),
    /// Error of the neighborhood smoother across a bandwidth-constant grid.
    Sweep(SweepArgs),
    /// Link prediction on randomly hidden edges, reported as ROC/AUC.
    Linkpred(LinkpredArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Edgelist,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum IndexingArg {
    Zero,
    One,
}

impl From<IndexingArg> for io::Indexing {
    fn from(v: IndexingArg) -> Self {
        match v {
            IndexingArg::Zero => io::Indexing::Zero,
            IndexingArg::One => io::Indexing::One,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Graphon id: 1..4 or blockmodel:<file>.
    #[arg(long)]
    graphon: String,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Base RNG seed.
    #[arg(long)]
    seed: u64,
    /// Output path for the 0/1 adjacency matrix CSV.
    #[arg(long, value_name = "FILE")]
    adj_out: PathBuf,
    /// Optional output path for the true probability matrix CSV.
    #[arg(long, value_name = "FILE")]
    prob_out: Option<PathBuf>,
    /// Optional output path for the latent positions (one per line).
    #[arg(long, value_name = "FILE")]
    latent_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Estimator identifier (see `--method help` on error for the list).
    #[arg(long)]
    method: String,
    /// Input network file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Bandwidth constant for nbs (default 1).
    #[arg(long = "C")]
    c: Option<f64>,
    /// Rank kept by svtk and sas-svd (default: cube root of n).
    #[arg(long)]
    k: Option<usize>,
    /// Block count for sbm-spectral (default: square root of n).
    #[arg(long = "K")]
    blocks: Option<usize>,
    /// Threshold constant for usvt (default 0.02).
    #[arg(long)]
    eta: Option<f64>,
    /// Node id base for edge-list inputs.
    #[arg(long, value_enum, default_value_t = IndexingArg::Zero)]
    indexing: IndexingArg,
    /// Node count for edge-list inputs (default: inferred from the ids).
    #[arg(long)]
    nodes: Option<usize>,
    /// Output path for the estimated probability matrix CSV.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated graphon ids (1..4 or blockmodel:<file>).
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    graphons: Vec<String>,
    /// Number of nodes per replication.
    #[arg(long)]
    n: usize,
    /// Replications per (graphon, method) cell.
    #[arg(long)]
    reps: usize,
    /// Comma-separated estimator identifiers.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    methods: Vec<String>,
    /// Base RNG seed; replication r uses seed + r in every cell.
    #[arg(long)]
    seed: u64,
    /// Bandwidth constant applied to nbs rows.
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    /// Output path for the benchmark CSV.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Graphon id (1..4 or blockmodel:<file>).
    #[arg(long)]
    graphon: String,
    /// Number of nodes per replication.
    #[arg(long)]
    n: usize,
    /// Comma-separated bandwidth constants.
    #[arg(long = "C-grid", value_delimiter = ',', value_name = "LIST")]
    c_grid: Vec<f64>,
    /// Replications, shared across the grid for paired comparison.
    #[arg(long)]
    reps: usize,
    /// Base RNG seed.
    #[arg(long)]
    seed: u64,
    /// Output path for the C,mse_mean CSV.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct LinkpredArgs {
    /// Input network file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Probability of hiding each unordered pair.
    #[arg(long)]
    p: f64,
    /// Comma-separated score methods: estimator ids or jaccard.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    methods: Vec<String>,
    /// RNG seed for the mask.
    #[arg(long)]
    seed: u64,
    /// ROC CSV path; with several methods the id lands before the extension.
    #[arg(long, value_name = "FILE")]
    roc_out: PathBuf,
    /// Bandwidth constant for nbs scores.
    #[arg(long = "C")]
    c: Option<f64>,
    /// Node id base for edge-list inputs.
    #[arg(long, value_enum, default_value_t = IndexingArg::Zero)]
    indexing: IndexingArg,
    /// Node count for edge-list inputs (default: inferred from the ids).
    #[arg(long)]
    nodes: Option<usize>,
}

/// Parses argv, runs the selected command, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // A second call (same process) fails harmlessly; the pool is
        // final once built.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Linkpred(args) => cmd_linkpred(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Resolves a --graphon token. Builtin ids validate against the target n
/// (graphon 1 needs n >= 3 for at least one block); blockmodel files are
/// read on the spot.
fn parse_graphon_arg(token: &str, n: usize) -> Result<GraphonSpec, CliError> {
    if let Some(path) = token.strip_prefix("blockmodel:") {
        if path.is_empty() {
            return Err(usage("blockmodel graphon needs a file: blockmodel:<file>"));
        }
        return io::read_blockmodel_spec(Path::new(path));
    }
    match token {
        "1" | "2" | "3" | "4" => {
            GraphonSpec::builtin(token, n).map_err(|e| usage(e.to_string()))
        }
        other => Err(usage(format!(
            "unknown graphon '{other}' (valid: 1, 2, 3, 4, blockmodel:<file>)"
        ))),
    }
}

/// Builds a method from its id plus the optional tuning flags, collecting
/// the flags the method does not consume.
fn method_with_overrides(
    id: &str,
    c: Option<f64>,
    k: Option<usize>,
    blocks: Option<usize>,
    eta: Option<f64>,
) -> Result<(Method, Vec<&'static str>), CliError> {
    if let Some(c) = c {
        if !(c > 0.0) || !c.is_finite() {
            return Err(usage(format!("--C must be positive and finite, got {c}")));
        }
    }
    if let Some(eta) = eta {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(usage(format!("--eta must be >= 0 and finite, got {eta}")));
        }
    }
    if k == Some(0) {
        return Err(usage("--k must be >= 1"));
    }
    if blocks == Some(0) {
        return Err(usage("--K must be >= 1"));
    }
    let base = Method::from_id(id).map_err(|e| usage(e.to_string()))?;
    let mut ignored = Vec::new();
    let mut flag_if = |cond: bool, name: &'static str| {
        if cond {
            ignored.push(name);
        }
    };
    let method = match base {
        Method::Nbs { .. } => {
            flag_if(k.is_some(), "--k");
            flag_if(blocks.is_some(), "--K");
            flag_if(eta.is_some(), "--eta");
            Method::Nbs {
                c: c.unwrap_or(1.0),
            }
        }
        Method::Usvt { eta: default_eta } => {
            flag_if(c.is_some(), "--C");
            flag_if(k.is_some(), "--k");
            flag_if(blocks.is_some(), "--K");
            Method::Usvt {
                eta: eta.unwrap_or(default_eta),
            }
        }
        Method::SvtK { .. } => {
            flag_if(c.is_some(), "--C");
            flag_if(blocks.is_some(), "--K");
            flag_if(eta.is_some(), "--eta");
            Method::SvtK { k }
        }
        Method::Sas { .. } => {
            flag_if(c.is_some(), "--C");
            flag_if(k.is_some(), "--k");
            flag_if(blocks.is_some(), "--K");
            flag_if(eta.is_some(), "--eta");
            Method::Sas { bins: None }
        }
        Method::SasSvd { .. } => {
            flag_if(c.is_some(), "--C");
            flag_if(blocks.is_some(), "--K");
            flag_if(eta.is_some(), "--eta");
            Method::SasSvd { k, bins: None }
        }
        Method::SbmSpectral { .. } => {
            flag_if(c.is_some(), "--C");
            flag_if(k.is_some(), "--k");
            flag_if(eta.is_some(), "--eta");
            Method::SbmSpectral { blocks }
        }
        Method::SbmOracle { .. } => {
            flag_if(c.is_some(), "--C");
            flag_if(k.is_some(), "--k");
            flag_if(eta.is_some(), "--eta");
            Method::SbmOracle { blocks }
        }
    };
    Ok((method, ignored))
}

fn read_network(
    path: &Path,
    format: Format,
    indexing: IndexingArg,
    nodes: Option<usize>,
) -> Result<AdjacencyMatrix, CliError> {
    match format {
        Format::Csv => {
            let m = io::read_matrix_csv(path)?;
            AdjacencyMatrix::new(m)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
        }
        Format::Edgelist => {
            let (a, self_loops) = io::read_edge_list(path, indexing.into(), nodes)?;
            if self_loops > 0 {
                eprintln!(
                    "warning: dropped {self_loops} self-loop(s) from {}",
                    path.display()
                );
            }
            Ok(a)
        }
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(usage("--n must be >= 1"));
    }
    let spec = parse_graphon_arg(&args.graphon, args.n)?;
    let seed = RngSeed(args.seed);
    let xi = sample_latent(args.n, seed).map_err(|e| usage(e.to_string()))?;
    let p = build_probability_matrix(&spec, &xi)?;
    let a = sample_adjacency(&p, seed);
    io::write_matrix_csv(&args.adj_out, a.values())?;
    if let Some(path) = &args.prob_out {
        io::write_matrix_csv(path, p.values())?;
    }
    if let Some(path) = &args.latent_out {
        io::write_vector_csv(path, xi.as_slice())?;
    }
    Ok(())
}

fn cmd_estimate(args: EstimateArgs) -> Result<(), CliError> {
    let (method, ignored) =
        method_with_overrides(&args.method, args.c, args.k, args.blocks, args.eta)?;
    if method.requires_latent() {
        return Err(usage(
            "sbm-oracle needs the true latent positions and is only available \
             through bench on simulated graphons",
        ));
    }
    for flag in ignored {
        eprintln!("note: {flag} is ignored by method {}", method.id());
    }
    let a = read_network(&args.input, args.format, args.indexing, args.nodes)?;
    let phat = method.estimate(&a, None)?;
    io::write_matrix_csv(&args.out, phat.values())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(usage("--n must be >= 1"));
    }
    if args.reps == 0 {
        return Err(usage("--reps must be >= 1"));
    }
    if !(args.c > 0.0) || !args.c.is_finite() {
        return Err(usage(format!(
            "--C must be positive and finite, got {}",
            args.c
        )));
    }
    if args.methods.is_empty() {
        return Err(usage("--methods needs at least one estimator identifier"));
    }
    if args.graphons.is_empty() {
        return Err(usage("--graphons needs at least one graphon id"));
    }
    let mut methods = Vec::with_capacity(args.methods.len());
    for id in &args.methods {
        let mut m = Method::from_id(id).map_err(|e| usage(e.to_string()))?;
        if let Method::Nbs { c } = &mut m {
            *c = args.c;
        }
        methods.push(m);
    }
    let mut specs = Vec::with_capacity(args.graphons.len());
    for g in &args.graphons {
        specs.push(parse_graphon_arg(g, args.n)?);
    }
    let mut csv = String::from(
        "method,graphon,n,reps,C,rmse_mean,rmse_se,mae_mean,mae_se,twoinf_mean,twoinf_se\n",
    );
    for spec in &specs {
        for method in &methods {
            let t0 = Instant::now();
            eprintln!(
                "bench: graphon={} method={} n={} reps={}",
                spec.id(),
                method.id(),
                args.n,
                args.reps
            );
            let rep = run_replications(spec, args.n, method, args.reps, RngSeed(args.seed))?;
            eprintln!(
                "bench: graphon={} method={} rmse_mean={:.6} ({:.1}s)",
                spec.id(),
                method.id(),
                rep.rmse_mean,
                t0.elapsed().as_secs_f64()
            );
            let c_field = match method {
                Method::Nbs { c } => format!("{c}"),
                _ => String::new(),
            };
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{}",
                rep.method,
                rep.graphon,
                rep.n,
                rep.reps,
                c_field,
                rep.rmse_mean,
                rep.rmse_se,
                rep.mae_mean,
                rep.mae_se,
                rep.twoinf_mean,
                rep.twoinf_se
            );
        }
    }
    fs::write(&args.out, csv)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", args.out.display())))
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(usage("--n must be >= 1"));
    }
    if args.reps == 0 {
        return Err(usage("--reps must be >= 1"));
    }
    if args.c_grid.is_empty() {
        return Err(usage("--C-grid needs at least one bandwidth constant"));
    }
    for &c in &args.c_grid {
        if !(c > 0.0) || !c.is_finite() {
            return Err(usage(format!(
                "--C-grid entries must be positive and finite, got {c}"
            )));
        }
    }
    let spec = parse_graphon_arg(&args.graphon, args.n)?;
    let rows = bandwidth_sweep(&spec, args.n, &args.c_grid, args.reps, RngSeed(args.seed))?;
    let mut csv = String::from("C,mse_mean\n");
    for (c, mse) in rows {
        let _ = writeln!(csv, "{c},{mse}");
    }
    fs::write(&args.out, csv)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", args.out.display())))
}

enum ScoreMethod {
    Estimator(Method),
    Jaccard,
}

impl ScoreMethod {
    fn id(&self) -> &'static str {
        match self {
            ScoreMethod::Estimator(m) => m.id(),
            ScoreMethod::Jaccard => "jaccard",
        }
    }
}

/// Output path for one method's ROC curve: the given path as-is for a
/// single method, otherwise the method id slips in front of the extension
/// (roc.csv -> roc.nbs.csv).
fn roc_path(base: &Path, id: &str, multi: bool) -> PathBuf {
    if !multi {
        return base.to_path_buf();
    }
    match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => base.with_extension(format!("{id}.{ext}")),
        None => base.with_extension(id),
    }
}

fn cmd_linkpred(args: LinkpredArgs) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.p) {
        return Err(usage(format!("--p must lie in [0,1], got {}", args.p)));
    }
    if args.methods.is_empty() {
        return Err(usage("--methods needs at least one score method"));
    }
    let mut methods = Vec::with_capacity(args.methods.len());
    for token in &args.methods {
        let sm = if token == "jaccard" {
            ScoreMethod::Jaccard
        } else {
            let (m, _) = method_with_overrides(token, args.c, None, None, None).map_err(|_| {
                usage(format!(
                    "unknown score method '{token}' (valid: {}, jaccard)",
                    Method::IDENTIFIERS.join(", ")
                ))
            })?;
            if m.requires_latent() {
                return Err(usage(
                    "sbm-oracle cannot score observed networks (no latent positions)",
                ));
            }
            ScoreMethod::Estimator(m)
        };
        methods.push(sm);
    }
    let a_true = read_network(&args.input, args.format, args.indexing, args.nodes)?;
    let (a_obs, mask) = apply_mask(&a_true, args.p, RngSeed(args.seed))?;
    let multi = methods.len() > 1;
    for sm in &methods {
        let scores = match sm {
            ScoreMethod::Jaccard => jaccard_scores(&a_obs),
            ScoreMethod::Estimator(m) => ScoreMatrix::from(m.estimate(&a_obs, None)?),
        };
        let curve = roc_curve(&scores, &a_true, &mask)?;
        let path = roc_path(&args.roc_out, sm.id(), multi);
        io::write_roc_csv(&path, &curve)?;
        println!("auc {} {}", sm.id(), curve.auc);
    }
    Ok(())
}
