//! The `seqlearn` command line: graph generation and analysis, spectra,
//! certificates, bounds, the exact oracle, simulation, robustness sweeps and
//! batch runs.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 budget exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::SystemTime;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use seqlearn_core::experiments::{self, CheckMode, EliminationSpec, RuleKind, SimConfig, SweepConfig};
use seqlearn_core::netgen::{GenRecipe, Generated, LpsMeta};
use seqlearn_core::{bounds, llr, oracle, spectral, DecisionRule, Error, Graph, Length, Part, Precision, VertexSet};

mod batch;
pub mod output;

pub use output::{Format, RunManifest, TIMESTAMP_FIELDS};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("batch step {index} exited with code {code}")]
    Step { index: usize, code: i32 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Json(_) => 2,
            CliError::Step { code, .. } => *code,
            CliError::Core(e) => match e {
                Error::Input(_) | Error::VertexOutOfRange { .. } => 1,
                Error::Parse { .. } | Error::Validation(_) | Error::Io(_) => 2,
                Error::Budget(_) | Error::NonConvergence { .. } => 3,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "seqlearn", version, about = "Sequential social learning on networks")]
pub struct Cli {
    /// Output format for results written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Master seed; every random quantity of the run derives from it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph file (and a JSON sidecar when writing to a file).
    Gen(GenArgs),
    /// Degrees, girth, connectivity, neighborhoods.
    Analyze(AnalyzeArgs),
    /// Top two adjacency eigenvalues, optionally the Ramanujan check.
    Spectral(SpectralArgs),
    /// Local learning requirement certificates with their bounds.
    Llr(LlrArgs),
    /// Evaluate closed-form bounds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCmd,
    },
    /// Exact equilibrium learning quality (small graphs).
    Oracle(OracleArgs),
    /// Monte Carlo learning quality.
    Simulate(SimulateArgs),
    /// Learning quality after eliminating agents.
    Robustness(RobustnessArgs),
    /// Earliest-arrival subnetwork error versus delta / alpha.
    Coupling(CouplingArgs),
    /// Run a TOML list of commands.
    Batch(BatchArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
    /// Write the graph here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Family {
    Clique {
        #[arg(long)]
        n: usize,
    },
    Celebrity {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Path {
        #[arg(long)]
        n: usize,
    },
    Star {
        #[arg(long)]
        leaves: usize,
    },
    Petersen,
    /// Uses the global seed.
    RandomRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    Lps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph file in the `n m` / `u v` edge-list format.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    vertex: Option<usize>,
    /// Neighborhood radius around `--vertex`.
    #[arg(long, default_value_t = 1)]
    radius: usize,
    /// Degree threshold for the high-degree-friend fractions.
    #[arg(long)]
    threshold: Option<usize>,
}

#[derive(Debug, Args)]
struct SpectralArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, default_value_t = spectral::DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    check_ramanujan: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertMethod {
    Girth,
    Search,
}

#[derive(Debug, Args)]
struct LlrArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, conflicts_with = "all")]
    vertex: Option<usize>,
    #[arg(long)]
    all: bool,
    /// Radius for the search route; defaults to the girth radius.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_enum, default_value_t = CertMethod::Girth)]
    method: CertMethod,
    #[arg(long, value_parser = parse_precision, default_value = "9/10")]
    p: Precision,
}

#[derive(Debug, Subcommand)]
enum BoundsCmd {
    Psi {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
        #[arg(long = "D")]
        cap_d: u64,
    },
    Delta {
        #[arg(long, value_parser = parse_real)]
        p: f64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
        #[arg(long = "D")]
        cap_d: u64,
    },
    Localization {
        #[arg(long)]
        r: u64,
        #[arg(long = "D")]
        cap_d: u64,
    },
    Lemma3 {
        #[arg(long, value_parser = parse_real)]
        alpha: f64,
        #[arg(long = "D")]
        cap_d: u64,
        /// A cycle length, or `infinite`.
        #[arg(long, value_parser = parse_length)]
        girth: Length,
        #[arg(long)]
        lambda2: f64,
        #[arg(long, value_parser = parse_real)]
        p: f64,
    },
    Theorem4 {
        #[arg(long)]
        delta: f64,
        #[arg(long, value_parser = parse_real)]
        alpha: f64,
    },
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_parser = parse_precision)]
    p: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Signal,
    Cascade,
    DesignatedMajority,
    Oracle,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Cascade)]
    rule: RuleArg,
    #[arg(long, value_parser = parse_precision)]
    p: Precision,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Write the result JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-vertex estimates as CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RobustnessArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Cascade)]
    rule: RuleArg,
    #[arg(long, value_parser = parse_precision)]
    p: Precision,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Comma-separated surviving fractions.
    #[arg(long, value_delimiter = ',', value_parser = parse_real, default_value = "1")]
    alpha_grid: Vec<f64>,
    /// Comma-separated fraction-based strategies.
    #[arg(long, value_delimiter = ',', value_enum, default_value = "random")]
    strategies: Vec<StrategyArg>,
    /// Also remove a whole part (needs the part labels from the sidecar).
    #[arg(long, value_enum)]
    drop_part: Option<PartArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Random,
    LowestDegree,
    HighestDegree,
    EarliestArrivals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PartArg {
    Celebrity,
    Commoner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Args)]
struct CouplingArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_parser = parse_real)]
    alpha: f64,
    #[arg(long, value_parser = parse_precision)]
    p: Precision,
    /// Defaults to exact for graphs within the oracle budget.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
}

#[derive(Debug, Args)]
struct BatchArgs {
    config: PathBuf,
    /// Where the batch manifest is written; defaults to `<config>.manifest.json`.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A real number, given as a decimal or as `num/den`.
fn parse_real(s: &str) -> Result<f64, String> {
    let bad = || format!("cannot parse {s:?} as a number");
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn parse_length(s: &str) -> Result<Length, String> {
    if s.eq_ignore_ascii_case("infinite") || s.eq_ignore_ascii_case("inf") {
        Ok(Length::Infinite)
    } else {
        s.parse().map(Length::Finite).map_err(|_| format!("cannot parse girth {s:?}"))
    }
}

/// Sidecar written next to generated graph files.
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphSidecar {
    pub recipe: GenRecipe,
    pub n: usize,
    pub m: usize,
    pub parts: Option<Vec<Part>>,
    pub lps: Option<LpsMeta>,
}

fn sidecar_path(graph: &Path) -> PathBuf {
    let mut s = graph.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

pub fn load_graph(path: &Path) -> Result<Graph, Error> {
    let text = std::fs::read_to_string(path)?;
    Graph::from_text(&text)
}

fn load_parts(path: &Path) -> CliResult<Option<Vec<Part>>> {
    let side = sidecar_path(path);
    if !side.exists() {
        return Ok(None);
    }
    let s: GraphSidecar = serde_json::from_str(&std::fs::read_to_string(&side).map_err(Error::from)?)?;
    Ok(s.parts)
}

#[derive(Debug, Serialize)]
struct VertexReport {
    v: usize,
    degree: usize,
    friends: VertexSet,
    radius: usize,
    neighborhood: VertexSet,
    eccentricity: usize,
}

#[derive(Debug, Serialize)]
struct HighDegreeReport {
    threshold: usize,
    beta: f64,
    good_fraction: f64,
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    n: usize,
    m: usize,
    min_degree: usize,
    max_degree: usize,
    regular_degree: Option<usize>,
    components: usize,
    connected: bool,
    bipartite: bool,
    girth: Length,
    diameter: Option<usize>,
    vertex: Option<VertexReport>,
    high_degree: Option<HighDegreeReport>,
}

#[derive(Debug, Serialize)]
struct LlrEntry {
    certificate: llr::LlrCertificate,
    verified: bool,
    exact: bool,
    bound: Option<bounds::BoundReport>,
}

#[derive(Debug, Serialize)]
struct CouplingReport {
    graph_n: usize,
    p: Precision,
    #[serde(flatten)]
    check: experiments::RobustnessCheck,
}

#[derive(Debug, Serialize)]
struct SweepReport {
    rule: &'static str,
    p: Precision,
    trials: u64,
    seed: u64,
    lambda2_abs: Option<f64>,
    rows: Vec<experiments::SweepRow>,
}

/// Parses `argv` (including the program name), runs the command, writes
/// results to `out` and diagnostics to stderr, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, &args, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T, format: Format) -> CliResult<()> {
    out.write_all(output::render(value, format)?.as_bytes()).map_err(Error::from)?;
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Analyze(_) => "analyze",
        Command::Spectral(_) => "spectral",
        Command::Llr(_) => "llr",
        Command::Bounds { .. } => "bounds",
        Command::Oracle(_) => "oracle",
        Command::Simulate(_) => "simulate",
        Command::Robustness(_) => "robustness",
        Command::Coupling(_) => "coupling",
        Command::Batch(_) => "batch",
    }
}

fn execute(cli: &Cli, args: &[String], out: &mut dyn Write) -> CliResult<()> {
    let started = SystemTime::now();
    let mut manifest = RunManifest::new(command_name(&cli.command), args, cli.seed, started);
    let fmt = cli.format;
    match &cli.command {
        Command::Gen(a) => {
            let recipe = match a.family {
                Family::Clique { n } => GenRecipe::Clique { n },
                Family::Celebrity { k, m } => GenRecipe::Celebrity { k, m },
                Family::Cycle { n } => GenRecipe::Cycle { n },
                Family::Path { n } => GenRecipe::Path { n },
                Family::Star { leaves } => GenRecipe::Star { leaves },
                Family::Petersen => GenRecipe::Petersen,
                Family::RandomRegular { n, d } => GenRecipe::RandomRegular { n, d, seed: cli.seed },
                Family::Lps { p, q } => GenRecipe::Lps { p, q },
            };
            let Generated { recipe, graph, parts, lps } = recipe.build()?;
            let text = graph.to_text();
            match &a.out {
                None => out.write_all(text.as_bytes()).map_err(Error::from)?,
                Some(path) => {
                    output::write_file(path, &text)?;
                    let side = GraphSidecar { recipe, n: graph.n(), m: graph.m(), parts, lps };
                    let side_path = sidecar_path(path);
                    output::write_file(&side_path, &(serde_json::to_string_pretty(&side)? + "\n"))?;
                    manifest.outputs = vec![path.display().to_string(), side_path.display().to_string()];
                    manifest.finish(started);
                    manifest.write(&output::manifest_path(path))?;
                }
            }
        }
        Command::Analyze(a) => {
            let g = load_graph(&a.graph.graph)?;
            let labels = g.components();
            let components = labels.iter().max().map_or(0, |&m| m + 1);
            let degrees = g.degrees();
            let vertex = match a.vertex {
                Some(v) => Some(VertexReport {
                    v,
                    degree: g.degree(v)?,
                    friends: g.friends(v)?,
                    radius: a.radius,
                    neighborhood: g.neighborhood(v, a.radius)?,
                    eccentricity: g.eccentricity(v)?,
                }),
                None => None,
            };
            let high_degree = match a.threshold {
                Some(t) => {
                    let (beta, good_fraction) = g.high_degree_friend_fraction(t)?;
                    Some(HighDegreeReport { threshold: t, beta, good_fraction })
                }
                None => None,
            };
            let connected = g.is_connected();
            let report = AnalyzeReport {
                n: g.n(),
                m: g.m(),
                min_degree: degrees.iter().copied().min().unwrap_or(0),
                max_degree: g.max_degree(),
                regular_degree: g.regular_degree(),
                components,
                connected,
                bipartite: g.is_bipartite(),
                girth: g.girth(),
                diameter: connected.then(|| g.diameter()),
                vertex,
                high_degree,
            };
            emit(out, &report, fmt)?;
        }
        Command::Spectral(a) => {
            let g = load_graph(&a.graph.graph)?;
            if a.check_ramanujan {
                emit(out, &spectral::ramanujan_check(&g, a.tol)?, fmt)?;
            } else {
                emit(out, &spectral::top_two_eigenvalues(&g, a.tol)?, fmt)?;
            }
        }
        Command::Llr(a) => {
            let g = load_graph(&a.graph.graph)?;
            let vertices: Vec<usize> = match (a.vertex, a.all) {
                (Some(v), false) => vec![v],
                (None, true) => (0..g.n()).collect(),
                _ => return Err(CliError::Usage("give either --vertex or --all".into())),
            };
            let mut entries = vec![];
            for v in vertices {
                let (certificate, exact) = match (a.method, a.r) {
                    (CertMethod::Girth, None) => (llr::girth_certificate(&g, v)?, true),
                    (CertMethod::Girth, Some(_)) => {
                        return Err(CliError::Usage("--r applies to --method search".into()));
                    }
                    (CertMethod::Search, r) => {
                        let r = match r {
                            Some(r) => r,
                            None => llr::girth_certificate(&g, v)?.r,
                        };
                        let s = llr::search_certificate(&g, v, r)?;
                        (s.certificate, s.exact)
                    }
                };
                let verified = llr::verify_certificate(&g, &certificate)?;
                let bound = certificate.bound(a.p.value())?;
                entries.push(LlrEntry { certificate, verified, exact, bound });
            }
            emit(out, &entries, fmt)?;
        }
        Command::Bounds { which } => match *which {
            BoundsCmd::Psi { d, r, cap_d } => {
                #[derive(Serialize)]
                struct Psi {
                    d: u64,
                    r: u64,
                    cap_d: u64,
                    psi: f64,
                }
                emit(out, &Psi { d, r, cap_d, psi: bounds::psi(d, r, cap_d) }, fmt)?;
            }
            BoundsCmd::Delta { p, d, r, cap_d } => emit(out, &bounds::delta_bound(p, d, r, cap_d)?, fmt)?,
            BoundsCmd::Localization { r, cap_d } => emit(out, &bounds::localization_bound(r, cap_d)?, fmt)?,
            BoundsCmd::Lemma3 { alpha, cap_d, girth, lambda2, p } => {
                emit(out, &bounds::lemma3_bound(alpha, cap_d, girth, lambda2, p)?, fmt)?
            }
            BoundsCmd::Theorem4 { delta, alpha } => {
                #[derive(Serialize)]
                struct T4 {
                    delta: f64,
                    alpha: f64,
                    bound: f64,
                    vacuous: bool,
                }
                let bound = bounds::theorem4_bound(delta, alpha)?;
                emit(out, &T4 { delta, alpha, bound, vacuous: bound >= 1.0 }, fmt)?;
            }
        },
        Command::Oracle(a) => {
            let g = load_graph(&a.graph.graph)?;
            emit(out, &oracle::exact_oracle(&g, a.p)?, fmt)?;
        }
        Command::Simulate(a) => {
            let g = load_graph(&a.graph.graph)?;
            let rule = match a.rule {
                RuleArg::Signal => DecisionRule::Signal,
                RuleArg::Cascade => DecisionRule::Cascade,
                RuleArg::DesignatedMajority => {
                    DecisionRule::DesignatedMajority(Arc::new(experiments::designated_sets(&g)?))
                }
                RuleArg::Oracle => oracle::exact_oracle(&g, a.p)?.rule(),
            };
            let cfg = SimConfig { rule, p: a.p, trials: a.trials, master_seed: cli.seed };
            let result = experiments::estimate_learning(&g, &cfg)?;
            if let Some(path) = &a.out {
                output::write_file(path, &(serde_json::to_string_pretty(&result)? + "\n"))?;
                manifest.outputs.push(path.display().to_string());
            }
            if let Some(path) = &a.csv {
                let mut csv = String::from("vertex,l_hat\n");
                for (v, l) in result.l_hat.iter().enumerate() {
                    csv.push_str(&format!("{v},{l}\n"));
                }
                output::write_file(path, &csv)?;
                manifest.outputs.push(path.display().to_string());
            }
            for path in a.out.iter().chain(&a.csv) {
                manifest.finish(started);
                manifest.write(&output::manifest_path(path))?;
            }
            emit(out, &result, fmt)?;
        }
        Command::Robustness(a) => {
            let g = load_graph(&a.graph.graph)?;
            let parts = load_parts(&a.graph.graph)?;
            let rule = match a.rule {
                RuleArg::Signal => RuleKind::Signal,
                RuleArg::Cascade => RuleKind::Cascade,
                RuleArg::DesignatedMajority => RuleKind::DesignatedMajority,
                RuleArg::Oracle => return Err(CliError::Usage("the oracle rule is not available for sweeps".into())),
            };
            let mut specs = vec![];
            if let Some(part) = a.drop_part {
                if parts.is_none() {
                    return Err(CliError::Usage("--drop-part needs part labels from the graph sidecar".into()));
                }
                let part = match part {
                    PartArg::Celebrity => Part::Celebrity,
                    PartArg::Commoner => Part::Commoner,
                };
                specs.push(EliminationSpec::DropPart { part });
            }
            for &alpha in &a.alpha_grid {
                for s in &a.strategies {
                    specs.push(match s {
                        StrategyArg::Random => EliminationSpec::Random {
                            alpha,
                            seed: seqlearn_core::rng::derive_seed(cli.seed, specs.len() as u64),
                        },
                        StrategyArg::LowestDegree => EliminationSpec::LowestDegree { alpha },
                        StrategyArg::HighestDegree => EliminationSpec::HighestDegree { alpha },
                        StrategyArg::EarliestArrivals => EliminationSpec::EarliestArrivals { alpha },
                    });
                }
            }
            let lambda2_abs = match g.regular_degree() {
                Some(_) if g.is_connected() => Some(spectral::top_two_eigenvalues(&g, spectral::DEFAULT_TOL)?.lambda2_abs),
                _ => None,
            };
            let cfg = SweepConfig { rule, p: a.p, trials: a.trials, seed: cli.seed, lambda2_abs };
            let rows = experiments::robustness_sweep(&g, &specs, parts.as_deref(), &cfg)?;
            let report = SweepReport {
                rule: match rule {
                    RuleKind::Signal => "signal",
                    RuleKind::Cascade => "cascade",
                    RuleKind::DesignatedMajority => "designated_majority",
                },
                p: a.p,
                trials: a.trials,
                seed: cli.seed,
                lambda2_abs,
                rows,
            };
            if let Some(path) = &a.out {
                output::write_file(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
                manifest.outputs.push(path.display().to_string());
                manifest.finish(started);
                manifest.write(&output::manifest_path(path))?;
            }
            match fmt {
                Format::Json => emit(out, &report, fmt)?,
                Format::Table => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        strategy: &'a str,
                        kept: usize,
                        edges: usize,
                        l_hat: f64,
                        se: f64,
                        lemma3: Option<f64>,
                        vacuous: Option<bool>,
                    }
                    let rows: Vec<Row> = report
                        .rows
                        .iter()
                        .map(|r| Row {
                            strategy: &r.label,
                            kept: r.kept,
                            edges: r.sub_edges,
                            l_hat: r.result.learning_quality,
                            se: r.result.se,
                            lemma3: r.lemma3.map(|l| l.value),
                            vacuous: r.lemma3.map(|l| l.vacuous),
                        })
                        .collect();
                    emit(out, &rows, fmt)?;
                }
            }
        }
        Command::Coupling(a) => {
            let g = load_graph(&a.graph.graph)?;
            let mode = match a.mode {
                Some(ModeArg::Exact) => CheckMode::Exact,
                Some(ModeArg::MonteCarlo) => CheckMode::MonteCarlo,
                None if g.n() <= oracle::MAX_AGENTS => CheckMode::Exact,
                None => CheckMode::MonteCarlo,
            };
            let check = experiments::randomized_robustness_check(&g, a.alpha, a.p, mode, a.trials, cli.seed)?;
            emit(out, &CouplingReport { graph_n: g.n(), p: a.p, check }, fmt)?;
        }
        Command::Batch(a) => {
            let path = a.manifest.clone().unwrap_or_else(|| output::manifest_path(&a.config));
            batch::run_batch(&a.config, &path, manifest, started, out)?;
        }
    }
    Ok(())
}
