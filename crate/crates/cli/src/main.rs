//! `lrmr`: generate instances, run the distributed algorithms on a simulated
//! cluster, verify solutions and sweep seeds.

mod algorithm;
mod report;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lrmr_algos::AlgoError;
use lrmr_core::validate::Verdict;
use lrmr_core::{generate, io, CoreError, Rational, Weight};
use lrmr_engine::{ClusterParams, Trace, TraceLevel};

use algorithm::{Algorithm, Instance, Knobs, Sense, Solution};
use report::{Exact, OracleValue, RunReport};

type Graph = lrmr_core::ExactGraph;

#[derive(Parser)]
#[command(name = "lrmr", version, about = "Local ratio and hungry-greedy algorithms on a simulated MapReduce cluster")]
struct Cli {
    /// List the algorithms with their guarantees and exit.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance and print its digest.
    #[command(subcommand)]
    Generate(Generate),
    /// Run one algorithm and print the report and trace as JSON.
    Run(RunArgs),
    /// Check a solution, optionally against the exhaustive optimum.
    Verify(VerifyArgs),
    /// Run a seed sweep and print CSV.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum Generate {
    Graph {
        #[arg(long)]
        n: usize,
        /// Edge count exponent: floor(n^(1+c)) edges.
        #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
        c: Option<f64>,
        /// Exact edge count.
        #[arg(long)]
        edges: Option<usize>,
        #[command(flatten)]
        common: GenCommon,
    },
    Setcover {
        /// Number of sets.
        #[arg(long)]
        n: usize,
        /// Number of elements.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        density: f64,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Args)]
struct GenCommon {
    /// Inclusive integer weight range `lo,hi`.
    #[arg(long, value_parser = weight_range, default_value = "1,1")]
    weights: (i64, i64),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn weight_range(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text.split_once(',').ok_or("expected `lo,hi`")?;
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|e| format!("`{s}`: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

#[derive(Args, Clone)]
struct Regime {
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    /// Density exponent; derived from the instance when absent.
    #[arg(long)]
    c: Option<f64>,
    /// Sample size target; `n^(1+mu)` when absent.
    #[arg(long)]
    eta: Option<usize>,
    /// Rational slack such as `1/10` (bmatch, sc-lnD).
    #[arg(long)]
    epsilon: Option<String>,
    /// Uniform vertex capacity (bmatch).
    #[arg(long)]
    b: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    retries: usize,
    /// off, summary or verbose; falls back to MPC_TRACE.
    #[arg(long)]
    trace: Option<String>,
    /// Group count for colouring.
    #[arg(long)]
    kappa: Option<usize>,
    /// Per-group edge cap constant for colouring.
    #[arg(long)]
    group_cap: Option<usize>,
    #[arg(long)]
    machines: Option<usize>,
    /// Words per machine.
    #[arg(long)]
    budget: Option<usize>,
    /// Budget proportional to input size over machines.
    #[arg(long)]
    strict_mpc: bool,
}

#[derive(Args)]
struct RunArgs {
    algorithm: Algorithm,
    instance: PathBuf,
    #[command(flatten)]
    regime: Regime,
    /// Also compute the exhaustive optimum when the instance is small enough.
    #[arg(long)]
    oracle: bool,
    /// Write the solution file here.
    #[arg(long)]
    solution_out: Option<PathBuf>,
    /// Write the trace JSON here instead of embedding it in the output.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    algorithm: Algorithm,
    instance: PathBuf,
    /// Solution file; without one the algorithm is run first.
    solution: Option<PathBuf>,
    #[arg(long)]
    against_oracle: bool,
    #[command(flatten)]
    regime: Regime,
}

#[derive(Args)]
struct BenchArgs {
    algorithm: Algorithm,
    instance: PathBuf,
    /// Number of consecutive seeds, starting at --seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[command(flatten)]
    regime: Regime,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Exhausted(String),
    Verdict,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Verdict => 1,
            Failure::Exhausted(_) => 2,
            Failure::Input(_) => 3,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Io(msg) => Failure::Usage(msg),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<AlgoError> for Failure {
    fn from(err: AlgoError) -> Self {
        match err {
            AlgoError::Core(e) => e.into(),
            e @ AlgoError::RetriesExhausted { .. } => Failure::Exhausted(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match (cli.list, cli.command) {
        (true, _) => {
            out(&list());
            Ok(())
        }
        (false, Some(Command::Generate(g))) => cmd_generate(g),
        (false, Some(Command::Run(a))) => cmd_run(a),
        (false, Some(Command::Verify(a))) => cmd_verify(a),
        (false, Some(Command::Bench(a))) => cmd_bench(a),
        (false, None) => Err(Failure::Usage("no command given; try --help".into())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::Input(msg) | Failure::Exhausted(msg) => eprintln!("error: {msg}"),
                Failure::Verdict => {}
            }
            ExitCode::from(failure.code())
        }
    }
}

/// Stdout that tolerates a closed pipe.
fn out(text: &str) {
    use std::io::Write as _;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn list() -> String {
    let mut out = String::new();
    for a in algorithm::ALL {
        let _ = writeln!(out, "{:<11} {:<21} {}", a.name(), a.operation(), a.bound());
    }
    out
}

fn cmd_generate(g: Generate) -> Result<(), Failure> {
    let (text, path) = match g {
        Generate::Graph { n, c, edges, common } => {
            let range = common.weights;
            let graph: Graph = match (c, edges) {
                (_, Some(m)) => generate::generate_graph_with_edges(n, m, range, common.seed)?,
                (Some(c), None) => generate::generate_graph(n, c, range, common.seed)?,
                (None, None) => unreachable!("clap requires one of --c and --edges"),
            };
            (io::write_graph(&graph), common.out)
        }
        Generate::Setcover { n, m, density, common } => {
            let range = common.weights;
            let inst = generate::generate_set_cover::<Rational>(n, m, density, range, common.seed)?;
            (io::write_set_cover(&inst), common.out)
        }
    };
    write(&path, &text)?;
    out(&format!("{}\n", io::digest(&text)));
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(algorithm: Algorithm, path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(Instance::load(algorithm, &text)?)
}

/// Resolves flags into cluster parameters and per-algorithm knobs, rejecting
/// flags the algorithm does not take.
fn setup(algorithm: Algorithm, regime: &Regime) -> Result<(ClusterParams, Knobs), Failure> {
    let usage = |msg: String| Err(Failure::Usage(msg));
    let name = algorithm.name();
    match (&regime.epsilon, algorithm.needs_epsilon()) {
        (None, true) => return usage(format!("{name} needs --epsilon")),
        (Some(_), false) => return usage(format!("{name} takes no --epsilon")),
        _ => {}
    }
    match (regime.b, algorithm.needs_b()) {
        (None, true) => return usage(format!("{name} needs --b")),
        (Some(_), false) => return usage(format!("{name} takes no --b")),
        (Some(0), true) => return usage("--b must be at least 1".into()),
        _ => {}
    }
    if !algorithm.colours() && (regime.kappa.is_some() || regime.group_cap.is_some()) {
        return usage(format!("{name} takes no --kappa or --group-cap"));
    }
    let epsilon = match &regime.epsilon {
        Some(text) => match Rational::parse_weight(text) {
            Some(eps) if eps > Rational::from_count(0) => Some(eps),
            _ => return usage(format!("--epsilon must be a positive rational, got `{text}`")),
        },
        None => None,
    };
    let trace = match &regime.trace {
        Some(text) => match TraceLevel::parse(text) {
            Some(level) => level,
            None => return usage(format!("unknown trace level `{text}`")),
        },
        None => TraceLevel::from_env(),
    };
    let mut params = ClusterParams::default()
        .with_mu(regime.mu)
        .with_seed(regime.seed)
        .with_retries(regime.retries)
        .with_trace(trace);
    params.c = regime.c;
    params.eta = regime.eta;
    params.machines = regime.machines;
    params.memory_budget = regime.budget;
    params.strict_mpc = regime.strict_mpc;
    let knobs = Knobs { epsilon, b: regime.b, kappa: regime.kappa, group_cap: regime.group_cap };
    Ok((params, knobs))
}

/// Fills the verdict, objective and, when asked, the oracle comparison.
fn score(
    report: &mut RunReport,
    algorithm: Algorithm,
    instance: &Instance,
    solution: &Solution,
    knobs: &Knobs,
    oracle: bool,
) {
    let (verdict, objective) = algorithm::check(algorithm, instance, solution, knobs);
    report.verdict = verdict_text(&verdict);
    report.objective = objective.as_ref().map(Exact::new);
    report.factor = algorithm::factor(algorithm, instance, knobs).as_ref().map(Exact::new);
    if !oracle {
        return;
    }
    report.oracle = match algorithm::oracle(algorithm, instance, knobs) {
        None => Some(OracleValue::Unavailable { notice: format!("no exact oracle for {}", algorithm.name()) }),
        Some(Err(e)) => Some(OracleValue::Unavailable { notice: format!("TooLarge: {e}") }),
        Some(Ok(opt)) => {
            if let Some(obj) = &objective {
                let ratio = algorithm::ratio(algorithm.sense(), obj, &opt);
                report.ratio = Some(Exact::from_ratio(ratio.as_ref()));
                if let Some(f) = algorithm::factor(algorithm, instance, knobs) {
                    report.within_factor = Some(verdict.is_feasible() && ratio.is_some_and(|r| r <= f));
                }
            }
            Some(OracleValue::Value(Exact::new(&opt)))
        }
    };
}

fn verdict_text(verdict: &Verdict) -> String {
    match verdict {
        Verdict::Feasible => "feasible".into(),
        Verdict::Infeasible(v) => format!("infeasible: {v}"),
        Verdict::Malformed(msg) => format!("malformed: {msg}"),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let (params, knobs) = setup(args.algorithm, &args.regime)?;
    let instance = load(args.algorithm, &args.instance)?;
    let digest = instance.digest();
    let outcome = match algorithm::run(args.algorithm, &instance, &params, &knobs) {
        Ok(out) => out,
        Err(e) => {
            if let Some(trace) = e.trace() {
                emit(None, trace, args.trace_out.as_deref())?;
            }
            return Err(e.into());
        }
    };
    let mut report = RunReport::from_trace(&args.algorithm, digest, &outcome.trace, outcome.iterations);
    score(&mut report, args.algorithm, &instance, &outcome.solution, &knobs, args.oracle);
    if let Some(path) = &args.solution_out {
        write(path, &outcome.solution.render())?;
    }
    emit(Some(&report), &outcome.trace, args.trace_out.as_deref())
}

/// Prints `{"report", "trace"}`, or the report alone when the trace goes to a file.
fn emit(report: Option<&RunReport>, trace: &Trace, trace_out: Option<&Path>) -> Result<(), Failure> {
    #[derive(serde::Serialize)]
    struct Output<'a> {
        report: Option<&'a RunReport>,
        #[serde(skip_serializing_if = "Option::is_none")]
        trace: Option<&'a Trace>,
    }
    let embedded = match trace_out {
        Some(path) => {
            write(path, &(to_json(trace) + "\n"))?;
            None
        }
        None => Some(trace),
    };
    out(&(to_json(&Output { report, trace: embedded }) + "\n"));
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let (params, knobs) = setup(args.algorithm, &args.regime)?;
    let instance = load(args.algorithm, &args.instance)?;
    let solution = match &args.solution {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Solution::from_file(io::parse_solution(&text)?)
        }
        None => algorithm::run(args.algorithm, &instance, &params, &knobs)?.solution,
    };
    let (verdict, objective) = algorithm::check(args.algorithm, &instance, &solution, &knobs);
    let mut pass = verdict.is_feasible();
    let mut text = String::new();
    let _ = writeln!(text, "algorithm: {} ({})", args.algorithm.name(), args.algorithm.bound());
    let _ = writeln!(text, "verdict: {}", verdict_text(&verdict));
    if let Some(obj) = &objective {
        let _ = writeln!(text, "objective: {} ({})", obj, report::decimal(obj));
    }
    if args.against_oracle && pass {
        match algorithm::oracle(args.algorithm, &instance, &knobs) {
            None => {
                let _ = writeln!(text, "oracle: none for {}; validity only", args.algorithm.name());
            }
            Some(Err(e)) => {
                let _ = writeln!(text, "oracle: TooLarge ({e}); validity only");
            }
            Some(Ok(opt)) => {
                let _ = writeln!(text, "oracle: {} ({})", opt, report::decimal(&opt));
                let obj = objective.clone().unwrap_or_else(|| Rational::from_count(0));
                let ratio = algorithm::ratio(args.algorithm.sense(), &obj, &opt);
                let factor = algorithm::factor(args.algorithm, &instance, &knobs).expect("oracle implies a factor");
                let ok = ratio.as_ref().is_some_and(|r| *r <= factor);
                let shown = Exact::from_ratio(ratio.as_ref());
                let cmp = if ok { "<=" } else { ">" };
                let _ = writeln!(
                    text,
                    "ratio: {} ({}) {cmp} {} ({})",
                    shown.exact,
                    shown.decimal,
                    factor,
                    report::decimal(&factor)
                );
                pass &= ok;
            }
        }
    }
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    out(&text);
    if pass {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let (params, knobs) = setup(args.algorithm, &args.regime)?;
    let instance = load(args.algorithm, &args.instance)?;
    let optimum = algorithm::oracle(args.algorithm, &instance, &knobs).and_then(Result::ok);
    let sense: Sense = args.algorithm.sense();
    let mut csv = String::from("seed,rounds,peak_memory,objective,ratio\n");
    for seed in args.regime.seed..args.regime.seed + args.seeds {
        let params = params.clone().with_seed(seed);
        match algorithm::run(args.algorithm, &instance, &params, &knobs) {
            Ok(run) => {
                let (_, objective) = algorithm::check(args.algorithm, &instance, &run.solution, &knobs);
                let obj = objective.as_ref().map(ToString::to_string).unwrap_or_default();
                let ratio = match (&optimum, objective) {
                    (Some(opt), Some(o)) => Exact::from_ratio(algorithm::ratio(sense, &o, opt).as_ref()).decimal,
                    _ => String::new(),
                };
                let _ = writeln!(csv, "{seed},{},{},{obj},{ratio}", run.trace.total_rounds, run.trace.peak_memory);
            }
            Err(AlgoError::RetriesExhausted { trace, .. }) => {
                let _ = writeln!(csv, "{seed},{},{},FAILED,", trace.total_rounds, trace.peak_memory);
            }
            Err(e) => return Err(e.into()),
        }
    }
    out(&csv);
    Ok(())
}
