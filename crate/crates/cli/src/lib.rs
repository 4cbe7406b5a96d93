//! The `covercheck` command line: argument parsing, input loading, report
//! envelopes and exit codes. [`run`] is the whole program; `main` only wires
//! it to the process streams.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use covercheck_core::bethe::{
    bethe_partition_function, check_cover_bound, cover_mean, log_partition_function, verify_subdivision_identity,
    BetheOptions, BetheResult, CoverBound, CoverMean, MeanMode, BOUND_TOLERANCE,
};
use covercheck_core::conjecture::{
    projected_generating_polynomial, reverify, search_counterexample, AggregateReport, Checker,
};
use covercheck_core::covers::{
    assignment_count, build_cover, enumerate_assignments, switching, AssignmentDoc, DEFAULT_ENUMERATION_CAP,
};
use covercheck_core::families::{count_structures, generating_polynomial};
use covercheck_core::graph::parse_graph;
use covercheck_core::poly::PolynomialDoc;
use covercheck_core::{
    CheckOptions, CheckReport, Graph, PairwiseModel, Polynomial, Status, StructureFamily, VoltageAssignment,
};

pub const TOOL: &str = "covercheck";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest relative error accepted by `bethe subdivision`.
pub const SUBDIVISION_TOLERANCE: f64 = 1e-10;

/// Default listing cap for `covers enumerate`.
pub const DEFAULT_LISTING_CAP: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "covercheck", version, about = "Exact checks of cover-polynomial dominance and Bethe bounds")]
pub struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dominance checks between projected cover polynomials and powers.
    #[command(subcommand)]
    Conjecture(ConjectureCommand),
    /// Voltage assignments of a base graph.
    #[command(subcommand)]
    Covers(CoversCommand),
    /// Generating polynomials.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Partition functions of binary pairwise models.
    #[command(subcommand)]
    Bethe(BetheCommand),
}

#[derive(Debug, Subcommand)]
enum ConjectureCommand {
    /// Check one cover, every cover, or a seeded sample of covers.
    Check(CheckArgs),
    /// Look for a violating cover over several graphs and degrees.
    Search(SearchArgs),
}

#[derive(Debug, Subcommand)]
enum CoversCommand {
    /// List voltage assignments in rank order.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Subcommand)]
enum PolyCommand {
    /// Print a generating polynomial, its power, or a projected cover polynomial.
    Print(PrintArgs),
}

#[derive(Debug, Subcommand)]
enum BetheCommand {
    /// Compare the exact partition function with the Bethe approximation.
    Compare(CompareArgs),
    /// Mean partition function over M-covers.
    CoverMean(CoverMeanArgs),
    /// Check the subdivision-graph independent-set identity.
    Subdivision(ModelArg),
    /// Compare `Z(G)^M` with the partition function of covers.
    CoverBound(CoverBoundArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    IndependentSet,
    Matching,
    PerfectMatching,
    Eulerian,
}

impl From<Family> for StructureFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::IndependentSet => StructureFamily::IndependentSet,
            Family::Matching => StructureFamily::Matching,
            Family::PerfectMatching => StructureFamily::PerfectMatching,
            Family::Eulerian => StructureFamily::EulerianSubset,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["assignment", "all_covers", "samples"])))]
struct CheckArgs {
    /// Base graph edge list.
    #[arg(long)]
    graph: PathBuf,
    /// Cover degree.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long, value_enum)]
    family: Family,
    /// Voltage assignment JSON.
    #[arg(long)]
    assignment: Option<PathBuf>,
    /// Check every assignment of degree M.
    #[arg(long)]
    all_covers: bool,
    /// Check this many sampled assignments; needs --seed.
    #[arg(long, requires = "seed")]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Refuse to enumerate more assignments than this.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Check one representative per switching class.
    #[arg(long, requires = "all_covers")]
    dedup: bool,
    /// Skip graphs outside the family's hypothesis instead of checking them.
    #[arg(long)]
    skip_inadmissible: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Base graph edge list; repeatable.
    #[arg(long = "graph", required = true)]
    graphs: Vec<PathBuf>,
    /// Largest cover degree tried.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m_max: u32,
    #[arg(long, value_enum)]
    family: Family,
    /// Samples per (graph, degree) beyond the enumeration cap.
    #[arg(long, default_value_t = 1000)]
    budget: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[arg(long)]
    dedup: bool,
    #[arg(long)]
    skip_inadmissible: bool,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long, default_value_t = DEFAULT_LISTING_CAP)]
    cap: u64,
    /// List one representative per switching class.
    #[arg(long)]
    dedup: bool,
}

#[derive(Debug, Args)]
struct PrintArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    family: Family,
    /// Print the M-th power instead.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), conflicts_with = "assignment")]
    power: Option<u32>,
    /// Print the projected polynomial of this cover instead.
    #[arg(long)]
    assignment: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArg {
    /// Model JSON.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    restarts: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CoverMeanArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Average over every cover (the default).
    #[arg(long, conflicts_with = "samples")]
    exact: bool,
    /// Average over this many sampled covers; needs --seed.
    #[arg(long, requires = "seed")]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["assignment", "all_covers"])))]
struct CoverBoundArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    assignment: Option<PathBuf>,
    /// Check every cover of degree --m.
    #[arg(long, requires = "m")]
    all_covers: bool,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

/// Failures that end the run with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {reason}")]
    Input { path: String, reason: String },
    #[error(transparent)]
    Core(#[from] covercheck_core::Error),
    #[error("{0}")]
    Other(String),
}

impl From<covercheck_core::CoverError> for CliError {
    fn from(e: covercheck_core::CoverError) -> Self {
        CliError::Core(e.into())
    }
}

impl From<covercheck_core::BetheError> for CliError {
    fn from(e: covercheck_core::BetheError) -> Self {
        CliError::Core(e.into())
    }
}

/// Overall outcome; the exit code is a function of this alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Skipped,
    Ok,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Violated => 1,
            Verdict::Holds | Verdict::Skipped | Verdict::Ok => 0,
        }
    }

    fn of(status: Status) -> Self {
        match status {
            Status::Holds => Verdict::Holds,
            Status::Violated => Verdict::Violated,
            Status::SkippedInadmissible => Verdict::Skipped,
        }
    }

    fn holds_if(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: &'static str,
    pub path: String,
    pub sha256: String,
}

/// Every report: tool identity, the command, digests of all input files,
/// effective parameters, the verdict and the command-specific result.
#[derive(Debug, Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    inputs: &'a [InputDigest],
    params: serde_json::Value,
    status: Verdict,
    result: serde_json::Value,
}

struct Outcome {
    command: &'static str,
    params: serde_json::Value,
    verdict: Verdict,
    result: serde_json::Value,
    summary: String,
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, role: &'static str, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| input_error(path, e))?;
        self.0.push(InputDigest { role, path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) });
        String::from_utf8(bytes).map_err(|e| input_error(path, e))
    }

    fn graph(&mut self, path: &Path) -> Result<Graph, CliError> {
        let text = self.read("graph", path)?;
        parse_graph(&text).map_err(|e| input_error(path, e))
    }

    fn model(&mut self, path: &Path) -> Result<PairwiseModel, CliError> {
        let text = self.read("model", path)?;
        PairwiseModel::from_json(&text).map_err(|e| input_error(path, e))
    }

    fn assignment(&mut self, g: &Graph, path: &Path) -> Result<VoltageAssignment, CliError> {
        let text = self.read("assignment", path)?;
        let doc: AssignmentDoc = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
        VoltageAssignment::from_doc(g, &doc).map_err(|e| input_error(path, e))
    }
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input { path: path.display().to_string(), reason: e.to_string() }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn seconds(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

/// Parses `argv`, runs the command, writes the report and returns the exit
/// code: 0 when every check holds, 1 on a violation or failed bound, 2 on
/// usage or input errors.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut inputs = Inputs(Vec::new());
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &mut inputs)),
            Err(e) => Err(CliError::Other(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command, &mut inputs),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };

    let envelope = Envelope {
        tool: TOOL,
        version: VERSION,
        command: outcome.command,
        inputs: &inputs.0,
        params: outcome.params,
        status: outcome.verdict,
        result: outcome.result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("report serializes");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => fs::write(path, text.as_bytes()).map_err(|e| input_error(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Other(e.to_string())),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    if !cli.quiet {
        let _ = writeln!(stderr, "{}: {}", outcome.command, outcome.summary);
    }
    outcome.verdict.exit_code()
}

fn dispatch(command: &Command, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    match command {
        Command::Conjecture(ConjectureCommand::Check(a)) => conjecture_check(a, inputs),
        Command::Conjecture(ConjectureCommand::Search(a)) => conjecture_search(a, inputs),
        Command::Covers(CoversCommand::Enumerate(a)) => covers_enumerate(a, inputs),
        Command::Poly(PolyCommand::Print(a)) => poly_print(a, inputs),
        Command::Bethe(BetheCommand::Compare(a)) => bethe_compare(a, inputs),
        Command::Bethe(BetheCommand::CoverMean(a)) => bethe_cover_mean(a, inputs),
        Command::Bethe(BetheCommand::Subdivision(a)) => bethe_subdivision(a, inputs),
        Command::Bethe(BetheCommand::CoverBound(a)) => bethe_cover_bound(a, inputs),
    }
}

/// A single-cover report with its witnesses independently recounted.
#[derive(Serialize)]
struct VerifiedReport<'a> {
    #[serde(flatten)]
    report: &'a CheckReport,
    witness_verified: bool,
}

#[derive(Serialize)]
struct VerifiedAggregate<'a> {
    #[serde(flatten)]
    report: &'a AggregateReport,
    witness_verified: Option<bool>,
}

fn conjecture_check(a: &CheckArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let g = inputs.graph(&a.graph)?;
    let family = StructureFamily::from(a.family);
    let m = a.m as usize;
    let options = CheckOptions { cap: a.cap, dedup: a.dedup, skip_inadmissible: a.skip_inadmissible };
    let checker = Checker::new(&g, family, m, options)?;
    let mut params = json!({
        "family": family,
        "m": m,
        "cap": a.cap,
        "dedup": a.dedup,
        "skip_inadmissible": a.skip_inadmissible,
    });

    if let Some(path) = &a.assignment {
        let assignment = inputs.assignment(&g, path)?;
        params["mode"] = json!("single");
        let report = checker.check(&assignment)?;
        let verified = reverify(&g, &report)?;
        let summary = format!(
            "{} on {} vertices, M={}: {} ({} violating monomials) in {}",
            family,
            g.vertex_count(),
            m,
            status_word(report.status),
            report.violations.len(),
            seconds(report.elapsed)
        );
        let verdict = if verified { Verdict::of(report.status) } else { Verdict::Violated };
        return Ok(Outcome {
            command: "conjecture check",
            params,
            verdict,
            result: to_value(&VerifiedReport { report: &report, witness_verified: verified }),
            summary,
        });
    }

    let report = if let Some(count) = a.samples {
        params["mode"] = json!("sampled");
        params["samples"] = json!(count);
        params["seed"] = json!(a.seed);
        checker.check_sampled(count, a.seed.expect("clap enforces --seed"))?
    } else {
        params["mode"] = json!("all_covers");
        checker.check_all()?
    };
    let verified = report.first_violation.as_ref().map(|w| reverify(&g, w)).transpose()?;
    let summary = format!(
        "{} on {} vertices, M={}: {} covers checked, {} violated ({}) in {}",
        family,
        g.vertex_count(),
        m,
        report.checked,
        report.violated,
        status_word(report.status),
        seconds(report.elapsed)
    );
    Ok(Outcome {
        command: "conjecture check",
        params,
        verdict: Verdict::of(report.status),
        result: to_value(&VerifiedAggregate { report: &report, witness_verified: verified }),
        summary,
    })
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Violated => "violated",
        Status::SkippedInadmissible => "skipped (inadmissible)",
    }
}

fn conjecture_search(a: &SearchArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let graphs = a.graphs.iter().map(|p| inputs.graph(p)).collect::<Result<Vec<_>, _>>()?;
    let family = StructureFamily::from(a.family);
    let options = CheckOptions { cap: a.cap, dedup: a.dedup, skip_inadmissible: a.skip_inadmissible };
    let found = search_counterexample(&graphs, a.m_max as usize, family, a.budget, a.seed, options)?;
    let params = json!({
        "family": family,
        "m_max": a.m_max,
        "budget": a.budget,
        "seed": a.seed,
        "cap": a.cap,
        "dedup": a.dedup,
        "skip_inadmissible": a.skip_inadmissible,
    });
    let (verdict, result, summary) = match &found {
        Some(w) => {
            let graph_index = graphs.iter().position(|g| g.digest() == w.graph_digest).expect("witness graph");
            let verified = reverify(&graphs[graph_index], w)?;
            (
                Verdict::Violated,
                json!({ "found": true, "graph_index": graph_index, "witness": w, "witness_verified": verified }),
                format!("violation on graph {} with M={}", graph_index, w.m),
            )
        }
        None => (
            Verdict::Holds,
            json!({ "found": false }),
            format!("no violation over {} graphs up to M={}", graphs.len(), a.m_max),
        ),
    };
    Ok(Outcome { command: "conjecture search", params, verdict, result, summary })
}

#[derive(Serialize)]
struct ListedAssignment {
    rank: String,
    trivial: bool,
    assignment: AssignmentDoc,
}

fn covers_enumerate(a: &EnumerateArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let g = inputs.graph(&a.graph)?;
    let m = a.m as usize;
    let listed: Vec<ListedAssignment> = if a.dedup {
        let forest = switching::Forest::new(&g);
        let reps = assignment_count(forest.cotree_edges(), m)
            .filter(|&c| c <= a.cap as u128)
            .ok_or_else(|| covercheck_core::CoverError::TooMany {
                count: format!("({}!)^{}", m, forest.cotree_edges()),
                cap: a.cap,
            })?;
        (0..reps)
            .map(|r| (r, switching::gauge_fixed_from_rank(&g, &forest, m, r)))
            .filter(|(_, v)| switching::canonical(&g, &forest, v) == *v)
            .map(|(r, v)| ListedAssignment { rank: r.to_string(), trivial: v.is_trivial(), assignment: v.to_doc(&g) })
            .collect()
    } else {
        enumerate_assignments(&g, m, a.cap)?
            .enumerate()
            .map(|(r, v)| ListedAssignment { rank: r.to_string(), trivial: v.is_trivial(), assignment: v.to_doc(&g) })
            .collect()
    };
    let total = assignment_count(g.edge_count(), m).map_or_else(|| "overflow".to_string(), |t| t.to_string());
    let summary = format!("{} assignments listed of {} total", listed.len(), total);
    Ok(Outcome {
        command: "covers enumerate",
        params: json!({ "m": m, "cap": a.cap, "dedup": a.dedup }),
        verdict: Verdict::Ok,
        result: json!({ "total": total, "listed": listed.len(), "assignments": listed }),
        summary,
    })
}

#[derive(Serialize)]
struct PolyResult<'a> {
    text: String,
    terms: usize,
    structures: String,
    polynomial: &'a PolynomialDoc,
}

fn poly_print(a: &PrintArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let g = inputs.graph(&a.graph)?;
    let family = StructureFamily::from(a.family);
    let mut params = json!({ "family": family });
    let p: Polynomial = if let Some(path) = &a.assignment {
        let assignment = inputs.assignment(&g, path)?;
        params["mode"] = json!("projected");
        params["m"] = json!(assignment.m());
        projected_generating_polynomial(&build_cover(&g, &assignment)?, family)
    } else if let Some(m) = a.power {
        params["mode"] = json!("power");
        params["m"] = json!(m);
        generating_polynomial(&g, family).pow(m)
    } else {
        params["mode"] = json!("base");
        generating_polynomial(&g, family)
    };
    let structures = if a.assignment.is_none() && a.power.is_none() {
        count_structures(&g, family)
    } else {
        p.terms().map(|(_, c)| c).sum()
    };
    let text = p.to_string();
    let doc = p.to_doc();
    let summary = text.clone();
    Ok(Outcome {
        command: "poly print",
        params,
        verdict: Verdict::Ok,
        result: to_value(&PolyResult { text, terms: p.len(), structures: structures.to_string(), polynomial: &doc }),
        summary,
    })
}

#[derive(Serialize)]
struct CompareResult<'a> {
    attractive: bool,
    log_z: f64,
    z: f64,
    log_z_b: f64,
    z_b: f64,
    ratio: f64,
    /// `Z ≥ Z_B` within the relative slack; reported for attractive models.
    bound_holds: Option<bool>,
    bethe: &'a BetheResult,
}

fn bethe_compare(a: &CompareArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let model = inputs.model(&a.model)?;
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(CliError::Other(format!("--tol must be positive, got {}", a.tol)));
    }
    let opts = BetheOptions { restarts: a.restarts as usize, tolerance: a.tol, max_iters: a.max_iters, seed: a.seed };
    let log_z = log_partition_function(&model)?;
    let res = bethe_partition_function(&model, &opts);
    let attractive = model.is_attractive();
    let holds = res.log_z_b <= log_z + BOUND_TOLERANCE.ln_1p();
    let bound_holds = attractive.then_some(holds);
    let verdict = match bound_holds {
        Some(ok) => Verdict::holds_if(ok),
        None => Verdict::Ok,
    };
    let summary = format!(
        "Z = {:.12e}, Z_B = {:.12e}, Z_B/Z = {:.9}{}",
        log_z.exp(),
        res.z_b,
        (res.log_z_b - log_z).exp(),
        if res.converged { "" } else { " (not converged)" }
    );
    let result = CompareResult {
        attractive,
        log_z,
        z: log_z.exp(),
        log_z_b: res.log_z_b,
        z_b: res.z_b,
        ratio: (res.log_z_b - log_z).exp(),
        bound_holds,
        bethe: &res,
    };
    Ok(Outcome { command: "bethe compare", params: to_value(&opts), verdict, result: to_value(&result), summary })
}

#[derive(Serialize)]
struct CoverMeanResult<'a> {
    attractive: bool,
    /// `⟨Z(G̃)⟩^{1/M} ≤ Z(G)` within the relative slack; reported for
    /// attractive models.
    bound_holds: Option<bool>,
    #[serde(flatten)]
    mean: &'a CoverMean,
}

fn bethe_cover_mean(a: &CoverMeanArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let model = inputs.model(&a.model)?;
    let m = a.m as usize;
    let (mode, params) = match a.samples {
        Some(count) => (
            MeanMode::Sampled { count, seed: a.seed.expect("clap enforces --seed") },
            json!({ "m": m, "mode": "sampled", "samples": count, "seed": a.seed }),
        ),
        None => (MeanMode::Exact { cap: a.cap }, json!({ "m": m, "mode": "exact", "cap": a.cap })),
    };
    let mean = cover_mean(&model, m, mode)?;
    let attractive = model.is_attractive();
    let bound_holds = attractive.then_some(mean.log_mean / m as f64 <= mean.log_z + BOUND_TOLERANCE.ln_1p());
    let verdict = bound_holds.map_or(Verdict::Ok, Verdict::holds_if);
    let summary = format!(
        "{} covers, <Z>^(1/{}) = {:.12e}, Z = {:.12e}",
        mean.covers, m, mean.mean_root, mean.z
    );
    let result = to_value(&CoverMeanResult { attractive, bound_holds, mean: &mean });
    Ok(Outcome { command: "bethe cover-mean", params, verdict, result, summary })
}

fn bethe_subdivision(a: &ModelArg, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let model = inputs.model(&a.model)?;
    let err = verify_subdivision_identity(&model)?;
    let holds = err <= SUBDIVISION_TOLERANCE;
    Ok(Outcome {
        command: "bethe subdivision",
        params: json!({ "tolerance": SUBDIVISION_TOLERANCE }),
        verdict: Verdict::holds_if(holds),
        result: json!({ "relative_error": err, "holds": holds }),
        summary: format!("relative error {err:.3e}"),
    })
}

#[derive(Serialize)]
struct BoundEntry {
    rank: Option<String>,
    trivial: bool,
    assignment: AssignmentDoc,
    bound: CoverBound,
}

fn bethe_cover_bound(a: &CoverBoundArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let model = inputs.model(&a.model)?;
    let g = model.graph().clone();
    let entry = |rank: Option<u128>, v: &VoltageAssignment| -> Result<BoundEntry, CliError> {
        Ok(BoundEntry {
            rank: rank.map(|r| r.to_string()),
            trivial: v.is_trivial(),
            assignment: v.to_doc(&g),
            bound: check_cover_bound(&model, v)?,
        })
    };
    let (entries, params) = if let Some(path) = &a.assignment {
        let v = inputs.assignment(&g, path)?;
        (vec![entry(None, &v)?], json!({ "mode": "single", "m": v.m() }))
    } else {
        let m = a.m.expect("clap enforces --m") as usize;
        let list = enumerate_assignments(&g, m, a.cap)?
            .enumerate()
            .map(|(r, v)| entry(Some(r as u128), &v))
            .collect::<Result<Vec<_>, _>>()?;
        (list, json!({ "mode": "all_covers", "m": m, "cap": a.cap }))
    };
    let failures = entries.iter().filter(|e| !e.bound.holds).count();
    let equal = entries.iter().filter(|e| e.bound.equal).count();
    let summary = format!("{} covers, {} fail the bound, {} at equality", entries.len(), failures, equal);
    Ok(Outcome {
        command: "bethe cover-bound",
        params,
        verdict: Verdict::holds_if(failures == 0),
        result: json!({
            "tolerance": BOUND_TOLERANCE,
            "checked": entries.len(),
            "failures": failures,
            "equal": equal,
            "covers": entries,
        }),
        summary,
    })
}
