//! `walkbound` command line: generate instances, run policies, sweep sizes,
//! search worst cases, run verification suites, and dump or replay traces.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 run failure (not covered
//! within the step cap, or an engine error), 4 verification failure.

mod instance;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use walkbound::analysis::metrics::metrics;
use walkbound::analysis::{sweep_row, SweepRow, TieSpec};
use walkbound::generators::Family;
use walkbound::io::{instance_to_json, trace_from_json, trace_to_json, MetricsJson};
use walkbound::oracle::{worst_case_cover, DEFAULT_STEP_CAP};
use walkbound::verify::run_suite;
use walkbound::{Policy, TieBreaker, Trace, Walk};

use instance::{FamilyParams, Source};

const STEP_CAP_ENV: &str = "WALKBOUND_STEP_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Run(String),
    #[error("{0}")]
    Verify(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 3,
            CliError::Verify(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "walkbound",
    version,
    about = "Simulate and verify local graph-exploration policies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated instance as graph JSON.
    Generate(GenerateArgs),
    /// Run one policy and report metrics JSON.
    Run(RunArgs),
    /// Run a family over a parameter range and write CSV.
    Sweep(SweepArgs),
    /// Exhaustive worst case over tie-break choices.
    Oracle(OracleArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Dump a run's trace, or replay a saved one.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieKind {
    /// The instance's bundled priorities.
    StaticPriority,
    LowestIndex,
    SeededRandom,
}

#[derive(Debug, Clone, Args)]
struct TieArgs {
    #[arg(long, value_enum, default_value = "static-priority")]
    tiebreak: TieKind,
    /// Seed for seeded-random tie-breaking.
    #[arg(long)]
    seed: Option<u64>,
}

impl TieArgs {
    fn spec(&self) -> Result<TieSpec, CliError> {
        match (self.tiebreak, self.seed) {
            (TieKind::SeededRandom, Some(seed)) => Ok(TieSpec::Random { seed }),
            (TieKind::SeededRandom, None) => {
                Err(CliError::Usage("seeded-random needs --seed".into()))
            }
            (_, Some(_)) => Err(CliError::Usage(
                "--seed only applies to seeded-random".into(),
            )),
            (TieKind::StaticPriority, None) => Ok(TieSpec::Bundled),
            (TieKind::LowestIndex, None) => Ok(TieSpec::LowestIndex),
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    family: Family,
    #[command(flatten)]
    params: FamilyParams,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    policy: Policy,
    #[command(flatten)]
    tie: TieArgs,
    /// Maximum moves before giving up on coverage.
    #[arg(long, env = STEP_CAP_ENV, default_value_t = 10_000_000)]
    cap: u64,
    /// Run exactly this many moves instead of stopping at coverage.
    #[arg(long)]
    steps: Option<u64>,
    /// Metrics file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the trace JSON here.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    family: Family,
    #[command(flatten)]
    params: FamilyParams,
    /// Parameter to vary, as `name=4,8,16` or `name=1..10` (inclusive).
    #[arg(long)]
    vary: String,
    /// Policies to run, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    policy: Vec<Policy>,
    #[command(flatten)]
    tie: TieArgs,
    /// Runs per instance and policy; seeded-random uses seed + repeat.
    #[arg(long, default_value_t = 1)]
    repeats: u64,
    #[arg(long, env = STEP_CAP_ENV, default_value_t = 10_000_000)]
    cap: u64,
    /// Latency window as a multiple of the cover time; 0 skips latency.
    #[arg(long, default_value_t = 4)]
    window_factor: u64,
    /// CSV file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    policy: Policy,
    #[arg(long, env = STEP_CAP_ENV, default_value_t = DEFAULT_STEP_CAP)]
    cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    /// Print verdicts as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    policy: Policy,
    #[command(flatten)]
    tie: TieArgs,
    #[arg(long, env = STEP_CAP_ENV, default_value_t = 10_000_000)]
    cap: u64,
    /// Run exactly this many moves instead of stopping at coverage.
    #[arg(long)]
    steps: Option<u64>,
    /// Replay this trace file and print its metrics instead of running.
    #[arg(long, conflicts_with_all = ["steps", "tiebreak", "seed"])]
    replay: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut s = io::stdout().lock();
            writeln!(s, "{text}").map_err(|e| CliError::Run(e.to_string()))
        }
    }
}

fn check_cap(cap: u64) -> Result<(), CliError> {
    if cap == 0 {
        Err(CliError::Usage("step cap must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output types always serialize")
}

fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let inst = a.params.build(a.family)?;
    emit(a.out.as_deref(), &instance_to_json(&inst))
}

/// Runs to coverage or for a fixed number of moves, recording the trace.
fn execute(
    source: &Source,
    policy: Policy,
    tie: &TieArgs,
    cap: u64,
    steps: Option<u64>,
) -> Result<(Trace, MetricsJson), CliError> {
    check_cap(cap)?;
    let inst = source.load()?;
    let tb = tie.spec()?.build(&inst, 0);
    let mut w = Walk::new(&inst.graph, policy, tb, inst.start)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .recording();
    let report = match steps {
        Some(n) => w.run_steps(n),
        None => w.run_until_covered(cap),
    }
    .map_err(|e| CliError::Run(e.to_string()))?;
    Ok((w.trace(), MetricsJson::from(&report)))
}

fn run(a: RunArgs) -> Result<(), CliError> {
    let (trace, m) = execute(&a.source, a.policy, &a.tie, a.cap, a.steps)?;
    if let Some(p) = &a.trace_out {
        emit(Some(p), &trace_to_json(&trace.moves))?;
    }
    emit(a.out.as_deref(), &to_json(&m))?;
    if m.covered {
        Ok(())
    } else {
        Err(CliError::Run(format!(
            "not covered after {} moves",
            m.steps
        )))
    }
}

/// Parses `name=a,b,c` or `name=a..b` (inclusive; empty when b < a).
fn parse_vary(s: &str) -> Result<(String, Vec<u64>), CliError> {
    let bad = || CliError::Usage(format!("bad --vary `{s}`; use name=4,8,16 or name=1..10"));
    let (name, spec) = s.split_once('=').ok_or_else(bad)?;
    let mut values = Vec::new();
    for part in spec.split(',').filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
                values.extend(lo..=hi);
            }
            None => values.push(part.trim().parse().map_err(|_| bad())?),
        }
    }
    Ok((name.trim().to_string(), values))
}

const CSV_HEADER: [&str; 11] = [
    "family",
    "n",
    "m",
    "delta",
    "d",
    "policy",
    "tiebreak",
    "seed",
    "cover_time",
    "max_freq",
    "max_latency",
];

fn sweep(a: SweepArgs) -> Result<(), CliError> {
    check_cap(a.cap)?;
    let (name, values) = parse_vary(&a.vary)?;
    let tie = a.tie.spec()?;
    let mut instances = Vec::with_capacity(values.len());
    for v in values {
        let mut p = a.params.clone();
        p.set(&name, v)?;
        instances.push(p.build(a.family)?);
    }
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut failures = 0;
    for inst in &instances {
        for &policy in &a.policy {
            for r in 0..a.repeats {
                let row =
                    sweep_row(inst, policy, tie, r, a.cap, a.window_factor).unwrap_or_else(|e| {
                        eprintln!("{} {policy}: {e}", inst.label());
                        let stats = inst.graph.stats();
                        SweepRow {
                            family: inst.family.to_string(),
                            n: inst.graph.node_count(),
                            m: inst.graph.edge_count(),
                            delta: stats.max_degree,
                            d: stats.diameter,
                            policy: policy.to_string(),
                            tiebreak: tie.name().into(),
                            seed: tie.build(inst, r).seed(),
                            cover_time: None,
                            max_freq: 0,
                            max_latency: None,
                        }
                    });
                if row.cover_time.is_none() {
                    failures += 1;
                }
                rows.push(row);
            }
        }
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Run(e.to_string());
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for row in &rows {
        w.serialize(row).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Run(e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    match &a.out {
        Some(p) => fs::write(p, &text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::Run(format!(
            "{failures} runs did not cover within the cap"
        )))
    }
}

fn oracle(a: OracleArgs) -> Result<(), CliError> {
    check_cap(a.cap)?;
    let inst = a.source.load()?;
    let r = worst_case_cover(&inst.graph, a.policy, inst.start, a.cap)
        .map_err(|e| CliError::Run(e.to_string()))?;
    emit(a.out.as_deref(), &to_json(&r))?;
    if r.lower_bound_only {
        Err(CliError::Run(format!(
            "search reached the cap of {}; result is a lower bound",
            a.cap
        )))
    } else {
        Ok(())
    }
}

fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let verdicts = run_suite(&a.suite).map_err(|e| CliError::Usage(e.to_string()))?;
    if a.json {
        println!("{}", to_json(&verdicts));
    } else {
        for v in &verdicts {
            println!(
                "{} {} {}",
                if v.pass { "PASS" } else { "FAIL" },
                v.name,
                v.details
            );
        }
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Verify(format!(
            "{failed} of {} checks failed",
            verdicts.len()
        )))
    }
}

fn trace(a: TraceArgs) -> Result<(), CliError> {
    match &a.replay {
        None => {
            let (trace, _) = execute(&a.source, a.policy, &a.tie, a.cap, a.steps)?;
            emit(a.out.as_deref(), &trace_to_json(&trace.moves))
        }
        Some(path) => {
            let inst = a.source.load()?;
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let moves = trace_from_json(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let trace = Trace {
                start: inst.start,
                policy: a.policy,
                tiebreak: "scripted".into(),
                moves,
            };
            trace
                .validate(&inst.graph)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            // replaying through the engine rejects moves the policy would not make
            let n = trace.moves.len() as u64;
            let mut w = Walk::new(
                &inst.graph,
                a.policy,
                TieBreaker::scripted(trace.moves.clone()),
                inst.start,
            )
            .map_err(|e| CliError::Usage(e.to_string()))?;
            w.run_steps(n).map_err(|e| CliError::Run(e.to_string()))?;
            let m = metrics(&trace, &inst.graph, None);
            emit(a.out.as_deref(), &to_json(&m))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Oracle(a) => oracle(a),
        Command::Verify(a) => verify(a),
        Command::Trace(a) => trace(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("walkbound: {e}");
            ExitCode::from(e.code())
        }
    }
}
