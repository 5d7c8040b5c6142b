//! Command-line front end: job-set generation, SAG construction and
//! analysis, brute-force exactness verification, and the experiment sweep.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 exactness failure,
//! 3 resource cap exceeded.

mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use sag_core::analysis::build_report;
use sag_core::constructor::{construct_with, ConstructError, ConstructOptions};
use sag_core::generator::{generate, GenParams};
use sag_core::io::{parse_jobset, render_jobset, write_dot, write_report, ReportFormat};
use sag_core::model::{JobSet, PriorityPolicy};
use sag_core::oracle::{exactness_check, scenario_count, OracleError};
use sag_core::Variant;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_INEXACT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sag",
    about = "Schedule-abstraction-graph response-time analysis for non-preemptive job sets",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random job set and write it to a file
    Generate(GenerateArgs),
    /// Construct a SAG from a job-set file and report the analysis
    Construct(ConstructArgs),
    /// Check a construction against brute-force scenario enumeration
    Verify(VerifyArgs),
    /// Run a (utilization x ht-ratio x algorithm) grid and emit a CSV
    Sweep(sweep::SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Original,
    Extended,
    Hybrid,
}

impl From<AlgoArg> for Variant {
    fn from(a: AlgoArg) -> Variant {
        match a {
            AlgoArg::Original => Variant::Original,
            AlgoArg::Extended => Variant::Extended,
            AlgoArg::Hybrid => Variant::Hybrid,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    /// Non-preemptive fixed priority
    Fp,
    /// Non-preemptive earliest deadline first
    Edf,
}

impl From<PolicyArg> for PriorityPolicy {
    fn from(p: PolicyArg) -> PriorityPolicy {
        match p {
            PolicyArg::Fp => PriorityPolicy::NpFp,
            PolicyArg::Edf => PriorityPolicy::NpEdf,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    num_jobs: u32,
    #[arg(long)]
    utilization: u32,
    #[arg(long)]
    ht_ratio: u32,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = sag_core::io::DEFAULT_HORIZON)]
    horizon: i64,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value = "fp")]
    policy: PolicyArg,
    #[arg(long)]
    input: PathBuf,
    /// Write the graph as Graphviz DOT text
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the analysis report
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long, default_value_t = 10_000_000)]
    state_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value = "fp")]
    policy: PolicyArg,
    /// Maximum number of scenarios to enumerate
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    #[arg(long, default_value_t = 10_000_000)]
    state_cap: usize,
}

/// Failures that terminate a command, tagged with their exit code.
enum Failure {
    /// Bad flags or bad input data.
    Input(anyhow::Error),
    /// A configured resource budget was exceeded.
    Resource(anyhow::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Resource(_) => EXIT_RESOURCE,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Resource(e) => e,
        }
    }
}

fn input_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => sweep::cmd_sweep(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn load_jobset(path: &PathBuf) -> Result<JobSet, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)?;
    parse_jobset(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Input)
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Input)
}

fn cmd_generate(args: GenerateArgs) -> Result<u8, Failure> {
    let params = GenParams {
        num_jobs: args.num_jobs,
        utilization_pct: args.utilization,
        ht_ratio_pct: args.ht_ratio,
        seed: args.seed,
        horizon: args.horizon,
    };
    let js = generate(params).map_err(input_err)?;
    write_file(&args.out, &render_jobset(&js))?;
    println!(
        "jobs={} ht_jobs={} out={}",
        js.len(),
        js.ht_count(),
        args.out.display()
    );
    Ok(EXIT_OK)
}

fn map_construct_err(e: ConstructError) -> Failure {
    match e {
        ConstructError::StateCapExceeded { .. } => Failure::Resource(e.into()),
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<u8, Failure> {
    let js = load_jobset(&args.input)?;
    let variant = Variant::from(args.algo);
    let policy = PriorityPolicy::from(args.policy);
    let opts = ConstructOptions {
        state_cap: args.state_cap,
    };

    let started = Instant::now();
    let graph = construct_with(&js, policy, variant, opts).map_err(map_construct_err)?;
    let wall = started.elapsed().as_secs_f64();

    let report = build_report(&js, &graph, wall)
        .context("extracting the report")
        .map_err(Failure::Input)?;
    if let Some(path) = &args.dot {
        write_file(path, &write_dot(&graph))?;
    }
    if let Some(path) = &args.report {
        let format = match args.format {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        };
        write_file(path, &write_report(&js, &report, format))?;
    }
    println!(
        "vertices={} width={} schedulable={} time={:.6}s",
        report.vertex_count, report.max_width, report.schedulable, wall
    );
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let js = load_jobset(&args.input)?;
    let variant = Variant::from(args.algo);
    let policy = PriorityPolicy::from(args.policy);

    // Refuse oversized instances before spending time on construction.
    match scenario_count(&js) {
        Some(count) if count <= args.cap as u128 => {}
        _ => {
            return Err(Failure::Resource(
                OracleError::CountExceedsCap {
                    log10: sag_core::analysis::count_scenarios_log10(&js, Variant::Hybrid)
                        .log10_total,
                    cap: args.cap,
                }
                .into(),
            ))
        }
    }

    let graph = construct_with(
        &js,
        policy,
        variant,
        ConstructOptions {
            state_cap: args.state_cap,
        },
    )
    .map_err(map_construct_err)?;

    let verdict = exactness_check(&graph, &js, policy, args.cap).map_err(|e| match e {
        OracleError::CountExceedsCap { .. } => Failure::Resource(e.into()),
        OracleError::MalformedGraph(_) => Failure::Input(e.into()),
    })?;

    if verdict.passes() {
        if verdict.orderings_match {
            println!("exactness: PASS (intervals exact, orderings match)");
        } else {
            println!("exactness: PASS (intervals exact)");
            if let Some(w) = &verdict.witness {
                println!("note: {w}");
            }
        }
        Ok(EXIT_OK)
    } else {
        println!("exactness: FAIL");
        if let Some(w) = &verdict.witness {
            println!("witness: {w}");
        }
        Ok(EXIT_INEXACT)
    }
}
