//! The `pivotlab` command line: instance generation, reductions, solvers,
//! DOT export and exhaustive verification over JSON documents.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 resource limit,
//! 3 violated promise, 4 failed verification.

pub mod commands;
pub mod doc;
pub mod generate;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const BUDGET_ENV: &str = "PIVOTLAB_BUDGET";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Promise(String),
    #[error("{0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] pivotlab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Promise(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Core(pivotlab::Error::Resource(_) | pivotlab::Error::EnumerationOverflow { .. }) => 2,
            CliError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pivotlab", version, about = "Pivoting local search experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance document.
    Generate(generate::GenerateArgs),
    /// Apply a reduction; writes PREFIX.target.json and PREFIX.bundle.json.
    Reduce(ReduceArgs),
    /// Run a solver from a start solution and print the trace.
    Solve(SolveArgs),
    /// Write the transition graph of an instance in DOT format.
    ExportDot(ExportArgs),
    /// Check tightness conditions of a reduction bundle by enumeration.
    Verify(VerifyArgs),
    /// Check that a trace document is a valid improving sequence.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionName {
    MaxcutToWis,
    SwopToCircuit,
    MisToWisPivot,
}

impl ReductionName {
    pub fn name(self) -> &'static str {
        match self {
            ReductionName::MaxcutToWis => "maxcut-to-wis",
            ReductionName::SwopToCircuit => "swop-to-circuit",
            ReductionName::MisToWisPivot => "mis-to-wis-pivot",
        }
    }
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub reduction: ReductionName,
    /// Weighted independent set seed instance (mis-to-wis-pivot only).
    #[arg(long)]
    pub seed_instance: Option<PathBuf>,
    /// Start solution of the seed instance as a bit string.
    #[arg(long)]
    pub seed_start: Option<String>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverName {
    Standard,
    PivotBounded,
    FptDistinctWeights,
    OutputBounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    First,
    Best,
    Random,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Bit string, `empty` or `full`.
    #[arg(long, default_value = "empty")]
    pub start: String,
    #[arg(long, value_enum, default_value = "standard")]
    pub solver: SolverName,
    #[arg(long, value_enum, default_value = "first")]
    pub rule: RuleName,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum sequence length for pivot-bounded.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Step budget for the standard solver.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, conflicts_with = "bundle", required_unless_present = "bundle")]
    pub instance: Option<PathBuf>,
    /// Export the bundle's target and shade the distinguished solutions.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// Solution enumeration budget.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Tight,
    LTight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricName {
    Improving,
    Neighborhood,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["tight", "l-tight"])]
    pub checks: Vec<CheckName>,
    /// Overrides the declared distance bound.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Overrides the declared distance metric.
    #[arg(long, value_enum)]
    pub metric: Option<MetricName>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub trace: PathBuf,
}

/// Budget from the flag, then the environment, then `default`.
pub fn budget(flag: Option<u64>, default: u64) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a budget"))),
        Err(_) => Ok(default),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate::run(&a),
        Command::Reduce(a) => commands::reduce(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::ExportDot(a) => commands::export_dot(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Replay(a) => commands::replay(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
