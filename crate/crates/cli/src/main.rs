use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use collatz_cli::reports::{self, NamedReport, TraceMode};
use collatz_cli::table::{Report, ReportFormat};
use collatz_cli::CliError;
use collatz_descent::{Nat, Natural, ScanConfig, DEFAULT_STEP_CAP};

/// First-descent patterns, residue classes and verification scans for the
/// Collatz map.
#[derive(Parser)]
#[command(name = "collatz", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "markdown")]
    format: ReportFormat,
    /// Step limit for every simulated trajectory [env: COLLATZ_STEP_CAP].
    #[arg(long, global = true)]
    step_cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sign of 2^j - 3^i for the cycle lengths worth checking.
    Feasibility {
        #[arg(long, default_value_t = 37)]
        max_length: u32,
    },
    /// Trajectory of one start.
    Trace {
        n: String,
        #[arg(long, value_enum, default_value = "descent")]
        mode: TraceMode,
        /// Adder terms in six-significant-digit scientific notation.
        #[arg(long = "paper-style")]
        rounded: bool,
    },
    /// Every minimal descent pattern of one length.
    Enumerate { length: usize },
    /// Residue class of one O/E pattern.
    Class { pattern: String },
    /// All classes resolved within `depth` halvings.
    Classify {
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// Reuse this cache file, or create it.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Also list residues mod 2^depth that stay unresolved.
        #[arg(long)]
        unresolved: bool,
    },
    /// Verify descent for every n in lo..=hi.
    Scan {
        #[arg(long)]
        lo: u128,
        #[arg(long)]
        hi: u128,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Starts whose descent is longer than that of every smaller start.
    Records {
        #[arg(long)]
        lo: u128,
        #[arg(long)]
        hi: u128,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Fixed reference tables: cycle-length, length6, length8, seq27.
    Report {
        #[arg(value_enum)]
        name: NamedReport,
        #[arg(long = "paper-style")]
        rounded: bool,
    },
}

fn step_cap(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("COLLATZ_STEP_CAP") {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("COLLATZ_STEP_CAP is not a step count: {raw:?}"))),
        Err(_) => Ok(DEFAULT_STEP_CAP),
    }
}

fn scan_config(depth: u32, workers: Option<usize>, cap: u64) -> ScanConfig {
    let config = ScanConfig::default().with_depth(depth).with_step_cap(cap);
    match workers {
        Some(w) => config.with_workers(w),
        None => config,
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let cap = step_cap(cli.step_cap)?;
    match cli.command {
        Command::Feasibility { max_length } => Ok(reports::feasibility(max_length)),
        Command::Trace { n, mode, rounded } => {
            let n = Nat::parse_decimal(&n).ok_or_else(|| CliError::Usage(format!("not a natural number: {n:?}")))?;
            reports::trace(&n, mode, rounded, cap)
        }
        Command::Enumerate { length } => reports::enumerate(length),
        Command::Class { pattern } => reports::class(&pattern),
        Command::Classify {
            depth,
            cache,
            unresolved,
        } => reports::classify(depth, cache.as_deref(), unresolved),
        Command::Scan { lo, hi, depth, workers } => {
            let (report, elapsed) = reports::scan(lo, hi, &scan_config(depth, workers, cap))?;
            eprintln!("scan finished in {elapsed:?}");
            Ok(report)
        }
        Command::Records { lo, hi, workers } => reports::records(lo, hi, &scan_config(0, workers, cap)),
        Command::Report { name, rounded } => reports::named(name, rounded),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
