//! `infovalue` command-line driver.

mod commands;
mod config;
mod selftest;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use infovalue::{Error, StrategyKind, TimeGridSpec};

#[derive(Parser)]
#[command(name = "infovalue", version, about = "Value of anticipating information for a log-utility investor")]
struct Cli {
    /// Run the built-in smoke tests and exit.
    #[arg(long)]
    selftest: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Classical and insider values with the finiteness verdict.
    Value(Common),
    /// Scan of the x-integral of I(x, t) over a time grid.
    LemmaCheck {
        #[command(flatten)]
        common: Common,
        /// Where to write the summary JSON (default: stderr).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// E[alpha^2(t)] sqrt(t (1 - t)) over a time grid.
    BoundScan(Common),
    /// Monte Carlo log wealth of a strategy.
    Mc {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Trading steps.
        #[arg(long)]
        steps: Option<usize>,
        /// Report 2 log X_fine - log X_coarse from a grid and its midpoint refinement.
        #[arg(long)]
        extrapolate: bool,
        /// Per-path CSV (path, realized_l, log_wealth).
        #[arg(long)]
        paths_csv: Option<PathBuf>,
    },
    /// Monte Carlo E[alpha^2(t)] next to the quadrature value.
    DriftOracle(Common),
    /// Mean of P(L = 1 | M(t)) along simulated paths.
    MartingaleScan(Common),
    /// Same as --selftest.
    Selftest,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo paths.
    #[arg(long)]
    paths: Option<u64>,
    /// Endpoint cutoff for T = 1.
    #[arg(long)]
    eps: Option<f64>,
    /// `linear:a:b:n` or `geometric-to-1:k`.
    #[arg(long)]
    tgrid: Option<TimeGridSpec>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Riskless,
    Classical,
    InsiderInterval,
    InsiderOnesided,
    InsiderExact,
}

impl From<StrategyArg> for StrategyKind {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Riskless => StrategyKind::Riskless,
            StrategyArg::Classical => StrategyKind::Classical,
            StrategyArg::InsiderInterval => StrategyKind::InsiderInterval,
            StrategyArg::InsiderOnesided => StrategyKind::InsiderOnesided,
            StrategyArg::InsiderExact => StrategyKind::InsiderExact,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(Error),
    Io(io::Error),
    /// Outputs were written but some quadrature missed its tolerance.
    Flagged(String),
    Selftest(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(Error::Validation(_) | Error::Domain(_) | Error::SingularTime { .. } | Error::Json(_)) => 2,
            CliError::Core(Error::NonConvergence { .. }) | CliError::Flagged(_) => 3,
            CliError::Core(_) | CliError::Io(_) | CliError::Selftest(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self.code() {
            2 => "config",
            3 => "non-convergence",
            _ => "internal",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Flagged(m) | CliError::Selftest(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

/// Writes `bytes` to `path`, or to stdout when absent.
pub fn emit(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(CliError::Io),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.selftest {
        return selftest::run();
    }
    let Some(command) = cli.command else {
        return Err(CliError::Config("no subcommand given (see --help)".into()));
    };
    match command {
        Command::Value(c) => commands::value(&c),
        Command::LemmaCheck { common, summary } => commands::lemma_check(&common, summary.as_ref()),
        Command::BoundScan(c) => commands::bound_scan(&c),
        Command::Mc {
            common,
            strategy,
            steps,
            extrapolate,
            paths_csv,
        } => commands::mc(&common, strategy.map(Into::into), steps, extrapolate, paths_csv.as_ref()),
        Command::DriftOracle(c) => commands::drift_oracle(&c),
        Command::MartingaleScan(c) => commands::martingale_scan(&c),
        Command::Selftest => selftest::run(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let diag = serde_json::json!({ "error": e.kind(), "exit_code": e.code(), "message": e.message() });
            eprintln!("{diag}");
            ExitCode::from(e.code())
        }
    }
}
