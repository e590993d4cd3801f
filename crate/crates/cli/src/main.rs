//! `floquet`: Floquet spectra, splitting maps and the hidden time-nonlocal
//! parity of the driven two-level system.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand};

use config::{Format, Range, Units};

/// Exit statuses.
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "floquet",
    version,
    about = "Floquet spectra and hidden time-nonlocal parity of the driven two-level system",
    after_help = "Energies are read in units of omega unless --units absolute is given. \
                  Ranges are lo:hi:n with inclusive endpoints.\n\
                  FLOQUET_THREADS caps the number of worker threads.\n\
                  Exit codes: 0 success, 2 usage, 3 numerical failure, 4 verification mismatch."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Flat key=value parameter file; values given on the command line win
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// How energies on the command line and in the config are measured
    #[arg(long, value_enum, default_value_t = Units::Omega)]
    pub units: Units,
    /// Driving frequency
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Sideband truncation K (default: ceil(4(alpha+beta+epsilon)/omega) + 10)
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Output file, `-` for standard output
    #[arg(long, short, default_value = "-")]
    pub output: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quasienergies of the representatives in zones -1, 0, 1 with parities, over an alpha sweep
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 2.7)]
        beta: f64,
        #[arg(long, default_value = "0:8:400")]
        alpha: Range,
    },
    /// Minimal quasienergy splitting on an (epsilon, alpha) grid
    SplittingMap {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0:4.5:150")]
        epsilon: Range,
        #[arg(long, default_value_t = 1.3)]
        beta: f64,
        #[arg(long, default_value = "0:6:150")]
        alpha: Range,
    },
    /// Parities of the two representatives at one parameter point
    Parity {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 2.7)]
        beta: f64,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Compare the recurrence with the tabulated coefficients for n <= 4
    VerifyTable {
        #[command(flatten)]
        common: Common,
        /// Detuning index; all of 0..=4 when omitted
        #[arg(long)]
        n: Option<u32>,
        /// Evaluate at this alpha (with --beta) instead of random points
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
        /// Number of random (alpha, beta, omega) points
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Analytic and numerically recovered Q_k with identity residuals
    QOperator {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 2.7)]
        beta: f64,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Largest n for which the recurrence result is included
        #[arg(long, default_value_t = 4)]
        analytic_max: u32,
    },
}

/// Failure with its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(floquet_core::Error),
    Mismatch(String),
}

impl From<floquet_core::Error> for CliError {
    fn from(e: floquet_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::Core(floquet_core::Error::NoSymmetry { .. }) => EXIT_NUMERIC,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Mismatch(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("FLOQUET_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("FLOQUET_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}

fn run(matches: &ArgMatches) -> Result<(), CliError> {
    let cli = Cli::from_arg_matches(matches).map_err(|e| CliError::Usage(e.to_string()))?;
    let (_, sub) = matches.subcommand().expect("subcommand is required");
    init_threads()?;
    match cli.command {
        Command::Spectrum { common, epsilon, beta, alpha } => {
            commands::spectrum(&common, sub, epsilon, beta, alpha)
        }
        Command::SplittingMap { common, epsilon, beta, alpha } => {
            commands::splitting_map(&common, sub, epsilon, beta, alpha)
        }
        Command::Parity { common, epsilon, beta, alpha } => commands::parity(&common, sub, epsilon, beta, alpha),
        Command::VerifyTable { common, n, alpha, beta, points, seed } => {
            commands::verify_table(&common, sub, n, alpha.zip(beta), points, seed)
        }
        Command::QOperator { common, epsilon, beta, alpha, analytic_max } => {
            commands::q_operator(&common, sub, epsilon, beta, alpha, analytic_max)
        }
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    match run(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
