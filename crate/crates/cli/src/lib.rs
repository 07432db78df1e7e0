//! Command-line front-end for `deltachain`: runs scans and writes figure data
//! as CSV or JSON.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod spec;
pub mod table;

pub use spec::{parse_word_spec, ParseError};
pub use table::{Cell, Format, Table};

/// Environment variable holding the worker thread count for parallel scans.
pub const THREADS_ENV: &str = "DELTACHAIN_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] deltachain::Error),
    #[error("cannot parse word specification: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Single machine-readable token printed on failure.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Parse(_) => "ParseError",
            CliError::Usage(_) => "InvalidParams",
            CliError::Io(_) => "IoError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Bound,
    Scattering,
}

impl From<RegimeArg> for deltachain::Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Bound => deltachain::Regime::Bound,
            RegimeArg::Scattering => deltachain::Regime::Scattering,
        }
    }
}

/// Spectra, states and scattering of chains of delta wells.
#[derive(Debug, Clone, Parser)]
#[command(name = "deltachain", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

/// Options shared by all subcommands.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// String of cells: `fib:m=<int>`, `S^<n>`, `L^<n>` or letters such as `SLLSL`
    #[arg(long, global = true, default_value = "S")]
    pub word: String,
    /// Dimensionless delta strength u b (positive is attractive)
    #[arg(long, global = true, default_value_t = 4.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Length ratio of the long cell to the short one
    #[arg(long, global = true, default_value_t = deltachain::TAU)]
    pub q: f64,
    #[arg(long, global = true, default_value_t = 0.05)]
    pub beta_min: f64,
    #[arg(long, global = true, default_value_t = 6.0)]
    pub beta_max: f64,
    /// Grid steps of the energy scan (at least 100)
    #[arg(long, global = true, default_value_t = 2000)]
    pub steps: usize,
    /// Energy regime; each subcommand has its own default
    #[arg(long, global = true, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Output file (default: standard output)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Band germs of the word
    Bands,
    /// Bound-state energies (zeros of d)
    Bound,
    /// Band edges of both cells in both regimes over a strength grid, with commuting lines
    Atlas {
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        gamma_min: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        gamma_max: f64,
        /// Number of strength intervals
        #[arg(long, default_value_t = 40)]
        gamma_steps: usize,
    },
    /// S-matrix elements over the energy grid
    Scatter,
    /// Wavefunction sampled along the word
    Wave {
        /// Energy variable of the state
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 64)]
        grid_per_cell: usize,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        psi0_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        psi0_im: f64,
        /// Initial derivative; defaults to a right-moving plane wave (scattering)
        /// or a decaying exponential (bound)
        #[arg(long, allow_negative_numbers = true)]
        dpsi0_re: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        dpsi0_im: Option<f64>,
    },
    /// Density of states of the periodic chain of short cells
    Dos,
    /// Both sides of the binding equation of n short cells inside the band
    Binding {
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Fibonacci words with their lengths and letter counts
    FibInfo {
        #[arg(long, default_value_t = 10)]
        m_max: usize,
    },
    /// Commuting energies of the golden-mean chain
    Commute {
        #[arg(long, default_value_t = 3)]
        p_max: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Bound => "bound",
            Command::Atlas { .. } => "atlas",
            Command::Scatter => "scatter",
            Command::Wave { .. } => "wave",
            Command::Dos => "dos",
            Command::Binding { .. } => "binding",
            Command::FibInfo { .. } => "fib-info",
            Command::Commute { .. } => "commute",
        }
    }
}

/// Apply the thread-count variable to the global worker pool, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    if threads == 0 {
        return Err(CliError::Usage(format!("{THREADS_ENV} must be at least 1")));
    }
    // A second configuration attempt in the same process is harmless.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Run one command and return its table.
pub fn run(cli: &Cli) -> Result<Table, CliError> {
    commands::run(&cli.command, &cli.common)
}
