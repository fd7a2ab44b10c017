//! `passive-spectra`: batch analysis of strictly passive LTI systems from
//! JSON system files.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 numerical failure.

mod commands;
mod input;
mod output;

use std::io::Write;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use passive_spectra::SYMMETRY_TOL;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl From<passive_spectra::Error> for CliError {
    fn from(e: passive_spectra::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "passive-spectra",
    version,
    about = "Spectral zeros, storage functions, balancing and interlacing of passive systems"
)]
struct Cli {
    /// Tolerance of the state-space symmetry test `B = ±Cᵀ`.
    #[arg(long, global = true, env = "PASSIVE_SPECTRA_TOL", default_value_t = SYMMETRY_TOL)]
    tol: f64,

    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormArg {
    Pr,
    Quasi1,
    Quasi2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableFormat {
    Markdown,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReportFormat {
    Markdown,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poles, zeros, spectral zeros, symmetry and extremal storage functions.
    Analyze { file: PathBuf },
    /// Positive-real or quasi-balanced realization with its σ values.
    Balance {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "pr")]
        form: FormArg,
    },
    /// Pole/zero interlacing and the spectral-zero sandwich of a symmetric system.
    Interlace {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "markdown")]
        format: ReportFormat,
        /// Significant digits in the table.
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// Scan the feed-through D = η·D0 of a symmetric system.
    ScanEta {
        file: PathBuf,
        /// Row-major JSON matrix D0; defaults to the system's D.
        #[arg(long)]
        d0: Option<PathBuf>,
        /// Comma-separated scaling factors.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        etas: Option<Vec<f64>>,
        /// Bisect for the smallest η with strict interlacing.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        bisect: Option<Vec<f64>>,
        /// Decimal places in the table.
        #[arg(long, default_value_t = 2)]
        digits: usize,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TableFormat,
    },
    /// Foster RC (1) or RL (2) network of a SISO function with positive residues.
    Synth {
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        foster: u8,
        /// Also write a SPICE-style netlist here.
        #[arg(long)]
        netlist: Option<PathBuf>,
    },
    /// Compare Hamiltonian spectral zeros with roots of the even polynomial.
    OracleCheck { file: PathBuf },
}

fn write_report(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    let text = match cli.command {
        Command::Analyze { file } => commands::analyze(&file, cli.tol)?,
        Command::Balance { file, form } => commands::balance(&file, form)?,
        Command::Interlace { file, format, digits } => commands::interlace(&file, format, digits)?,
        Command::ScanEta {
            file,
            d0,
            etas,
            bisect,
            digits,
            format,
        } => commands::scan_eta(&file, d0.as_deref(), etas.as_deref(), bisect.as_deref(), digits, format)?,
        Command::Synth { file, foster, netlist } => commands::synth(&file, foster, netlist.as_deref())?,
        Command::OracleCheck { file } => commands::oracle_check(&file)?,
    };
    write_report(cli.out.as_deref(), &text)
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
    // keep the exit-code contract even if a bug panics
    panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(3),
    }
}
