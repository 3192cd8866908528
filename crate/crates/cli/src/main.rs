//! Batch front-end: load moment or Verblunsky files, run any pipeline, and
//! emit CSV/JSON tables with machine-readable verdicts. Exit status 0 means
//! success, 1 an input problem, 2 a violated mathematical property.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ncszego", version, about = "Moment kernels, Verblunsky coefficients and Szegő tables on the free monoid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel-side checks on a moment file.
    Kernel {
        #[command(subcommand)]
        command: KernelCommand,
    },
    /// Verblunsky coefficient extraction.
    Verblunsky {
        #[command(subcommand)]
        command: VerblunskyCommand,
    },
    /// The synthesis direction: coefficients to moments.
    Favard {
        #[command(subcommand)]
        command: FavardCommand,
    },
    /// Szegő-type equality lists at every truncation.
    Szego {
        #[command(subcommand)]
        command: SzegoCommand,
    },
    /// Christoffel approximates and their limit.
    Christoffel {
        #[command(subcommand)]
        command: ChristoffelCommand,
    },
    /// Determinantal-zero sweeps on the row-ball.
    Zeros {
        #[command(subcommand)]
        command: ZerosCommand,
    },
    /// Classical univariate cross-validation.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum KernelCommand {
    /// Non-triviality and multi-Toeplitz axiom spot checks.
    Check(KernelCheckArgs),
}

#[derive(Args)]
struct KernelCheckArgs {
    #[arg(long)]
    moments: PathBuf,
    /// Treat words missing from the moment file as zero.
    #[arg(long, default_value_t = false)]
    fill_zero: bool,
    /// Relative Cholesky pivot threshold.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Number of random word triples for the axiom regression.
    #[arg(long, default_value_t = 200)]
    triples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerblunskyCommand {
    /// Moments to coefficients.
    Extract(ExtractArgs),
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    moments: PathBuf,
    /// Treat words missing from the moment file as zero.
    #[arg(long, default_value_t = false)]
    fill_zero: bool,
    /// Extraction depth σ(max-len); defaults to the full file horizon.
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FavardCommand {
    /// Coefficients to moments.
    Synth(SynthArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    gamma: PathBuf,
    #[arg(long)]
    max_len: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SzegoCommand {
    /// Both equality lists for n = 0..=N.
    Table(TableArgs),
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    moments: PathBuf,
    /// Treat words missing from the moment file as zero.
    #[arg(long, default_value_t = false)]
    fill_zero: bool,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ChristoffelCommand {
    /// Λ_n trace at a matrix tuple, iterated to the horizon.
    Eval(EvalArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    moments: PathBuf,
    /// Treat words missing from the moment file as zero.
    #[arg(long, default_value_t = false)]
    fill_zero: bool,
    /// Matrix tuple file.
    #[arg(long)]
    point: PathBuf,
    /// Relative spectral-norm convergence tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Depth cap; defaults to the deepest σ(n) the moment horizon covers.
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ZerosCommand {
    /// Interior/boundary/exterior sampling sweep of the zero forms.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Verblunsky file providing the measure.
    #[arg(long, conflicts_with = "moments")]
    gamma: Option<PathBuf>,
    /// Moment file providing the measure.
    #[arg(long)]
    moments: Option<PathBuf>,
    /// Treat words missing from the moment file as zero.
    #[arg(long, default_value_t = false)]
    fill_zero: bool,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Interior sampling radius.
    #[arg(long, default_value_t = 0.9)]
    radius: f64,
    /// Exterior scale factor.
    #[arg(long, default_value_t = 1.5)]
    scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Boundary-gap and residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// d=1 pipeline vs direct Toeplitz solve.
    Compare(CompareArgs),
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_enum, default_value_t = Density::Bernstein)]
    density: Density,
    /// Bernstein–Szegő parameter.
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    /// Moment order.
    #[arg(long = "n", default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Density {
    Lebesgue,
    Bernstein,
    Fejer,
}

/// Input problems exit 1; violated mathematical properties exit 2.
enum Failure {
    Input(String),
    Property(String),
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }

    fn property(e: impl std::fmt::Display) -> Self {
        Failure::Property(e.to_string())
    }
}

impl From<ncszego::Error> for Failure {
    fn from(e: ncszego::Error) -> Self {
        use ncszego::Error::*;
        match e {
            NotNontrivial { .. } | Degenerate(_) | InvalidVerblunsky { .. } => Failure::property(e),
            _ => Failure::input(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Kernel { command: KernelCommand::Check(args) } => commands::kernel_check(args),
        Command::Verblunsky { command: VerblunskyCommand::Extract(args) } => {
            commands::verblunsky_extract(args)
        }
        Command::Favard { command: FavardCommand::Synth(args) } => commands::favard_synth(args),
        Command::Szego { command: SzegoCommand::Table(args) } => commands::szego_table(args),
        Command::Christoffel { command: ChristoffelCommand::Eval(args) } => {
            commands::christoffel_eval(args)
        }
        Command::Zeros { command: ZerosCommand::Sweep(args) } => commands::zeros_sweep(args),
        Command::Oracle { command: OracleCommand::Compare(args) } => commands::oracle_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Property(msg)) => {
            eprintln!("property violated: {msg}");
            ExitCode::from(2)
        }
    }
}
