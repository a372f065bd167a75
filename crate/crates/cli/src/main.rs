//! `kuramoto` — synchronization analysis for finite oscillator ensembles:
//! stability indices, synchronizable-region geometry, probability
//! estimates across the transition, and direct ODE integration, emitted
//! as plot-ready CSV/JSON.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

/// A command failure, carrying its process exit code: unusable inputs
/// exit 1; a degenerate (marginal) instance encountered where a clean
/// decision was demanded exits 2.
pub enum Failure {
    Input(String),
    Degenerate(String),
}

#[derive(Parser)]
#[command(
    name = "kuramoto",
    version,
    about = "Finite-N Kuramoto synchronization: indices, region geometry, probabilities, dynamics",
    after_help = "Monte Carlo and scan loops parallelize with rayon; set RAYON_NUM_THREADS to cap \
                  the worker count. For a fixed seed the output bytes are identical regardless of \
                  thread count.\n\nExit codes: 0 success, 1 input error, 2 numerical degeneracy \
                  (a marginal instance where a strict decision was demanded)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Stability index of a phase configuration: κ, τ, and the unstable
    /// dimension by counting formula and by eigensolver
    Index {
        /// Phase angles θ in radians, newline-separated or a JSON array
        theta_file: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide synchronizability of a frequency vector at a given coupling
    Sync {
        /// Intrinsic frequencies ω, newline-separated or a JSON array
        /// (projected to mean zero automatically, with a notice)
        omega_file: PathBuf,
        /// Coupling strength γ > 0
        #[arg(long)]
        gamma: f64,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance to the synchronization boundary along many directions
    BoundaryScan {
        /// Ensemble size N ≥ 2
        #[arg(long)]
        n: usize,
        /// Direction count (default: 360 polar rays at N = 3, 1000 random
        /// directions otherwise)
        #[arg(long)]
        samples: Option<usize>,
        /// Relative tolerance on each boundary crossing
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Seed for the random directions (unused at N = 3)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synchronization probability across the transition, with the
    /// analytic lower/upper bounds alongside each estimate
    Transition {
        /// Ensemble sizes, comma-separated (e.g. 100,1000)
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Grid of δ = γ/φ(N), comma-separated
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.25,0.5,0.75,1,1.25,1.5,1.75,2,2.25,2.5,2.75,3"
        )]
        delta_grid: Vec<f64>,
        /// Monte Carlo samples per grid point
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical couplings, vertex norms, and transition scales per size
    Extremes {
        /// Sizes as an inclusive range `2..12` or a comma list `3,4,5`
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the oscillator ODE and test for frequency locking
    Integrate {
        /// Intrinsic frequencies ω, newline-separated or a JSON array
        /// (projected to mean zero automatically, with a notice)
        omega_file: PathBuf,
        /// Initial phases θ(0) in radians (default: all zero)
        #[arg(long)]
        theta: Option<PathBuf>,
        /// Coupling strength γ > 0
        #[arg(long)]
        gamma: f64,
        /// Step size (default: 0.01/(γN))
        #[arg(long)]
        dt: Option<f64>,
        /// Integration horizon
        #[arg(long, default_value_t = 100.0)]
        t_end: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Write the full trajectory as CSV here (the summary still goes
        /// to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Index { theta_file, format, out } => {
            commands::index(&theta_file, format, out.as_deref())
        }
        Command::Sync { omega_file, gamma, out } => {
            commands::sync(&omega_file, gamma, out.as_deref())
        }
        Command::BoundaryScan { n, samples, tol, seed, format, out } => {
            commands::boundary_scan(n, samples, tol, seed, format, out.as_deref())
        }
        Command::Transition { n, delta_grid, samples, seed, format, out } => {
            commands::transition(&n, &delta_grid, samples, seed, format, out.as_deref())
        }
        Command::Extremes { n, format, out } => commands::extremes(&n, format, out.as_deref()),
        Command::Integrate { omega_file, theta, gamma, dt, t_end, format, out } => {
            commands::integrate(&omega_file, theta.as_deref(), gamma, dt, t_end, format, out.as_deref())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Degenerate(msg)) => {
            eprintln!("degenerate: {msg}");
            ExitCode::from(2)
        }
    }
}
