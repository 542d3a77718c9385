//! Command-line front end: argument parsing, configuration files and output emission.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    ClassifyOutput, CompareOutput, CompareRecord, SimulateSummary, WindingOutput, THREADS_ENV,
};
pub use config::{BackgroundSection, CompareSection, FileConfig, GridSection, TimeSection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "nnls-spectra",
    version,
    about = "Spectral data, asymptotics and simulations for the nonlocal NLS with step-like data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML file with sections [background], [grid], [time], [compare].
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for output files; standard output when absent.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; the NNLS_SPECTRA_THREADS environment variable takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also write the spectrum report of the background step.
    #[arg(long, global = true)]
    pub seed_report: bool,
    #[arg(long = "A", global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long = "B", global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long = "R", global = true, allow_negative_numbers = true)]
    pub r: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerical scattering data of the step on a real k grid.
    Scatter(ScatterArgs),
    /// Zeros of a1 and the full spectrum report.
    Zeros,
    /// Winding of the argument of a1*a2 along the real line.
    Winding,
    /// Sector of the ray xi.
    Classify(RayArgs),
    /// Leading asymptotic term at x = 4*xi*t.
    Asymptote(PointArgs),
    /// Split-step simulation from the mollified step.
    Simulate(SimArgs),
    /// Simulation followed by comparison with the asymptotic formulas.
    Compare(SimArgs),
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub k_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub k_max: f64,
    #[arg(long, default_value_t = 201)]
    pub k_count: usize,
    /// Width of the smoothed step transition; 0 keeps the sharp step.
    #[arg(long, default_value_t = 0.0)]
    pub mollify: f64,
    #[arg(long, default_value_t = 801)]
    pub x_points: usize,
}

#[derive(Debug, Args)]
pub struct RayArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Args, Default)]
pub struct SimArgs {
    #[arg(long = "L")]
    pub half_length: Option<f64>,
    #[arg(long = "N")]
    pub points: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Comma-separated snapshot times.
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
    #[arg(long)]
    pub mollify_width: Option<f64>,
    /// Comma-separated rays for `compare`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub rays: Option<Vec<f64>>,
    /// Ray interval `lo,hi` for the period measurement in `compare`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub period_window: Option<Vec<f64>>,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
