//! `nctorus`: command-line front end for the noncommutative sigma-model toolkit.
//!
//! Exit codes: 0 success, 2 usage, 3 numerical-consistency failure, 4 I/O.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical consistency: {0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<nctorus_core::Error> for CliError {
    fn from(e: nctorus_core::Error) -> Self {
        match e {
            nctorus_core::Error::Consistency(_) => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nctorus",
    version,
    about = "Quantum torus actions and SU(2) path integrals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the action of a torus morphism or of Ad g for g in SU(2).
    Action(ActionArgs),
    /// Sweep the partition function and thermodynamic observables over r.
    Thermo(ThermoArgs),
    /// Tabulate the closed-form action on a 2D slice of Euler-angle space.
    Scan(ScanArgs),
    /// Find the global minimum and maximum of the closed-form action.
    Extremize(ExtremizeArgs),
    /// Search for integer relations nΘ = cθ + d.
    Existence(ExistenceArgs),
    /// Print the default configuration as JSON.
    PrintConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ActionArgs {
    /// Morphism U ↦ U^p V^q, V ↦ U^r V^s on one torus.
    #[arg(long, num_args = 4, value_names = ["P", "Q", "R", "S"], allow_negative_numbers = true,
          conflicts_with_all = ["euler", "images"])]
    pub sl2: Option<Vec<i64>>,
    /// Deformation parameter for --sl2.
    #[arg(long, default_value_t = commands::DEFAULT_THETA)]
    pub theta: f64,
    /// Euler angles φ θ ψ of g in SU(2); evaluates the closed-form action at --r.
    #[arg(long, num_args = 3, value_names = ["PHI", "THETA", "PSI"], conflicts_with = "images")]
    pub euler: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// JSON file {"theta_source", "image_u", "image_v"} with polynomial images.
    #[arg(long)]
    pub images: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Haar grid sizes (θ, φ, ψ).
    #[arg(long, num_args = 3, value_names = ["N_THETA", "N_PHI", "N_PSI"],
          default_values_t = [commands::DEFAULT_GRID; 3])]
    pub grid: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ThermoArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = commands::DEFAULT_R_START)]
    pub r_start: f64,
    #[arg(long, default_value_t = commands::DEFAULT_R_STOP)]
    pub r_stop: f64,
    #[arg(long, default_value_t = commands::DEFAULT_R_COUNT)]
    pub r_count: usize,
    /// Finite-difference step as a fraction of r.
    #[arg(long, default_value_t = nctorus_core::thermo::DEFAULT_STEP_REL)]
    pub step_rel: f64,
    /// Directory receiving the sweep table and the fit summary.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Also write the quadrature nodes (phi, theta, psi, weight) as CSV.
    #[arg(long)]
    pub dump_grid: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Angle {
    Phi,
    Theta,
    Psi,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Angle held fixed; the other two are swept over their full ranges.
    #[arg(long, value_enum)]
    pub fixed: Angle,
    /// Value of the fixed angle.
    #[arg(long, allow_negative_numbers = true)]
    pub value: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Points per swept angle (inclusive endpoints).
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtremizeArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 16)]
    pub scan: usize,
    #[arg(long, default_value_t = 8)]
    pub seeds: usize,
}

#[derive(Debug, Args)]
pub struct ExistenceArgs {
    /// Target deformation parameter Θ.
    #[arg(long = "big-theta")]
    pub big_theta: f64,
    /// Source deformation parameter θ.
    #[arg(long)]
    pub theta: f64,
    #[arg(long, default_value_t = 10)]
    pub n_max: i64,
    #[arg(long, default_value_t = 10)]
    pub c_max: i64,
    #[arg(long, default_value_t = 20)]
    pub d_max: i64,
    #[arg(long, default_value_t = nctorus_core::existence::DEFAULT_TOL)]
    pub tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match commands::run(cli.command, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nctorus: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
