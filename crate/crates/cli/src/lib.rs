//! Command-line front end: parameter sweeps of the PBT bounds emitted as
//! CSV or JSON tables.
//!
//! Every command is deterministic. Column names are stable identifiers and
//! the JSON layout carries [`table::SCHEMA_VERSION`].

pub mod commands;
pub mod table;

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use table::{Cell, Format, Table};

/// Default output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "PBT_BOUNDS_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] pbt_core::Error),
    #[error("oracle check failed: {0}")]
    OracleMismatch(String),
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Core(_) => 1,
            CliError::OracleMismatch(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "pbt-bounds",
    version,
    about = "Adaptive channel discrimination bounds via port-based teleportation"
)]
pub struct Cli {
    /// Output file; defaults to $PBT_BOUNDS_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Digits after the point in scientific notation.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PBT numbers, entanglement fidelity and simulation error per port count.
    XiTable(XiTableArgs),
    /// Brute-force PBT oracle against the closed forms.
    OracleVerify(OracleVerifyArgs),
    /// Amplitude damping discrimination bounds.
    AdSweep(AdSweepArgs),
    /// Single-photon resolution bound as a function of separation.
    Resolution(ResolutionArgs),
    /// Quantum illumination fidelities and bounds.
    Illumination(IlluminationArgs),
    /// Finite-difference QFI and Heisenberg-scaled variance floor.
    Metrology(MetrologyArgs),
    /// Secret-key-rate upper bounds.
    Keyrate(KeyrateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::XiTable(_) => "xi-table",
            Command::OracleVerify(_) => "oracle-verify",
            Command::AdSweep(_) => "ad-sweep",
            Command::Resolution(_) => "resolution",
            Command::Illumination(_) => "illumination",
            Command::Metrology(_) => "metrology",
            Command::Keyrate(_) => "keyrate",
        }
    }
}

#[derive(Debug, Args)]
pub struct XiTableArgs {
    #[arg(long, default_value_t = 2)]
    pub m_min: usize,
    #[arg(long, default_value_t = 30)]
    pub m_max: usize,
}

#[derive(Debug, Args)]
pub struct OracleVerifyArgs {
    #[arg(long, default_value_t = 2)]
    pub m_min: usize,
    #[arg(long, default_value_t = 6)]
    pub m_max: usize,
}

#[derive(Debug, Args)]
pub struct AdSweepArgs {
    #[arg(long, default_value_t = 0.8)]
    pub p_min: f64,
    #[arg(long, default_value_t = 0.98)]
    pub p_max: f64,
    #[arg(long, default_value_t = 19)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.01)]
    pub dp: f64,
    #[arg(short, long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "4,16,64,256")]
    pub m_list: Vec<usize>,
    /// Skip the optimisation over M.
    #[arg(long)]
    pub no_optimize: bool,
}

#[derive(Debug, Args)]
pub struct ResolutionArgs {
    #[arg(long, default_value_t = 0.01)]
    pub eta: f64,
    #[arg(short, long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub s_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct IlluminationArgs {
    #[arg(short, long, default_value_t = 2)]
    pub d: usize,
    #[arg(short, long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1e-4,1e-3,1e-2")]
    pub eta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-2")]
    pub b: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// Amplitude damping, parameter p.
    Ad,
    /// Qubit depolarizing, parameter ξ.
    Depolarizing,
}

#[derive(Debug, Args)]
pub struct MetrologyArgs {
    #[arg(long, value_enum, default_value_t = Family::Ad)]
    pub family: Family,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.8")]
    pub theta: Vec<f64>,
    #[arg(short, long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = pbt_core::applications::QFI_DEFAULT_STEP)]
    pub dtheta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Measure {
    Ree,
    Se,
}

#[derive(Debug, Args)]
pub struct KeyrateArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub d: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1e-4,1e-3,1e-2")]
    pub e_r: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Measure::Ree)]
    pub measure: Measure,
    #[arg(short, long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Constant in the finite-size correction.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

/// Outcome of a command: its table plus any failed self-check.
#[derive(Debug)]
pub struct Output {
    pub table: Table,
    pub check_failure: Option<String>,
}

pub fn execute(command: &Command) -> CliResult<Output> {
    match command {
        Command::XiTable(a) => commands::xi_table(a),
        Command::OracleVerify(a) => commands::oracle_verify(a),
        Command::AdSweep(a) => commands::ad_sweep(a),
        Command::Resolution(a) => commands::resolution(a),
        Command::Illumination(a) => commands::illumination(a),
        Command::Metrology(a) => commands::metrology(a),
        Command::Keyrate(a) => commands::keyrate(a),
    }
}

/// Resolves the destination: `--out`, then the env directory, then stdout.
pub fn output_path(cli: &Cli, env_dir: Option<&Path>) -> Option<PathBuf> {
    cli.out.clone().or_else(|| {
        env_dir.map(|dir| dir.join(format!("{}.{}", cli.command.name(), cli.format.extension())))
    })
}

/// Runs a parsed invocation and writes its table. The table is written even
/// when a self-check fails, so the mismatch can be inspected.
pub fn run(cli: &Cli, env_dir: Option<&Path>) -> CliResult<()> {
    let output = execute(&cli.command)?;
    let text = output.table.render(cli.format, cli.precision as usize);
    match output_path(cli, env_dir) {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".to_string(),
                source,
            })?,
    }
    match output.check_failure {
        Some(msg) => Err(CliError::OracleMismatch(msg)),
        None => Ok(()),
    }
}
