//! `moreau-pi`: simulate spring networks, check whether they reduce to a
//! Prandtl-Ishlinskii operator and measure the discrepancy when they do not.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod files;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use moreau_pi::reducibility::DEFAULT_CHECK_TOL;
use moreau_pi::sweep::{Projector, DEFAULT_TOL};
use moreau_pi::Error;

use commands::SolverOptions;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input files and flags.
    Parse(String),
    Solver(String),
    Horizon(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Solver(_) | CliError::Io(_) => 2,
            CliError::Horizon(_) => 3,
        }
    }

    fn in_file(self, path: &std::path::Path) -> Self {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            other => other,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "invalid input: {m}"),
            CliError::Solver(m) => write!(f, "solver error: {m}"),
            CliError::Horizon(m) => write!(f, "horizon violation: {m}"),
            CliError::Io(m) => write!(f, "output error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::HorizonExceeded { .. } => CliError::Horizon(e.to_string()),
            Error::InvalidNetwork(_)
            | Error::Disconnected(_)
            | Error::InvalidSignal(_)
            | Error::InvalidParameter(_) => CliError::Parse(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeriesFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProjectorArg {
    /// Alternating projections (default)
    Dykstra,
    /// Dense active-set quadratic program
    ActiveSet,
}

#[derive(Debug, clap::Args)]
struct SolverArgs {
    /// Largest input increment |dg| per step [default: smallest box
    /// half-width / (100 * max |f0|)]
    #[arg(long)]
    dt_max: Option<f64>,
    /// Projector tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Projection algorithm
    #[arg(long, value_enum, default_value_t = ProjectorArg::Dykstra)]
    projector: ProjectorArg,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            dt_max: self.dt_max,
            tol: self.tol,
            projector: match self.projector {
                ProjectorArg::Dykstra => Projector::Dykstra,
                ProjectorArg::ActiveSet => Projector::ActiveSet,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "moreau-pi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate stresses and the constraint reaction along a signal
    Simulate {
        /// Network JSON file
        network: PathBuf,
        /// Signal JSON file
        signal: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Csv)]
        format: SeriesFormat,
    },
    /// Trace the loading curve and check the reducibility conditions
    /// (exit status 4 when they fail)
    Check {
        /// Network JSON file
        network: PathBuf,
        /// Relative margin for the geometric conditions
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Compare simulated stresses with the PI prediction
    Compare {
        /// Network JSON file
        network: PathBuf,
        /// Signal JSON file
        signal: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Accept inputs beyond the saturation length (prediction stays flat)
        #[arg(long)]
        allow_beyond_saturation: bool,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Csv)]
        format: SeriesFormat,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Simulate {
            network,
            signal,
            solver,
            format,
        } => {
            let net = files::load_network(&network)?;
            let sig = files::load_signal(&signal)?;
            let json = matches!(format, SeriesFormat::Json);
            commands::run_simulate(&net, &sig, &solver.options(), json, &mut out)?;
            ExitCode::SUCCESS
        }
        Command::Check {
            network,
            tol,
            format,
        } => {
            let net = files::load_network(&network)?;
            let json = matches!(format, ReportFormat::Json);
            if commands::run_check(&net, tol, json, &mut out)? {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Command::Compare {
            network,
            signal,
            solver,
            allow_beyond_saturation,
            format,
        } => {
            let net = files::load_network(&network)?;
            let sig = files::load_signal(&signal)?;
            let json = matches!(format, SeriesFormat::Json);
            commands::run_compare(
                &net,
                &sig,
                &solver.options(),
                allow_beyond_saturation,
                json,
                &mut out,
                &mut io::stderr(),
            )?;
            ExitCode::SUCCESS
        }
    };
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("moreau-pi: {e}");
            ExitCode::from(e.code())
        }
    }
}
