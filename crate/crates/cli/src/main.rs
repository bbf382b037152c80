//! `uniformize`: command-line front end for the elliptic-function, family
//! and sheet-partition computations.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uniformize_core::io::Format;
use uniformize_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "uniformize", version, about = "Elliptic functions, critical-point flows and Nuttall partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Input configuration (JSON, schema version 1).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv, json or svg.
    #[arg(long)]
    pub format: Option<String>,
    /// Accuracy target.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Grid resolution per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// The parameter α of the sheet partition.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Comma-separated checkpoint times in [0, 1]; defaults to `0,1`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub checkpoints: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants, half-period values and quasi-periods of a lattice.
    LatticeInfo(Common),
    /// ℘, ℘′, ζ and σ at the points listed in the lattice config.
    Eval(Common),
    /// Integrate a rational family and write its checkpoints.
    RationalSolve(Common),
    /// Integrate a torus family and write its checkpoints.
    TorusSolve(Common),
    /// Solve a family and compare the endpoint critical values with the targets.
    Verify(Common),
    /// Sheet labels and boundary curves on a grid.
    NuttallPartition(Common),
    /// Critical points of the comparison function for real α.
    NuttallCritical(Common),
    /// The threshold value of α where the critical points merge.
    NuttallThreshold(Common),
}

impl Common {
    fn format_or(&self, default: Format) -> Result<Format> {
        match &self.format {
            Some(f) => f.parse(),
            None => Ok(default),
        }
    }

    fn tol_or(&self, default: f64) -> Result<f64> {
        let tol = self.tol.unwrap_or(default);
        if tol > 0.0 && tol.is_finite() {
            Ok(tol)
        } else {
            Err(Error::InvalidArgument(format!("--tol must be positive, got {tol}")))
        }
    }

    /// Rejects malformed shared options before any work starts.
    fn validate(&self) -> Result<()> {
        self.tol_or(1.0)?;
        if self.grid == Some(0) {
            return Err(Error::InvalidArgument("--grid must be positive".into()));
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    let (Command::LatticeInfo(c)
    | Command::Eval(c)
    | Command::RationalSolve(c)
    | Command::TorusSolve(c)
    | Command::Verify(c)
    | Command::NuttallPartition(c)
    | Command::NuttallCritical(c)
    | Command::NuttallThreshold(c)) = &cli.command;
    c.validate()?;
    match cli.command {
        Command::LatticeInfo(c) => commands::lattice_info(&c),
        Command::Eval(c) => commands::eval(&c),
        Command::RationalSolve(c) => commands::rational_solve(&c),
        Command::TorusSolve(c) => commands::torus_solve(&c),
        Command::Verify(c) => commands::verify(&c),
        Command::NuttallPartition(c) => commands::nuttall_partition(&c),
        Command::NuttallCritical(c) => commands::nuttall_critical(&c),
        Command::NuttallThreshold(c) => commands::nuttall_threshold(&c),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
