//! Command-line drivers around `weilfit-core`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "weilfit",
    version,
    about = "Least-squares polynomial fits on Weil collocation grids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Study configuration file (key=value lines).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Base random seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the Weil grid for the prime nearest to a target modulus.
    Points(commands::points::PointsArgs),
    /// Fit sampled values in a polynomial space.
    Fit(commands::fit::FitArgs),
    /// Condition number of the Gram matrix per polynomial order.
    CondStudy(commands::study::StudyArgs),
    /// Test-set error of fits of a target function per polynomial order.
    ConvStudy(commands::study::StudyArgs),
    /// Box fractions of a Weil grid against the arcsine measure.
    Equidist(commands::equidist::EquidistArgs),
    /// Numerical checks of the grid's stability bounds.
    CheckBounds(commands::check_bounds::CheckArgs),
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Points(a) => commands::points::run(&a),
        Command::Fit(a) => commands::fit::run(&a),
        Command::CondStudy(a) => commands::study::run_cond(&a),
        Command::ConvStudy(a) => commands::study::run_conv(&a),
        Command::Equidist(a) => commands::equidist::run(&a),
        Command::CheckBounds(a) => commands::check_bounds::run(&a),
    }
}
