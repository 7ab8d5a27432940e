//! Command-line front end: reproducible experiment runs over the granulation
//! pipeline, emitting datasets, granule records, calibration reports, and
//! cluster models as plain text files.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod io;

#[derive(Parser)]
#[command(
    name = "granulate",
    version,
    about = "Synthesize interval type-2 fuzzy granules from data and evaluate \
             how well they preserve the input uncertainty"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset from a seeded parametric source
    Gen(commands::gen::GenArgs),
    /// Granulate a dataset file and print its fuzzy entropy
    Granulate(commands::granulate::GranulateArgs),
    /// Sweep a source parameter, fit the entropy bridge, and search the
    /// kernel width
    Calibrate(commands::calibrate::CalibrateArgs),
    /// Partition a vector dataset with k-means and granulate each cluster
    Cluster(commands::cluster::ClusterArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => commands::gen::run(args),
        Command::Granulate(args) => commands::granulate::run(args),
        Command::Calibrate(args) => commands::calibrate::run(args),
        Command::Cluster(args) => commands::cluster::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}
