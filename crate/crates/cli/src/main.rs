//! Command-line front end for the decoder experiments: run sweeps to
//! CSV/JSON, estimate thresholds from sweep data, and decode single seeded
//! shots for debugging.

mod commands;
mod config;
mod error;
mod rows;

use clap::{Parser, Subcommand};

use commands::{cmd_decode_one, cmd_sweep, cmd_threshold, DecodeOneArgs, SweepArgs, ThresholdArgs};

#[derive(Parser)]
#[command(
    name = "bp4m",
    version,
    about = "Belief-propagation matching decoders on the decoding graph"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a Monte Carlo sweep and write a CSV plus a JSON summary.
    Sweep(SweepArgs),
    /// Estimate threshold crossings from a sweep CSV.
    Threshold(ThresholdArgs),
    /// Decode one seeded shot and print the full walkthrough.
    DecodeOne(DecodeOneArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Threshold(args) => cmd_threshold(args),
        Cmd::DecodeOne(args) => cmd_decode_one(args),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
