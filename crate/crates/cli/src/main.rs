//! Batch front end for the tomography simulator: reproducible experiments,
//! bound-verification sweeps, and plot-data emission. Every run writes its
//! data files plus a JSON manifest; identical seed and flags give
//! byte-identical data files at any worker count.

mod commands;
mod common;
mod output;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{bounds, conc, holevo, oracle, pack, pdf, sample};

#[derive(Parser)]
#[command(
    name = "schurtomo",
    version,
    about = "Collective quantum tomography simulator and bound verifier",
    after_help = "Data files are CSV by default (--format json for JSON rows); \
packing nets and run manifests are always JSON. Column layouts are described \
in each subcommand's --help."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact qubit outcome PDF curves of the collective POVM.
    Pdf(pdf::PdfArgs),
    /// Repeated tomography draws and empirical error tables.
    Sample(sample::SampleArgs),
    /// Dimension, character, and PGM bound sweeps over partitions.
    Bounds(bounds::BoundsArgs),
    /// Greedy packing-net construction and JSON export.
    Pack(pack::PackArgs),
    /// Holevo information and Fano copy-count calculators.
    Holevo(holevo::HolevoArgs),
    /// Z-variable and projector-overlap concentration suites.
    Conc(conc::ConcArgs),
    /// Explicit tensor-space identity suite (the small-instance oracle).
    Oracle(oracle::OracleArgs),
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Pdf(args) => pdf::run(&args),
        Command::Sample(args) => sample::run(&args),
        Command::Bounds(args) => bounds::run(&args),
        Command::Pack(args) => pack::run(&args),
        Command::Holevo(args) => holevo::run(&args),
        Command::Conc(args) => conc::run(&args),
        Command::Oracle(args) => oracle::run(&args),
    }
}
