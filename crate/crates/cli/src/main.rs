//! `tropgr`: command-line driver for intersection numbers, KLT blocks,
//! diagonal-degree searches and the scattering-equation verification.

mod cache;
mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "tropgr", version, about = "Intersections of positive tropical Grassmannians Trop+G(2,n)")]
struct Cli {
    /// Worker threads; overrides TROPGR_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the canonical ordering catalog.
    Orderings(commands::OrderingsArgs),
    /// Intersection number of a pair, or a full matrix file.
    Intersect(commands::IntersectArgs),
    /// KLT ordering sets and block structure.
    Klt(commands::KltArgs),
    /// Largest permutation submatrix of the binary intersection matrix.
    Search(commands::SearchArgs),
    /// Scattering-equation verification of the amplitude Gram matrix.
    Verify(commands::VerifyArgs),
    /// Density tables for the full matrix or the KLT block.
    Density(commands::DensityArgs),
    /// Exact biadjoint amplitude of a pair of orderings.
    Amplitude(commands::AmplitudeArgs),
    /// Solve the scattering equations for seeded kinematics.
    Scatteq(commands::ScatteqArgs),
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let value = match flag {
        Some(t) => Some(t),
        None => match std::env::var("TROPGR_THREADS") {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Input(format!("TROPGR_THREADS={v:?} is not a positive integer")))?,
            ),
            Err(_) => None,
        },
    };
    match value {
        Some(0) => Err(CliError::Input("thread count must be at least 1".into())),
        v => Ok(v),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    match cli.command {
        Command::Orderings(a) => commands::orderings(a),
        Command::Intersect(a) => commands::intersect(a),
        Command::Klt(a) => commands::klt(a),
        Command::Search(a) => commands::search(a),
        Command::Verify(a) => commands::verify(a),
        Command::Density(a) => commands::density(a),
        Command::Amplitude(a) => commands::amplitude(a),
        Command::Scatteq(a) => commands::scatteq(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
