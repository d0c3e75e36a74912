//! Command-line front end: single experiments, hyperparameter sweeps, and
//! metric recomputation from published result tables.

mod commands;
mod settings;
mod table;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "driftkit",
    about = "Streaming concept-drift experiments: D3/OCDD detectors, drift-sample selection, prequential evaluation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment configuration, repeated with derived seeds.
    Run(settings::RunArgs),
    /// Run a hyperparameter grid, both selectors per combination.
    Sweep(settings::SweepArgs),
    /// Recompute HADAM and average-difference tables from published numbers.
    Recompute(settings::RecomputeArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => commands::run::execute(args),
        Command::Sweep(args) => commands::sweep::execute(args),
        Command::Recompute(args) => commands::recompute::execute(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}
