use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use famcover_cli::commands;

/// Minimum-cost edge covers of semi-uncrossable set families.
#[derive(Parser)]
#[command(name = "famcover", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the primal-dual solver on an instance file.
    Solve {
        /// Path to a JSON instance file.
        path: PathBuf,
        /// Print the full iteration history.
        #[arg(long)]
        trace: bool,
        /// Emit JSON instead of a human-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Compute the exact optimum by exhaustive search (small instances).
    Exact {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Solve and then check every certificate against the trace.
    Verify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Classify the instance's family (monotone, symmetric, uncrossable, ...).
    Classify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized combination suite over all kind pairs.
    Suite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve { path, trace, json } => commands::cmd_solve(&path, trace, json),
        Command::Exact { path, json } => commands::cmd_exact(&path, json),
        Command::Verify { path, json } => commands::cmd_verify(&path, json),
        Command::Classify { path, json } => commands::cmd_classify(&path, json),
        Command::Suite {
            seed,
            trials,
            max_nodes,
            json,
        } => commands::cmd_suite(seed, trials, max_nodes, json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
