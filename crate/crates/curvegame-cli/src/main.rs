//! Command-line front end for the curved-exam game solver.
//!
//! Exit codes: 0 success, 1 malformed input file, 2 validation failure,
//! 3 non-convergent dynamics, 4 oracle disagreement. Reports go to standard
//! output, diagnostics to standard error.

mod cmds;
mod io;

use clap::{Parser, Subcommand, ValueEnum};
use curvegame::dynamics::Extremal;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "curvegame", version, about = "Solver for the curved-exam effort game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Greatest,
    Least,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all pure Nash equilibria of an instance as JSON.
    Solve {
        /// Instance file: {"m": number, "alpha": [numbers], "label"?: string}.
        instance: PathBuf,
    },
    /// Tabulate one player's best-response correspondence as CSV.
    Br {
        instance: PathBuf,
        /// Player index, 0-based.
        #[arg(long)]
        player: usize,
        /// Single opposing mean to evaluate.
        #[arg(long)]
        mean: Option<f64>,
        /// Sweep opposing means over [0, 1] at this step instead.
        #[arg(long)]
        grid: Option<f64>,
    },
    /// Map equilibrium existence over a two-axis parameter grid to CSV.
    Sweep {
        /// Sweep spec: {"axes": [axis, axis], "fixed": instance}.
        spec: PathBuf,
        /// Output CSV path (written atomically).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run extremal iterated best-response dynamics.
    Dynamics {
        instance: PathBuf,
        /// Which extremal selection to iterate.
        #[arg(long, value_enum, default_value_t = Which::Least)]
        which: Which,
        /// Optional CSV trace of every iterate.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Iteration cap (default 100000).
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Cross-check the analytic solver against the brute-force grid oracle.
    Verify {
        instance: PathBuf,
        /// Grid step for the oracle (2 or 3 players).
        #[arg(long)]
        step: Option<f64>,
        /// Report the asymptotic grade-inflation factor instead.
        #[arg(long)]
        inflation: bool,
    },
}

fn run(cli: Cli) -> Result<(), io::CliError> {
    match cli.command {
        Command::Solve { instance } => cmds::cmd_solve(&instance),
        Command::Br {
            instance,
            player,
            mean,
            grid,
        } => cmds::cmd_br(&instance, player, mean, grid),
        Command::Sweep { spec, out } => cmds::cmd_sweep(&spec, &out),
        Command::Dynamics {
            instance,
            which,
            trace,
            max_iter,
        } => {
            let which = match which {
                Which::Greatest => Extremal::Greatest,
                Which::Least => Extremal::Least,
            };
            cmds::cmd_dynamics(&instance, which, trace.as_deref(), max_iter)
        }
        Command::Verify {
            instance,
            step,
            inflation,
        } => cmds::cmd_verify(&instance, step, inflation),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
