use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nearcircuit::commands::{self, exit_code, load_input, Outcome, RunConfig};
use nearcircuit::Result;

/// Real-root bounds, eliminants and certified witnesses for polynomial
/// systems supported on simplices, circuits and near circuits.
#[derive(Parser)]
#[command(name = "nearcircuit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of random systems drawn by `verify`.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Bit cap for interval refinement during back-substitution.
    #[arg(long = "precision-cap", global = true, default_value_t = 4096)]
    precision_cap: u32,
    /// Print a `key: value` table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Re-validate every emitted certificate by recounting its roots.
    #[arg(long, global = true)]
    check: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

/// INPUT is a file path, inline JSON starting with `{`, or `-` for stdin.
#[derive(Subcommand)]
enum Command {
    /// Classify a support and print its circuit or near-circuit data.
    Classify { input: String },
    /// Upper bounds, sharp values and congruences for a support.
    Bounds { input: String },
    /// Gaussian reduction and univariate eliminant of a system.
    Eliminate { input: String },
    /// Certified real solution count of a system, with back-substituted solutions.
    Count { input: String },
    /// Build a system with many (or exactly `--target`) real solutions.
    Witness {
        input: String,
        #[arg(long)]
        target: Option<u64>,
    },
    /// Root counts reachable by shifting a polynomial's constant term.
    Ladder { input: String },
    /// Random generic systems on a support checked against the bounds.
    Verify { input: String },
    /// Recount the roots of a serialized witness certificate.
    Check { input: String },
}

fn run(cli: &Cli) -> Result<Outcome> {
    let mut cfg = RunConfig {
        seed: cli.opts.seed,
        trials: cli.opts.trials,
        precision_cap: cli.opts.precision_cap,
        target: None,
        check: cli.opts.check,
    };
    match &cli.command {
        Command::Classify { input } => commands::cmd_classify(&load_input(input)?),
        Command::Bounds { input } => commands::cmd_bounds(&load_input(input)?),
        Command::Eliminate { input } => commands::cmd_eliminate(&load_input(input)?, &cfg),
        Command::Count { input } => commands::cmd_count(&load_input(input)?, &cfg),
        Command::Witness { input, target } => {
            cfg.target = *target;
            commands::cmd_witness(&load_input(input)?, &cfg)
        }
        Command::Ladder { input } => commands::cmd_ladder(&load_input(input)?, &cfg),
        Command::Verify { input } => commands::cmd_verify(&load_input(input)?, &cfg),
        Command::Check { input } => commands::cmd_check(&load_input(input)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("nearcircuit: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let text = if cli.opts.pretty {
        commands::pretty(&outcome.value)
    } else {
        let mut s = serde_json::to_string_pretty(&outcome.value).expect("JSON values always serialize");
        s.push('\n');
        s
    };
    let written = match &cli.opts.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("nearcircuit: {e}");
        return ExitCode::from(commands::EXIT_INPUT as u8);
    }
    if outcome.code != commands::EXIT_OK {
        eprintln!("nearcircuit: verification failed");
    }
    ExitCode::from(outcome.code as u8)
}
