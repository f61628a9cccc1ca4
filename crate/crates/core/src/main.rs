use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hopsi::cli::{
    cmd_assumptions, cmd_check, cmd_encode, cmd_eq, cmd_run, effective_seed, parse_source_or, Instance, Outcome, Program,
    Relation, RunConfig, StrategyArg, TraceFormat, EXIT_PARSE_ERROR,
};

/// Interpreter, type checker and property harness for higher-order
/// psi-calculi.
#[derive(Parser)]
#[command(name = "hopsi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a program.
    Check {
        file: PathBuf,
        #[arg(long)]
        instance: Option<Instance>,
        /// Print a JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Reduce a program and print the trace or reduction tree.
    Run {
        file: PathBuf,
        #[arg(long)]
        instance: Option<Instance>,
        #[arg(long, default_value_t = 20)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TraceFormat::Text)]
        trace: TraceFormat,
        /// Stop with exit code 3 at the first WRONG state.
        #[arg(long)]
        detect_wrong: bool,
    },
    /// Print the translation of a rho program.
    Encode {
        file: PathBuf,
        #[arg(long)]
        typed: bool,
    },
    /// Test the instance assumptions on random trials.
    Assumptions {
        #[arg(long)]
        instance: Instance,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare two programs.
    Eq {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum)]
        relation: Relation,
        #[arg(long)]
        instance: Option<Instance>,
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &Path, instance: Option<Instance>) -> Result<Program, Outcome> {
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|e| Outcome::new(EXIT_PARSE_ERROR, format!("{shown}: {e}\n")))?;
    let fallback = (path.extension().and_then(|e| e.to_str()) == Some("rho")).then_some(Instance::Rho);
    parse_source_or(&src, instance, fallback).map_err(|e| Outcome::parse_error(&shown, &e))
}

fn dispatch(cli: Cli) -> Outcome {
    let run = || -> Result<Outcome, Outcome> {
        Ok(match cli.command {
            Command::Check { file, instance, json } => cmd_check(&load(&file, instance)?, json),
            Command::Run { file, instance, max_steps, strategy, seed, trace, detect_wrong } => {
                let cfg = RunConfig { max_steps, strategy, seed: effective_seed(seed), trace, detect_wrong };
                cmd_run(&load(&file, instance)?, &cfg)
            }
            Command::Encode { file, typed } => {
                cmd_encode(&load(&file, None)?, typed)
            }
            Command::Assumptions { instance, trials, max_size, seed, json } => {
                cmd_assumptions(instance, trials, max_size, effective_seed(seed), json)
            }
            Command::Eq { first, second, relation, instance, json } => {
                cmd_eq(&load(&first, instance)?, &load(&second, instance)?, relation, json)
            }
        })
    };
    run().unwrap_or_else(|e| e)
}

fn main() -> ExitCode {
    let outcome = dispatch(Cli::parse());
    print!("{}", outcome.stdout);
    ExitCode::from(outcome.code as u8)
}
