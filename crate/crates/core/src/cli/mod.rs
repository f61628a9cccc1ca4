//! Surface syntax and command-line entry points.
//!
//! The commands return an [`Outcome`] instead of printing, so they can be
//! driven from tests; the binary only forwards text and exit codes.

pub mod commands;
pub mod grammars;
pub mod lexer;
pub mod parse;
pub mod source;

pub use commands::{cmd_assumptions, cmd_check, cmd_encode, cmd_eq, cmd_run, Relation, RunConfig, StrategyArg, TraceFormat};
pub use source::{parse_source, parse_source_or, Instance, Program};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: String) -> Self {
        ParseError { line, col, message }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE_ERROR: i32 = 1;
pub const EXIT_PARSE_ERROR: i32 = 2;
pub const EXIT_WRONG: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

/// What a command prints and the exit code it ends with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    pub fn new(code: i32, stdout: impl Into<String>) -> Self {
        Outcome { code, stdout: stdout.into() }
    }

    pub fn parse_error(file: &str, e: &ParseError) -> Self {
        Outcome::new(EXIT_PARSE_ERROR, format!("{file}:{e}\n"))
    }
}

/// `HOPSI_SEED` wins over the `--seed` flag when set to a valid number.
pub fn effective_seed(flag: u64) -> u64 {
    std::env::var("HOPSI_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(flag)
}
