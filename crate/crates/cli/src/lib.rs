//! Scenario runner for the isoperimetric toolkit: parses JSON scenarios,
//! dispatches to the core checkers and writes JSON or CSV reports.

pub mod report;
pub mod runner;
pub mod scenario;
pub mod selftest;

use std::time::Instant;

pub use report::{emit, Format, ReportDocument};
pub use runner::{run_checks, RunOptions};
pub use scenario::Scenario;

/// Failures that stop a run before a report is produced.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("precondition failed: {0}")]
    Precondition(#[from] isoperim::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

pub mod exit {
    pub const PASS: i32 = 0;
    pub const INEQUALITY_FAILED: i32 = 1;
    pub const SCHEMA: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const IO: i32 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => exit::SCHEMA,
            CliError::Precondition(_) => exit::PRECONDITION,
            CliError::Io(_) => exit::IO,
        }
    }
}

/// Parses and runs a scenario text.
pub fn run_scenario(text: &str, opts: &RunOptions) -> Result<ReportDocument, CliError> {
    let start = Instant::now();
    let sc = Scenario::parse(text)?;
    let (checks, refinement) = run_checks(&sc, opts)?;
    let echo = serde_json::to_value(&sc).expect("scenarios serialize");
    Ok(ReportDocument::new(echo, checks, refinement, start.elapsed().as_secs_f64()))
}

/// Reads, runs and emits; returns the process exit code.
pub fn check_file(path: &str, out: &str, format: Format, opts: &RunOptions) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let doc = run_scenario(&text, opts)?;
    emit(&doc.render(format), out)?;
    Ok(if doc.pass { exit::PASS } else { exit::INEQUALITY_FAILED })
}
