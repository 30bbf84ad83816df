//! Configuration-driven front end for `casimir-core`.
//!
//! A run is described by one JSON file (see [`config`]); the result is a
//! single CSV or JSON table written to standard output or a file.

pub mod config;
pub mod output;
pub mod tasks;

use casimir_core::CasimirError;
use thiserror::Error;

pub use config::{emit_config, parse_config, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Compute(#[from] CasimirError),

    #[error("{0}")]
    Io(String),

    #[error("{failed} validation check(s) failed")]
    Validation { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io(_) => EXIT_PARSE,
            CliError::Compute(e) => match e {
                CasimirError::NonConvergence { .. } | CasimirError::ExtrapolationUnstable { .. } => {
                    EXIT_NONCONVERGENCE
                }
                _ => EXIT_PARSE,
            },
            CliError::Validation { .. } => EXIT_VALIDATION,
        }
    }
}

/// Rendered output of a run plus whether every validation check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub failed_checks: usize,
}

/// Runs the configured task and renders the table in the configured format.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let table = tasks::run_task(cfg)?;
    let failed_checks = table
        .bool_column("pass")
        .map(|col| col.iter().filter(|p| !**p).count())
        .unwrap_or(0);
    let text = match cfg.output.format {
        config::OutputFormat::Csv => table.to_csv(),
        config::OutputFormat::Json => table.to_json(config::emit_value(cfg)),
    };
    Ok(RunOutput {
        text,
        failed_checks,
    })
}

/// Executes and writes the result to the configured destination. Validation
/// failures still write their table before reporting the error.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let out = execute(cfg)?;
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &out.text)
            .map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?,
        None => print!("{}", out.text),
    }
    if out.failed_checks > 0 {
        return Err(CliError::Validation {
            failed: out.failed_checks,
        });
    }
    Ok(())
}
