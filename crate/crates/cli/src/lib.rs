//! Batch front-end for `morsept-core`.
//!
//! Each invocation runs one experiment and writes one table, as CSV with a
//! `#`-prefixed metadata header or as JSON `{meta, rows}`. Verdict lines
//! go to standard error.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure.

pub mod config;
pub mod experiments;
pub mod table;

use std::ffi::OsString;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

pub use config::{Cli, Experiment, FamilyChoice, Format, RunConfig};
pub use experiments::{schema, Report};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] morsept_core::Error),
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Rendered output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub verdicts: Vec<String>,
}

fn metadata(cfg: &RunConfig, report: &Report) -> table::Meta {
    let mut meta: table::Meta = vec![
        ("tool".into(), format!("morsept {TOOL_VERSION}")),
        ("experiment".into(), cfg.experiment.name().into()),
        ("family".into(), cfg.family.name().into()),
        ("lambda".into(), cfg.lambda.to_string()),
        ("mu".into(), cfg.mu.to_string()),
        ("gamma".into(), cfg.gamma.to_string()),
    ];
    if let Some(m) = cfg.order_m {
        meta.push(("order_m".into(), m.to_string()));
    }
    meta.extend(report.meta.iter().cloned());
    meta.push(("columns".into(), report.table.columns.join(",")));
    if !cfg.reproducible {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        meta.push(("timestamp_unix".into(), secs.to_string()));
    }
    meta
}

/// Runs the experiment and renders it; writes nothing.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let report = experiments::run_experiment(cfg)?;
    let meta = metadata(cfg, &report);
    let text = match cfg.format {
        Format::Csv => table::render_csv(&meta, &report.table)?,
        Format::Json => table::render_json(&meta, &report.table)?,
    };
    Ok(RunOutput {
        text,
        verdicts: report.verdicts,
    })
}

/// Runs and then writes the output file (or standard output).
///
/// The file is only created once the whole table has been computed.
pub fn execute(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let out = run(cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &out.text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", out.text),
    }
    Ok(out.verdicts)
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::resolve(cli).and_then(|cfg| execute(&cfg));
    match result {
        Ok(verdicts) => {
            for v in verdicts {
                eprintln!("{v}");
            }
            0
        }
        Err(e) => {
            eprintln!("morsept: {e}");
            e.exit_code()
        }
    }
}
