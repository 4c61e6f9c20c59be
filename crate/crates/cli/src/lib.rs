//! `hardy-forge`: command-line driver for the `hardy-core` checks.
//!
//! Every run writes one report, JSON (`{"config", "results", "summary"}`)
//! or CSV, and exits 0 when every check passed, 1 when any failed and 2 on
//! invalid input.

pub mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use args::{Cli, Command, Format};
pub use commands::Outcome;

pub const THREADS_ENV: &str = "HARDY_FORGE_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files: exit 2.
    Config(String),
    /// Anything else that stops the run: also exit 2.
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<hardy_core::Error> for CliError {
    fn from(e: hardy_core::Error) -> Self {
        use hardy_core::Error as E;
        match e {
            E::Numerical(m) => CliError::Runtime(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: u64,
    pub failed: u64,
    /// Zero unless `--timing` was given.
    pub wall_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: Value,
    pub results: Vec<Value>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        return if n == 0 { Err(CliError::Config("--threads must be positive".into())) } else { Ok(Some(n)) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Constants(a) => commands::constants(a),
        Command::Identity(a) => commands::identity(a),
        Command::Lemma(a) => commands::lemma(a),
        Command::Parseval(a) => commands::parseval(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sharpness(a) => commands::sharpness(a),
        Command::Spectrum(a) => commands::spectrum(a),
    }
}

fn render_csv(out: &Outcome) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Runtime(e.to_string());
    w.write_record(&out.csv_header).map_err(io)?;
    for row in &out.csv_rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let err = |e: std::io::Error| CliError::Runtime(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(text.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match thread_count(cli.threads)? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(|| dispatch(&cli.command)),
        None => dispatch(&cli.command),
    }
}

/// Parses arguments, runs the command and writes the report; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("hardy-forge: {e}");
            return 2;
        }
    };
    let text = match cli.format {
        Format::Json => {
            let report = Report {
                config: serde_json::to_value(&cli).expect("config serializes"),
                results: outcome.results.clone(),
                summary: Summary {
                    passed: outcome.passed,
                    failed: outcome.failed,
                    wall_ms: if cli.timing { start.elapsed().as_millis() as u64 } else { 0 },
                    estimate: outcome.estimate.clone(),
                },
            };
            report.to_json()
        }
        Format::Csv => match render_csv(&outcome) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("hardy-forge: {e}");
                return 2;
            }
        },
    };
    let written = match &cli.out {
        Some(path) => write_atomic(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Runtime(e.to_string())),
    };
    if let Err(e) = written {
        eprintln!("hardy-forge: {e}");
        return 2;
    }
    if outcome.failed == 0 {
        0
    } else {
        1
    }
}
