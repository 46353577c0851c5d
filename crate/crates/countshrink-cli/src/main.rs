//! `countshrink` — command-line front end for the shrinkage toolkit.
//!
//! Four subcommands cover the full workflow: `fit` ingests a CSV of counts
//! and emits per-observation posterior estimates, `test` adds the induced
//! multiple-testing decision, `simulate` runs the seeded replication suites,
//! and `bench` times the core pipelines on synthetic data.
//!
//! Every run writes two files: the results table at `--out` and a sidecar
//! metadata record (`<out stem>.meta.json`) holding content digests, a full
//! configuration echo, and wall-clock timing. Floating-point fields are
//! serialized with 17 significant digits, so re-ingesting a results file
//! reproduces the numbers bit-exactly.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 assertion failure
//! (`simulate --assert` only).

mod args;
mod commands;
mod ingest;
mod record;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// How a run can fail, keyed to the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or flag values (exit 1).
    Usage(String),
    /// Unreadable, malformed, or unfittable input data (exit 2).
    Data(String),
    /// A `--assert` band was violated (exit 3).
    Assertion(String),
}

impl Failure {
    fn exit(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(1),
            Failure::Data(_) => ExitCode::from(2),
            Failure::Assertion(_) => ExitCode::from(3),
        }
    }

    fn describe(&self) -> (&'static str, &str) {
        match self {
            Failure::Usage(m) => ("usage error", m),
            Failure::Data(m) => ("data error", m),
            Failure::Assertion(m) => ("assertion failure", m),
        }
    }
}

/// Honors `COUNTSHRINK_THREADS` by capping the global thread pool before any
/// parallel work starts.
fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("COUNTSHRINK_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| {
        Failure::Usage(format!(
            "COUNTSHRINK_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    if threads == 0 {
        return Err(Failure::Usage(
            "COUNTSHRINK_THREADS must be at least 1".to_string(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("could not configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    match cli.command {
        Command::Fit(a) => commands::fit::run(&a),
        Command::Test(a) => commands::test::run(&a),
        Command::Simulate(a) => commands::simulate::run(&a),
        Command::Bench(a) => commands::bench::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive as "errors" but are successes.
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (kind, msg) = failure.describe();
            eprintln!("{kind}: {msg}");
            failure.exit()
        }
    }
}
