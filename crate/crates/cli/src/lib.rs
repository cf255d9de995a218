//! Command-line front end: reads JSON configs, runs simulations, scans, fits
//! and the property suite, and writes JSON/CSV artifacts deterministically.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

pub use commands::{Command, Context};
pub use error::{CliError, CliResult, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};

/// Caps rayon's worker count.
pub const WORKERS_ENV: &str = "CLOCK_NUM_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "clock",
    version,
    about = "Clock-transition decoherence: simulate, scan, fit, verify"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON config; optional for `verify` only.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Overrides the config's seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Overrides grid points (scan), dark-period snapshots (simulate) or case count (verify).
    #[arg(long, value_name = "N")]
    pub points: Option<usize>,
    /// Log errors only.
    #[arg(long)]
    pub quiet: bool,
}

impl Cli {
    pub fn context(&self) -> Context {
        Context {
            config_path: self.config.clone(),
            out_dir: self.out.clone(),
            seed: self.seed,
            points: self.points,
        }
    }
}

/// Parses `CLOCK_NUM_WORKERS`; `None` when unset.
pub fn workers_from_env(value: Option<&str>) -> CliResult<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::input(format!(
                "{WORKERS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// Runs one command and prints the summary line; returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let name = cli.command.name();
    let result = workers_from_env(std::env::var(WORKERS_ENV).ok().as_deref()).and_then(|workers| {
        if let Some(n) = workers {
            // Fails only if a pool already exists, e.g. under a test harness.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        cli.command.run(&cli.context())
    });
    match result {
        Ok(outcome) => {
            let (status, code) = if outcome.ok {
                ("ok", EXIT_OK)
            } else {
                ("failed", EXIT_FAILURE)
            };
            output::print_summary(name, status, outcome.summary);
            code
        }
        Err(e) => {
            log::error!("{e}");
            let mut fields = serde_json::Map::new();
            fields.insert("error".into(), e.to_string().into());
            let status = if e.exit_code() == EXIT_INPUT {
                "input_error"
            } else {
                "error"
            };
            output::print_summary(name, status, fields);
            e.exit_code()
        }
    }
}
