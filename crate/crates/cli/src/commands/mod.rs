//! One module per subcommand. Each reads its config, writes its artifacts
//! into the output directory and returns an [`Outcome`].

pub mod bounds;
pub mod closure;
pub mod fit;
pub mod scan;
pub mod simulate;
pub mod verify;

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use crate::config::read_json;
use crate::error::{CliError, CliResult};
use crate::output::Outcome;

/// Inputs shared by every command after flag parsing.
#[derive(Clone, Debug)]
pub struct Context {
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub points: Option<usize>,
}

impl Context {
    /// Directory that relative paths inside the config resolve against.
    pub fn base_dir(&self) -> PathBuf {
        self.config_path
            .as_deref()
            .and_then(Path::parent)
            .map(Path::to_path_buf)
            .unwrap_or_default()
    }

    pub fn require_config<T: DeserializeOwned>(&self, command: &str) -> CliResult<T> {
        let path = self
            .config_path
            .as_deref()
            .ok_or_else(|| CliError::input(format!("{command} requires --config <path>")))?;
        read_json(path)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simulate,
    Scan,
    Fit,
    Closure,
    Bounds,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Scan => "scan",
            Command::Fit => "fit",
            Command::Closure => "closure",
            Command::Bounds => "bounds",
            Command::Verify => "verify",
        }
    }

    pub fn run(self, ctx: &Context) -> CliResult<Outcome> {
        match self {
            Command::Simulate => simulate::run(ctx),
            Command::Scan => scan::run(ctx),
            Command::Fit => fit::run(ctx),
            Command::Closure => closure::run(ctx),
            Command::Bounds => bounds::run(ctx),
            Command::Verify => verify::run(ctx),
        }
    }
}
