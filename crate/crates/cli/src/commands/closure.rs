//! `clock closure`: three-level closure of the decoherence shifts.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use clock_core::fringe::{three_level_closure, ClosureReport};
use clock_core::lindblad::StableBasisModel;
use clock_core::SCHEMA_VERSION;

use super::Context;
use crate::config::{check_schema, default_schema, load_model};
use crate::error::CliResult;
use crate::output::{ensure_dir, write_json, Outcome};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub model: Option<StableBasisModel>,
    pub model_path: Option<PathBuf>,
    #[serde(default = "first_three")]
    pub levels: [usize; 3],
}

fn first_three() -> [usize; 3] {
    [0, 1, 2]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedClosure {
    pub model: StableBasisModel,
    pub levels: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureOutput {
    pub schema_version: u32,
    pub command: String,
    pub config: ResolvedClosure,
    pub report: ClosureReport,
}

pub fn run(ctx: &Context) -> CliResult<Outcome> {
    let cfg: ClosureConfig = ctx.require_config("closure")?;
    check_schema(cfg.schema_version)?;
    let model = load_model(&ctx.base_dir(), &cfg.model, &cfg.model_path)?;
    let report = three_level_closure(&model, cfg.levels)?;
    let output = ClosureOutput {
        schema_version: SCHEMA_VERSION,
        command: "closure".into(),
        config: ResolvedClosure {
            model,
            levels: cfg.levels,
        },
        report,
    };
    ensure_dir(&ctx.out_dir)?;
    let path = write_json(&ctx.out_dir, "closure.json", &output)?;
    Ok(Outcome::new(true)
        .with("closure_sum_rad_s", output.report.closure_sum)
        .with("energy_closure_rad_s", output.report.energy_closure)
        .with_files(&[path]))
}
