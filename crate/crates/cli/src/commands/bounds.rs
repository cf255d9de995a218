//! `clock bounds`: resolution bounds for a Ramsey time.

use serde::{Deserialize, Serialize};

use clock_core::fringe::{bounds_report, BoundsReport, PointerSpec};
use clock_core::SCHEMA_VERSION;

use super::Context;
use crate::config::{check_schema, default_schema};
use crate::error::CliResult;
use crate::output::{ensure_dir, write_json, Outcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub ramsey_time_s: f64,
    pub transition_energy_ev: Option<f64>,
    pub quoted_fractional: Option<f64>,
    pub pointer: Option<PointerSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsOutput {
    pub schema_version: u32,
    pub command: String,
    pub config: BoundsConfig,
    pub report: BoundsReport,
}

pub fn run(ctx: &Context) -> CliResult<Outcome> {
    let cfg: BoundsConfig = ctx.require_config("bounds")?;
    check_schema(cfg.schema_version)?;
    let report = bounds_report(
        cfg.ramsey_time_s,
        cfg.transition_energy_ev,
        cfg.quoted_fractional,
        cfg.pointer,
    )?;
    let output = BoundsOutput {
        schema_version: SCHEMA_VERSION,
        command: "bounds".into(),
        config: cfg,
        report,
    };
    ensure_dir(&ctx.out_dir)?;
    let path = write_json(&ctx.out_dir, "bounds.json", &output)?;
    Ok(Outcome::new(true)
        .with("gamma_bound_ev", output.report.gamma_bound_ev)
        .with(
            "fractional_imprecision",
            output.report.fractional_imprecision,
        )
        .with_files(&[path]))
}
