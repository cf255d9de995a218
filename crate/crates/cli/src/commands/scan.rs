//! `clock scan`: sampled fringe to CSV plus sidecar, with shape metrics when
//! the grid resolves the fringe.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use clock_core::fringe::{
    linear_grid, scan_fringe, shape_metrics, write_scan, FringeSource, NoiseSpec, ShapeMetrics,
};
use clock_core::lindblad::StableBasisModel;
use clock_core::ramsey::{ClockTransition, RamseyConfig};
use clock_core::SCHEMA_VERSION;

use super::Context;
use crate::config::{check_schema, default_schema, FringeParamsInput, System, SystemInput};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_json, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Detuning offset of the grid centre.
    #[serde(default)]
    pub center_rad_s: f64,
    pub span_rad_s: f64,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseInput {
    pub sigma: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub model: Option<StableBasisModel>,
    pub model_path: Option<PathBuf>,
    pub fringe_params: Option<FringeParamsInput>,
    pub transition: Option<ClockTransition>,
    pub ramsey: RamseyConfig,
    pub grid: GridSpec,
    pub noise: Option<NoiseInput>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedScan {
    pub system: System,
    pub ramsey: RamseyConfig,
    pub grid: GridSpec,
    pub noise: Option<NoiseSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub command: String,
    pub config: ResolvedScan,
    pub csv: String,
    pub points: usize,
    pub shape: Option<ShapeMetrics>,
    /// Why shape metrics were not computed.
    pub shape_skipped: Option<String>,
}

pub fn run(ctx: &Context) -> CliResult<Outcome> {
    let cfg: ScanConfig = ctx.require_config("scan")?;
    check_schema(cfg.schema_version)?;
    cfg.ramsey
        .validate()
        .map_err(|e| CliError::input(format!("ramsey: {e}")))?;
    let input = SystemInput {
        model: cfg.model,
        model_path: cfg.model_path,
        fringe_params: cfg.fringe_params,
    };
    let system = input.resolve(&ctx.base_dir(), cfg.transition, &cfg.ramsey)?;
    let mut grid = cfg.grid;
    if let Some(p) = ctx.points {
        grid.points = p;
    }
    let seed = ctx.seed.unwrap_or(cfg.seed);
    let noise = match cfg.noise {
        Some(n) if !(n.sigma >= 0.0) || !n.sigma.is_finite() => {
            return Err(CliError::input(format!(
                "noise.sigma must be non-negative, got {}",
                n.sigma
            )))
        }
        Some(n) => Some(NoiseSpec {
            seed,
            sigma: n.sigma,
        }),
        None => None,
    };
    let resolved = ResolvedScan {
        system,
        ramsey: cfg.ramsey,
        grid,
        noise,
    };

    let omegas = linear_grid(grid.center_rad_s, grid.span_rad_s, grid.points)
        .map_err(|e| CliError::input(format!("grid: {e}")))?;
    let source = match &resolved.system {
        System::Model { model, transition } => FringeSource::Model {
            model: model.clone(),
            transition: *transition,
        },
        System::FringeParams(p) => FringeSource::Params(*p),
    };
    let scan = scan_fringe(&source, &resolved.ramsey, &omegas, noise)?;
    let (shape, shape_skipped) = match shape_metrics(&scan) {
        Ok(m) => (Some(m), None),
        Err(e) => {
            log::warn!("shape metrics skipped: {e}");
            (None, Some(e.to_string()))
        }
    };

    ensure_dir(&ctx.out_dir)?;
    let csv = ctx.out_dir.join("scan.csv");
    write_scan(&scan, &csv)?;
    let report = ScanReport {
        schema_version: SCHEMA_VERSION,
        command: "scan".into(),
        config: resolved,
        csv: "scan.csv".into(),
        points: scan.len(),
        shape,
        shape_skipped,
    };
    let report_path = write_json(&ctx.out_dir, "scan_report.json", &report)?;
    let mut outcome = Outcome::new(true).with("points", scan.len());
    if let Some(m) = shape {
        outcome = outcome
            .with("min_max_ratio", m.min_max_ratio)
            .with("slope_point_ratio", m.slope_point_ratio);
    }
    let sidecar = ctx.out_dir.join("scan.json");
    Ok(outcome.with_files(&[csv, sidecar, report_path]))
}
