//! `clock fit`: least-squares fit of a scan file.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use clock_core::fringe::{
    fit_fringe, read_scan, read_scan_with_meta, shape_metrics, FitInit, FitResult, ScanMeta,
    ShapeMetrics,
};
use clock_core::ramsey::{FringeParams, RamseyConfig};
use clock_core::SCHEMA_VERSION;

use super::Context;
use crate::config::{check_schema, default_schema, resolve_path};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_json, Outcome};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub scan_path: PathBuf,
    /// Required when the scan has no sidecar; overrides the sidecar otherwise.
    pub ramsey: Option<RamseyConfig>,
    pub init: Option<FitInit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedFit {
    pub scan_path: String,
    pub ramsey: RamseyConfig,
    pub init: Option<FitInit>,
}

/// Fit against the parameters recorded in the scan sidecar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub generating: FringeParams,
    pub gamma_abs_error_rad_s: f64,
    pub eshift_abs_error_rad_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOutput {
    pub schema_version: u32,
    pub command: String,
    pub config: ResolvedFit,
    pub fit: FitResult,
    pub fitted_params: FringeParams,
    pub shape: Option<ShapeMetrics>,
    pub recovery: Option<Recovery>,
}

pub fn run(ctx: &Context) -> CliResult<Outcome> {
    let cfg: FitConfig = ctx.require_config("fit")?;
    check_schema(cfg.schema_version)?;
    let csv = resolve_path(&ctx.base_dir(), &cfg.scan_path);
    let scan = match cfg.ramsey {
        Some(r) => {
            r.validate()
                .map_err(|e| CliError::input(format!("ramsey: {e}")))?;
            read_scan_with_meta(&csv, ScanMeta::measured(r))?
        }
        None => read_scan(&csv)?,
    };
    let fit = fit_fringe(&scan, cfg.init)?;
    if !fit.converged {
        log::warn!("fit did not converge after {} iterations", fit.iterations);
    }
    if fit.gamma_lower_bound_only {
        log::warn!("data bound Γ only from below");
    }
    let ramsey = scan.meta.ramsey;
    let fitted_params = fit.params(ramsey.pulse_area())?;
    let recovery = scan.meta.params.filter(|_| cfg.ramsey.is_none()).map(|g| {
        let period = std::f64::consts::TAU / ramsey.ramsey_time_s;
        let de = fit.eshift_rad_s - g.eshift_rad_s;
        Recovery {
            generating: g,
            gamma_abs_error_rad_s: (fit.gamma_rad_s - g.gamma_rad_s).abs(),
            eshift_abs_error_rad_s: (de - period * (de / period).round()).abs(),
        }
    });
    let output = FitOutput {
        schema_version: SCHEMA_VERSION,
        command: "fit".into(),
        config: ResolvedFit {
            scan_path: csv.display().to_string(),
            ramsey,
            init: cfg.init,
        },
        shape: shape_metrics(&scan).ok(),
        fit,
        fitted_params,
        recovery,
    };

    ensure_dir(&ctx.out_dir)?;
    let path = write_json(&ctx.out_dir, "fit.json", &output)?;
    let f = &output.fit;
    Ok(Outcome::new(f.converged)
        .with("gamma_rad_s", f.gamma_rad_s)
        .with("eshift_rad_s", f.eshift_rad_s)
        .with("converged", f.converged)
        .with("gamma_lower_bound_only", f.gamma_lower_bound_only)
        .with_files(&[path]))
}
