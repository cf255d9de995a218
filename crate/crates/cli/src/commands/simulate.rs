//! `clock simulate`: one Ramsey sequence with interaction-picture snapshots,
//! compared against the closed-form fringe.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use clock_core::fringe::gamma_params_from_model;
use clock_core::lindblad::StableBasisModel;
use clock_core::numerics::DensityMatrix;
use clock_core::ramsey::{
    analytic_pe, apply_pulse, embed_pulse, free_evolution, pulse_unitary, ramsey_sequence,
    ramsey_sequence_params, ClockTransition, FreeEvolution, FringeParams, RamseyConfig,
    RegimeReport,
};
use clock_core::SCHEMA_VERSION;

use super::Context;
use crate::config::{check_schema, default_schema, FringeParamsInput, System, SystemInput};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_json, Outcome};

pub const DEFAULT_SNAPSHOTS: usize = 11;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub model: Option<StableBasisModel>,
    pub model_path: Option<PathBuf>,
    pub fringe_params: Option<FringeParamsInput>,
    pub transition: Option<ClockTransition>,
    pub ramsey: RamseyConfig,
    /// Samples across the dark period, endpoints included.
    pub snapshots: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSimulate {
    pub system: System,
    pub ramsey: RamseyConfig,
    pub snapshots: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub label: String,
    pub time_s: f64,
    /// Interaction-picture state.
    pub rho: DensityMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub schema_version: u32,
    pub command: String,
    pub config: ResolvedSimulate,
    pub fringe_params: FringeParams,
    pub pe_sequence: f64,
    pub pe_closed_form: f64,
    /// `pe_sequence − pe_closed_form`.
    pub difference: f64,
    pub regime: RegimeReport,
    pub snapshots: Vec<Snapshot>,
}

pub fn run(ctx: &Context) -> CliResult<Outcome> {
    let cfg: SimulateConfig = ctx.require_config("simulate")?;
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
    let snapshots = ctx.points.or(cfg.snapshots).unwrap_or(DEFAULT_SNAPSHOTS);
    if snapshots < 2 {
        return Err(CliError::input(format!(
            "snapshots must be at least 2, got {snapshots}"
        )));
    }
    let resolved = ResolvedSimulate {
        system,
        ramsey: cfg.ramsey,
        snapshots,
    };
    let output = simulate(resolved)?;
    for w in &output.regime.warnings {
        log::warn!("regime: {w}");
    }

    ensure_dir(&ctx.out_dir)?;
    let path = write_json(&ctx.out_dir, "simulate.json", &output)?;
    Ok(Outcome::new(true)
        .with("pe_sequence", output.pe_sequence)
        .with("pe_closed_form", output.pe_closed_form)
        .with("difference", output.difference)
        .with("regime_warnings", output.regime.warnings.len())
        .with_files(&[path]))
}

pub fn simulate(config: ResolvedSimulate) -> CliResult<SimulateOutput> {
    let ramsey = config.ramsey;
    let (trace, params, dim, tr) = match &config.system {
        System::Model { model, transition } => {
            let trace = ramsey_sequence(model, *transition, &ramsey)?;
            let mut params = gamma_params_from_model(model, *transition)?;
            params.omega_rabi_tau_rad = ramsey.pulse_area();
            (trace, params, model.dim(), *transition)
        }
        System::FringeParams(p) => (
            ramsey_sequence_params(p, &ramsey)?,
            *p,
            2,
            ClockTransition::default(),
        ),
    };
    let source = match &config.system {
        System::Model { model, .. } => FreeEvolution::Model(model),
        System::FringeParams(p) => FreeEvolution::Params(p),
    };

    let rho0 = DensityMatrix::basis_state(dim, tr.g_index)?;
    let u1 = embed_pulse(&pulse_unitary(&ramsey, ramsey.pulse1_end_s()), dim, tr)?;
    let after_pulse1 = apply_pulse(&rho0, &u1)?;
    let mut snaps = vec![Snapshot {
        label: "initial".into(),
        time_s: ramsey.pulse1_start_s,
        rho: rho0,
    }];
    let n = config.snapshots;
    for k in 0..n {
        let dt = ramsey.ramsey_time_s * k as f64 / (n - 1) as f64;
        snaps.push(Snapshot {
            label: "dark".into(),
            time_s: ramsey.pulse1_end_s() + dt,
            rho: free_evolution(&after_pulse1, source, dt)?,
        });
    }
    snaps.push(Snapshot {
        label: "final".into(),
        time_s: ramsey.end_s(),
        rho: trace.final_state.clone(),
    });

    let pe_closed_form = analytic_pe(&params, ramsey.delta_omega_rad_s, ramsey.ramsey_time_s);
    Ok(SimulateOutput {
        schema_version: SCHEMA_VERSION,
        command: "simulate".into(),
        config,
        fringe_params: params,
        pe_sequence: trace.pe,
        pe_closed_form,
        difference: trace.pe - pe_closed_form,
        regime: trace.regime,
        snapshots: snaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn resolved(gamma: f64) -> ResolvedSimulate {
        let ramsey = RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0).unwrap();
        ResolvedSimulate {
            system: System::FringeParams(FringeParams::new(gamma, 0.0, FRAC_PI_2).unwrap()),
            ramsey,
            snapshots: 5,
        }
    }

    #[test]
    fn ideal_resonant_gives_unit_pe() {
        let out = simulate(resolved(0.0)).unwrap();
        assert!((out.pe_sequence - 1.0).abs() < 1e-14);
        assert!(out.difference.abs() < 1e-14);
        assert_eq!(out.snapshots.len(), 7);
    }

    #[test]
    fn unit_gamma_t() {
        let out = simulate(resolved(1.0)).unwrap();
        assert!(
            (out.pe_sequence - 0.6839).abs() < 5e-5,
            "{}",
            out.pe_sequence
        );
        let last_dark = &out.snapshots[5];
        let coherence = last_dark.rho.get(1, 0).norm();
        assert!((coherence - 0.5 * (-1.0f64).exp()).abs() < 1e-14);
    }
}
