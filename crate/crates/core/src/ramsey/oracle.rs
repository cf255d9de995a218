//! Exact driven evolution without the rotating-wave approximation.
//!
//! The drive operator `H'` is Hermitian and couples only `g` and `e`, so the
//! added term `H' e^{−iωt} + H'† e^{iωt} = 2 cos(ωt) H'` keeps the
//! counter-rotating part that the RWA drops. Integration runs in the
//! interaction picture of `H₀ = diag(E)`. The jump operators are diagonal, so
//! the dissipator is unchanged by that frame and the only time dependence is
//! `V_I,eg(t) = 2 H'_eg cos(ωt) e^{i(E_e − E_g)t}`. Field-on segments use
//! fixed-step RK4 resolving the fastest frequency `|ω| + |E_e − E_g|`; dark
//! segments use the exact propagator of the dissipator.

use serde::{Deserialize, Serialize};

use super::config::{ClockTransition, RamseyConfig};
use crate::error::{Error, Result};
use crate::lindblad::superop::{apply_superoperator, propagator, rk4_step_timed};
use crate::lindblad::{LindbladGenerator, StableBasisModel};
use crate::numerics::hermitian_eigenvalues;
use crate::numerics::matrix::{ComplexMatrix, C64, I};

/// Minimum RK4 steps per period of the fastest oscillation.
pub const MIN_STEPS_PER_PERIOD: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub omega_rad_s: f64,
    /// `H'_eg` (rad/s); `Ω/2` for a real positive coupling.
    #[serde(with = "crate::numerics::matrix::complex")]
    pub coupling: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveSegment {
    pub duration_s: f64,
    pub field_on: bool,
}

/// Drive and two-pulse schedule equivalent to `cfg` on `model`.
pub fn ramsey_schedule(
    model: &StableBasisModel,
    tr: ClockTransition,
    cfg: &RamseyConfig,
) -> (Drive, Vec<DriveSegment>) {
    let drive = Drive {
        omega_rad_s: tr.reference_frequency(model) + cfg.delta_omega_rad_s,
        coupling: C64::new(0.5 * cfg.omega_rabi_rad_s, 0.0),
    };
    let mut schedule = Vec::new();
    if cfg.pulse1_start_s > 0.0 {
        schedule.push(DriveSegment {
            duration_s: cfg.pulse1_start_s,
            field_on: false,
        });
    }
    schedule.extend([
        DriveSegment {
            duration_s: cfg.tau_s,
            field_on: true,
        },
        DriveSegment {
            duration_s: cfg.ramsey_time_s,
            field_on: false,
        },
        DriveSegment {
            duration_s: cfg.tau_s,
            field_on: true,
        },
    ]);
    (drive, schedule)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub pe: f64,
    pub duration_s: f64,
    /// Final state in the interaction picture, as integrated (not re-projected).
    pub final_interaction: ComplexMatrix,
    /// Smallest eigenvalue of the Hermitian part of the final state; slightly
    /// negative values measure integrator error on near-pure states.
    pub min_eigenvalue: f64,
    pub trace_error: f64,
    pub rk4_steps: usize,
}

/// Integrates the driven master equation from `|g⟩` at `t = 0`.
pub fn exact_driven_oracle(
    model: &StableBasisModel,
    tr: ClockTransition,
    drive: &Drive,
    schedule: &[DriveSegment],
    steps_per_period: usize,
) -> Result<OracleOutcome> {
    let d = model.dim();
    tr.validate(d)?;
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::UnderResolved {
            given: steps_per_period,
            required: MIN_STEPS_PER_PERIOD,
        });
    }
    if !drive.omega_rad_s.is_finite() || !(drive.coupling.norm().is_finite()) {
        return Err(Error::NonFinite { what: "drive" });
    }

    let omega0 = tr.reference_frequency(model);
    let jumps = model
        .jump_eigenvalues()
        .iter()
        .map(|row| ComplexMatrix::from_diagonal(row))
        .collect();
    let dissipative = LindbladGenerator::new(ComplexMatrix::zeros(d), jumps)?;
    let fastest = (drive.omega_rad_s.abs() + omega0.abs()).max(2.0 * drive.coupling.norm());

    let mut rho = ComplexMatrix::projector(d, tr.g_index);
    let mut t = 0.0;
    let mut total_steps = 0;

    for seg in schedule {
        if !(seg.duration_s >= 0.0) || !seg.duration_s.is_finite() {
            return Err(Error::InvalidInput(format!(
                "segment duration must be finite and non-negative, got {}",
                seg.duration_s
            )));
        }
        if seg.duration_s == 0.0 {
            continue;
        }
        if !seg.field_on || drive.coupling.norm() == 0.0 {
            rho = apply_superoperator(&propagator(&dissipative, seg.duration_s)?, &rho)?;
        } else {
            let periods = seg.duration_s * fastest / std::f64::consts::TAU;
            let steps = ((periods * steps_per_period as f64).ceil() as usize).max(steps_per_period);
            let h = seg.duration_s / steps as f64;
            for k in 0..steps {
                let t0 = t + k as f64 * h;
                rho = rk4_step_timed(&rho, t0, h, |tt, r| {
                    driven_rhs(&dissipative, tr, drive, omega0, tt, r)
                });
            }
            total_steps += steps;
        }
        t += seg.duration_s;
    }

    if !rho.is_finite() {
        return Err(Error::NumericalFailure(
            "driven integration diverged".into(),
        ));
    }
    let min_eigenvalue = hermitian_eigenvalues(&rho.hermitian_part())?[0];
    Ok(OracleOutcome {
        pe: rho[(tr.e_index, tr.e_index)].re,
        duration_s: t,
        trace_error: (rho.trace() - C64::new(1.0, 0.0)).norm(),
        min_eigenvalue,
        final_interaction: rho,
        rk4_steps: total_steps,
    })
}

fn driven_rhs(
    dissipative: &LindbladGenerator,
    tr: ClockTransition,
    drive: &Drive,
    omega0: f64,
    t: f64,
    rho: &ComplexMatrix,
) -> ComplexMatrix {
    let v =
        drive.coupling * (2.0 * (drive.omega_rad_s * t).cos()) * C64::from_polar(1.0, omega0 * t);
    let mut hd = ComplexMatrix::zeros(rho.dim());
    hd[(tr.e_index, tr.g_index)] = v;
    hd[(tr.g_index, tr.e_index)] = v.conj();
    &dissipative.rhs(rho) + &hd.commutator(rho).scale(-I)
}
