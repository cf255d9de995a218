//! Rotating-wave Ramsey sequence in the interaction picture.
//!
//! Pulse unitaries act on the `{g, e}` subspace (identity on spectators):
//!
//! ```text
//! U_gg = U_ee = cos(Ωτ/2)
//! U_eg = −i e^{+iΔω t_φ} sin(Ωτ/2)
//! U_ge = −i e^{−iΔω t_φ} sin(Ωτ/2)
//! ```
//!
//! `t_φ` is the instant at which the local-oscillator phase is read. The
//! detuning phase accrued inside a pulse is neglected (`|Δω| ≪ Ω`), so the
//! phase is read where each pulse meets the dark period: the end of the
//! first pulse and the start of the second. The oscillator then advances by
//! exactly `Δω·T` between pulses, which yields
//! `P_e = ½ sin²(Ωτ) [1 + e^{−ΓT} cos((Δω − ℰ)T)]`.

use serde::{Deserialize, Serialize};

use super::config::{ClockTransition, FringeParams, RamseyConfig, RegimeReport};
use crate::error::{Error, Result};
use crate::lindblad::{coherence_decay_matrix, StableBasisModel};
use crate::numerics::matrix::{ComplexMatrix, C64, I};
use crate::numerics::DensityMatrix;

/// Unitarity tolerance for [`apply_pulse`].
pub const UNITARY_TOL: f64 = 1e-12;

/// 2×2 pulse unitary in `(g, e)` order with oscillator phase read at `phase_time_s`.
pub fn pulse_unitary(cfg: &RamseyConfig, phase_time_s: f64) -> ComplexMatrix {
    let half = 0.5 * cfg.pulse_area();
    let (s, c) = half.sin_cos();
    let phase = cfg.delta_omega_rad_s * phase_time_s;
    let mut u = ComplexMatrix::zeros(2);
    u[(0, 0)] = C64::new(c, 0.0);
    u[(1, 1)] = C64::new(c, 0.0);
    u[(1, 0)] = -I * C64::from_polar(s, phase);
    u[(0, 1)] = -I * C64::from_polar(s, -phase);
    u
}

/// Embeds a `(g, e)` unitary into `dim` levels, identity on the rest.
pub fn embed_pulse(u: &ComplexMatrix, dim: usize, tr: ClockTransition) -> Result<ComplexMatrix> {
    tr.validate(dim)?;
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            what: "pulse unitary".into(),
            expected: 2,
            found: u.dim(),
        });
    }
    let mut full = ComplexMatrix::identity(dim);
    let idx = [tr.g_index, tr.e_index];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            full[(i, j)] = u[(a, b)];
        }
    }
    Ok(full)
}

/// `U ρ U†`.
pub fn apply_pulse(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            what: "pulse vs state".into(),
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    let deviation = u.unitary_defect();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.adjoint()))
}

/// What drives the dark-period evolution.
#[derive(Clone, Copy, Debug)]
pub enum FreeEvolution<'a> {
    /// Two-level `(g, e) = (0, 1)` coherence with `λ_eg = Γ − iℰ`.
    Params(&'a FringeParams),
    /// Every coherence `ρ^I_mn` decays with its own `λ_mn`.
    Model(&'a StableBasisModel),
}

/// Interaction-picture dark-period evolution for duration `t`.
pub fn free_evolution(
    rho_i: &DensityMatrix,
    source: FreeEvolution<'_>,
    t: f64,
) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "free evolution time must be non-negative, got {t}"
        )));
    }
    let d = rho_i.dim();
    let lambda = match source {
        FreeEvolution::Params(p) => {
            if d != 2 {
                return Err(Error::DimensionMismatch {
                    what: "fringe-params free evolution acts on two levels".into(),
                    expected: 2,
                    found: d,
                });
            }
            let l_eg = C64::new(p.gamma_rad_s, -p.eshift_rad_s);
            let mut lam = ComplexMatrix::zeros(2);
            lam[(1, 0)] = l_eg;
            lam[(0, 1)] = l_eg.conj();
            lam
        }
        FreeEvolution::Model(m) => {
            if m.dim() != d {
                return Err(Error::DimensionMismatch {
                    what: "model vs state".into(),
                    expected: m.dim(),
                    found: d,
                });
            }
            coherence_decay_matrix(m)?.matrix().clone()
        }
    };
    let out = ComplexMatrix::from_fn(d, |m, n| rho_i.get(m, n) * (-lambda[(m, n)] * t).exp());
    DensityMatrix::new(out)
}

/// Interaction-picture states along the sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RamseyTrace {
    pub after_pulse1: DensityMatrix,
    pub after_free: DensityMatrix,
    pub final_state: DensityMatrix,
    /// `ρ^I_ee` at the end of the second pulse.
    pub pe: f64,
    pub regime: RegimeReport,
}

/// Full RWA Ramsey sequence on a stable-basis model, starting in `|g⟩`.
///
/// The dark period stays in the interaction picture, where the carrier
/// phases `(E_m − E_n)t` cancel exactly; routing it through the Schrödinger
/// picture would lose every digit of phase at optical frequencies.
pub fn ramsey_sequence(
    model: &StableBasisModel,
    tr: ClockTransition,
    cfg: &RamseyConfig,
) -> Result<RamseyTrace> {
    cfg.validate()?;
    let d = model.dim();
    tr.validate(d)?;

    let rho0 = DensityMatrix::basis_state(d, tr.g_index)?;
    let u1 = embed_pulse(&pulse_unitary(cfg, cfg.pulse1_end_s()), d, tr)?;
    let after_pulse1 = apply_pulse(&rho0, &u1)?;
    let after_free = free_evolution(
        &after_pulse1,
        FreeEvolution::Model(model),
        cfg.ramsey_time_s,
    )?;
    let t2 = cfg.pulse2_start_s();

    let u2 = embed_pulse(&pulse_unitary(cfg, t2), d, tr)?;
    let final_state = apply_pulse(&after_free, &u2)?;
    let pe = final_state.population(tr.e_index);

    Ok(RamseyTrace {
        after_pulse1,
        after_free,
        final_state,
        pe,
        regime: cfg.regime(Some((model, tr))),
    })
}

/// Two-level RWA sequence driven directly by fringe parameters.
///
/// `Ωτ` comes from `cfg`; `params.omega_rabi_tau_rad` is ignored here.
pub fn ramsey_sequence_params(params: &FringeParams, cfg: &RamseyConfig) -> Result<RamseyTrace> {
    cfg.validate()?;
    params.validate()?;
    let rho0 = DensityMatrix::basis_state(2, 0)?;
    let after_pulse1 = apply_pulse(&rho0, &pulse_unitary(cfg, cfg.pulse1_end_s()))?;
    let after_free = free_evolution(
        &after_pulse1,
        FreeEvolution::Params(params),
        cfg.ramsey_time_s,
    )?;
    let final_state = apply_pulse(&after_free, &pulse_unitary(cfg, cfg.pulse2_start_s()))?;
    let pe = final_state.population(1);
    Ok(RamseyTrace {
        after_pulse1,
        after_free,
        final_state,
        pe,
        regime: cfg.regime(None),
    })
}

/// Closed-form fringe: `½ sin²(Ωτ) [1 + e^{−ΓT} cos((ω − E_e + E_g − ℰ)T)]`.
pub fn analytic_pe(params: &FringeParams, omega_offset: f64, ramsey_time_s: f64) -> f64 {
    let contrast = (-params.gamma_rad_s * ramsey_time_s).exp();
    let phase = (omega_offset - params.eshift_rad_s) * ramsey_time_s;
    params.amplitude() * (1.0 + contrast * phase.cos())
}
