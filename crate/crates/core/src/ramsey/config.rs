use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::{coherence_decay_matrix, StableBasisModel};

/// The two stable levels probed by the clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockTransition {
    pub g_index: usize,
    pub e_index: usize,
}

impl ClockTransition {
    pub fn new(g_index: usize, e_index: usize) -> Self {
        Self { g_index, e_index }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.g_index == self.e_index {
            return Err(Error::InvalidInput(
                "clock transition needs two distinct levels".into(),
            ));
        }
        if self.g_index >= dim || self.e_index >= dim {
            return Err(Error::InvalidInput(format!(
                "transition ({}, {}) out of range for dimension {dim}",
                self.g_index, self.e_index
            )));
        }
        Ok(())
    }

    /// `E_e − E_g` (rad/s).
    pub fn reference_frequency(&self, model: &StableBasisModel) -> f64 {
        model.energies()[self.e_index] - model.energies()[self.g_index]
    }
}

impl Default for ClockTransition {
    fn default() -> Self {
        Self::new(0, 1)
    }
}

/// Two square pulses of length `τ` separated by a dark period `T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamseyConfig {
    pub tau_s: f64,
    pub ramsey_time_s: f64,
    pub omega_rabi_rad_s: f64,
    /// `Δω = ω − (E_e − E_g)`.
    #[serde(default)]
    pub delta_omega_rad_s: f64,
    #[serde(default)]
    pub pulse1_start_s: f64,
}

impl RamseyConfig {
    pub fn new(
        tau_s: f64,
        ramsey_time_s: f64,
        omega_rabi_rad_s: f64,
        delta_omega_rad_s: f64,
    ) -> Result<Self> {
        let cfg = Self {
            tau_s,
            ramsey_time_s,
            omega_rabi_rad_s,
            delta_omega_rad_s,
            pulse1_start_s: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config whose pulse area `Ωτ` equals `area` with `τ = T·tau_fraction`.
    pub fn with_pulse_area(
        area: f64,
        ramsey_time_s: f64,
        tau_fraction: f64,
        delta_omega_rad_s: f64,
    ) -> Result<Self> {
        let tau = ramsey_time_s * tau_fraction;
        Self::new(tau, ramsey_time_s, area / tau, delta_omega_rad_s)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("tau_s", self.tau_s)?;
        positive("ramsey_time_s", self.ramsey_time_s)?;
        positive("omega_rabi_rad_s", self.omega_rabi_rad_s)?;
        if !self.delta_omega_rad_s.is_finite() || !self.pulse1_start_s.is_finite() {
            return Err(Error::NonFinite {
                what: "ramsey config",
            });
        }
        Ok(())
    }

    pub fn with_detuning(mut self, delta_omega_rad_s: f64) -> Self {
        self.delta_omega_rad_s = delta_omega_rad_s;
        self
    }

    /// `Ωτ` (rad).
    pub fn pulse_area(&self) -> f64 {
        self.omega_rabi_rad_s * self.tau_s
    }

    pub fn pulse1_end_s(&self) -> f64 {
        self.pulse1_start_s + self.tau_s
    }

    pub fn pulse2_start_s(&self) -> f64 {
        self.pulse1_start_s + self.tau_s + self.ramsey_time_s
    }

    pub fn end_s(&self) -> f64 {
        self.pulse2_start_s() + self.tau_s
    }

    /// Evaluates the approximation regime. Nothing here is enforced.
    pub fn regime(&self, model: Option<(&StableBasisModel, ClockTransition)>) -> RegimeReport {
        let detuning_ratio = self.delta_omega_rad_s.abs() / self.omega_rabi_rad_s;
        let mut report = RegimeReport {
            detuning_ratio,
            pulse_decay: None,
            carrier_cycles: None,
            spectator_separation: None,
            warnings: Vec::new(),
        };
        if detuning_ratio > REGIME_SMALL {
            report.warnings.push(format!(
                "|Δω|/Ω = {detuning_ratio:.3e} is not small; pulse unitaries ignore detuning"
            ));
        }
        if let Some((model, tr)) = model {
            if let Ok(lambda) = coherence_decay_matrix(model) {
                let v = self.tau_s * lambda.max_abs();
                report.pulse_decay = Some(v);
                if v > REGIME_SMALL {
                    report.warnings.push(format!(
                        "τ·max|λ| = {v:.3e} is not small; decoherence during pulses is ignored"
                    ));
                }
            }
            let omega = tr.reference_frequency(model) + self.delta_omega_rad_s;
            let cycles = self.tau_s * omega.abs();
            report.carrier_cycles = Some(cycles);
            if cycles < REGIME_LARGE {
                report.warnings.push(format!(
                    "τ·|ω| = {cycles:.3e} is not large; rotating-wave approximation is doubtful"
                ));
            }
            let e = model.energies();
            let sep = (0..model.dim())
                .filter(|&m| m != tr.g_index && m != tr.e_index)
                .flat_map(|m| [(e[tr.e_index] - e[m]).abs(), (e[tr.g_index] - e[m]).abs()])
                .fold(f64::INFINITY, f64::min);
            if sep.is_finite() {
                let v = self.tau_s * sep;
                report.spectator_separation = Some(v);
                if v < REGIME_LARGE {
                    report.warnings.push(format!(
                        "τ·|E − E_m| = {v:.3e} for a spectator level is not large"
                    ));
                }
            }
        }
        report
    }
}

/// Thresholds standing in for "≪ 1" and "≫ 1".
pub const REGIME_SMALL: f64 = 0.1;
pub const REGIME_LARGE: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub detuning_ratio: f64,
    pub pulse_decay: Option<f64>,
    pub carrier_cycles: Option<f64>,
    pub spectator_separation: Option<f64>,
    pub warnings: Vec<String>,
}

impl RegimeReport {
    pub fn ok(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Fringe parameters: decoherence rate `Γ`, frequency shift `ℰ`, pulse area `Ωτ`.
///
/// The clock coherence decays as `ρ^I_eg ∝ e^{−λ_eg t}` with `λ_eg = Γ − iℰ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FringeParams {
    pub gamma_rad_s: f64,
    pub eshift_rad_s: f64,
    #[serde(default = "half_pi")]
    pub omega_rabi_tau_rad: f64,
}

fn half_pi() -> f64 {
    std::f64::consts::FRAC_PI_2
}

impl FringeParams {
    pub fn new(gamma_rad_s: f64, eshift_rad_s: f64, omega_rabi_tau_rad: f64) -> Result<Self> {
        let p = Self {
            gamma_rad_s,
            eshift_rad_s,
            omega_rabi_tau_rad,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_rad_s >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "Γ must be non-negative, got {}",
                self.gamma_rad_s
            )));
        }
        if !self.gamma_rad_s.is_finite()
            || !self.eshift_rad_s.is_finite()
            || !self.omega_rabi_tau_rad.is_finite()
        {
            return Err(Error::NonFinite {
                what: "fringe params",
            });
        }
        Ok(())
    }

    /// `½ sin²(Ωτ)`: the fringe's mean level and half its ideal contrast.
    pub fn amplitude(&self) -> f64 {
        0.5 * self.omega_rabi_tau_rad.sin().powi(2)
    }
}
