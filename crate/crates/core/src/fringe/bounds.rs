//! Order-of-magnitude resolution limits.
//!
//! A Ramsey time `T` cannot resolve a decoherence rate much below `ħ/T`.
//! Dividing by the transition energy gives the fractional imprecision scale.
//! A macroscopic rotor's level spacing sets the opposite extreme.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant (eV·s).
pub const HBAR_EV_S: f64 = 6.582119569e-16;
/// Elementary charge; also J per eV.
pub const ELEMENTARY_CHARGE_C: f64 = 1.602176634e-19;
/// Reduced Planck constant (J·s), derived so both values stay consistent.
pub const HBAR_J_S: f64 = HBAR_EV_S * ELEMENTARY_CHARGE_C;

/// Al⁺ ¹S₀ → ³P₀ transition energy (eV).
pub const AL_ION_CLOCK_ENERGY_EV: f64 = 4.636;
/// Quoted Al⁺ fractional frequency agreement.
pub const AL_ION_FRACTIONAL: f64 = 3e-17;

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

pub fn rad_s_to_ev(rate_rad_s: f64) -> f64 {
    rate_rad_s * HBAR_EV_S
}

pub fn ev_to_rad_s(energy_ev: f64) -> f64 {
    energy_ev / HBAR_EV_S
}

/// `ħ/T` (eV).
pub fn gamma_bound_ev(ramsey_time_s: f64) -> Result<f64> {
    positive("ramsey_time_s", ramsey_time_s)?;
    Ok(HBAR_EV_S / ramsey_time_s)
}

/// `(ħ/T)/E`.
pub fn fractional_imprecision(ramsey_time_s: f64, transition_energy_ev: f64) -> Result<f64> {
    positive("transition_energy_ev", transition_energy_ev)?;
    Ok(gamma_bound_ev(ramsey_time_s)? / transition_energy_ev)
}

/// Absolute `Γ` bound (eV) implied by a fractional bound `Γ/E < fraction`.
pub fn gamma_bound_from_fractional(fraction: f64, transition_energy_ev: f64) -> Result<f64> {
    positive("fraction", fraction)?;
    positive("transition_energy_ev", transition_energy_ev)?;
    Ok(fraction * transition_energy_ev)
}

/// Level spacing `ħ²(2n+1)/(2I)` of a rod of mass `m` and length `L` rotating
/// about its centre, `I = mL²/12` (eV).
pub fn pointer_level_spacing(mass_kg: f64, length_m: f64, n: u32) -> Result<f64> {
    positive("mass_kg", mass_kg)?;
    positive("length_m", length_m)?;
    let inertia = mass_kg * length_m * length_m / 12.0;
    let joules = HBAR_J_S * HBAR_J_S * (2.0 * n as f64 + 1.0) / (2.0 * inertia);
    Ok(joules / ELEMENTARY_CHARGE_C)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointerBound {
    pub mass_kg: f64,
    pub length_m: f64,
    pub n: u32,
    pub spacing_ev: f64,
}

/// Both readings of a clock bound: absolute `Γ < ħ/T` for comparing
/// transitions directly, and `Γ/E` for comparing them relative to frequency.
/// Neither is preferred.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub ramsey_time_s: f64,
    pub gamma_bound_ev: f64,
    pub gamma_bound_rad_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition_energy_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractional_imprecision: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quoted_fractional: Option<f64>,
    /// `quoted_fractional · E` (eV).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled_gamma_bound_ev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointer: Option<PointerBound>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointerSpec {
    pub mass_kg: f64,
    pub length_m: f64,
    #[serde(default)]
    pub n: u32,
}

pub fn bounds_report(
    ramsey_time_s: f64,
    transition_energy_ev: Option<f64>,
    quoted_fractional: Option<f64>,
    pointer: Option<PointerSpec>,
) -> Result<BoundsReport> {
    let gamma_bound_ev = gamma_bound_ev(ramsey_time_s)?;
    let fractional_imprecision = transition_energy_ev
        .map(|e| fractional_imprecision(ramsey_time_s, e))
        .transpose()?;
    let scaled_gamma_bound_ev = match (quoted_fractional, transition_energy_ev) {
        (Some(f), Some(e)) => Some(gamma_bound_from_fractional(f, e)?),
        (Some(_), None) => {
            return Err(Error::InvalidInput(
                "quoted_fractional needs transition_energy_ev".into(),
            ))
        }
        _ => None,
    };
    let pointer = pointer
        .map(|p| {
            pointer_level_spacing(p.mass_kg, p.length_m, p.n).map(|spacing_ev| PointerBound {
                mass_kg: p.mass_kg,
                length_m: p.length_m,
                n: p.n,
                spacing_ev,
            })
        })
        .transpose()?;
    Ok(BoundsReport {
        ramsey_time_s,
        gamma_bound_ev,
        gamma_bound_rad_s: ev_to_rad_s(gamma_bound_ev),
        transition_energy_ev,
        fractional_imprecision,
        quoted_fractional,
        scaled_gamma_bound_ev,
        pointer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_minute_bound() {
        let b = gamma_bound_ev(600.0).unwrap();
        assert!((b / 1.097e-18 - 1.0).abs() < 1e-3, "{b}");
        assert!((b - 1e-18).abs() < 0.5e-18);
    }

    #[test]
    fn optical_clock_one_second() {
        let f = fractional_imprecision(1.0, 0.66).unwrap();
        assert!((f / 1e-15 - 1.0).abs() < 0.01, "{f}");
    }

    #[test]
    fn aluminium_ion_bound_statement() {
        let r = bounds_report(
            1.0,
            Some(AL_ION_CLOCK_ENERGY_EV),
            Some(AL_ION_FRACTIONAL),
            None,
        )
        .unwrap();
        let g = r.scaled_gamma_bound_ev.unwrap();
        assert!((g / AL_ION_CLOCK_ENERGY_EV - 3e-17).abs() < 1e-30);
        assert!(bounds_report(1.0, None, Some(3e-17), None).is_err());
    }

    #[test]
    fn definitional_values() {
        assert!((gamma_bound_ev(HBAR_EV_S).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma_bound_ev(1.0).unwrap() - 6.582119569e-16).abs() < 1e-30);
        let e = gamma_bound_ev(3.0).unwrap();
        assert!((fractional_imprecision(3.0, e).unwrap() - 1.0).abs() < 1e-15);
        let a = pointer_level_spacing(1.0, 1.0, 0).unwrap();
        let b = pointer_level_spacing(2.0, 1.0, 0).unwrap();
        assert!((a / b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gram_centimetre_pointer() {
        let s0 = pointer_level_spacing(1e-3, 1e-2, 0).unwrap();
        assert!((s0 / 4.16e-42 - 1.0).abs() < 1e-2, "{s0}");
        let s1 = pointer_level_spacing(1e-3, 1e-2, 1).unwrap();
        assert!((s1 / s0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unit_round_trip() {
        assert!((rad_s_to_ev(ev_to_rad_s(2.5)) - 2.5).abs() < 1e-15);
        assert!((HBAR_J_S / 1.054571817e-34 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(gamma_bound_ev(0.0).is_err());
        assert!(pointer_level_spacing(-1.0, 1.0, 0).is_err());
        assert!(fractional_imprecision(1.0, 0.0).is_err());
    }
}
