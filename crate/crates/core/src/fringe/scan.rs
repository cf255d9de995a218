use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::closure::gamma_params_from_model;
use crate::error::{Error, Result};
use crate::lindblad::StableBasisModel;
use crate::numerics::random::seeded;
use crate::ramsey::{analytic_pe, ramsey_sequence, ClockTransition, FringeParams, RamseyConfig};
use crate::SCHEMA_VERSION;

/// Where the fringe values come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FringeSource {
    /// Closed-form fringe. Uses the params' own `Ωτ`.
    Params(FringeParams),
    /// Full RWA sequence on a stable-basis model. Uses the config's `Ωτ`.
    Model {
        model: StableBasisModel,
        transition: ClockTransition,
    },
}

/// Additive i.i.d. Gaussian noise on `P_e`, clipped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub seed: u64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanMeta {
    pub schema_version: u32,
    pub ramsey: RamseyConfig,
    /// Generating parameters; derived from the model for model sources.
    pub params: Option<FringeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<StableBasisModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<ClockTransition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    /// Set when the values carry synthetic measurement noise.
    pub measured: bool,
}

impl ScanMeta {
    /// Metadata for data of unknown origin.
    pub fn measured(ramsey: RamseyConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            ramsey,
            params: None,
            model: None,
            transition: None,
            noise: None,
            measured: true,
        }
    }
}

/// Sampled `P_e(ω)` with `ω` given as an offset from `E_e − E_g` (rad/s).
#[derive(Clone, Debug, PartialEq)]
pub struct FringeScan {
    omegas: Vec<f64>,
    pe: Vec<f64>,
    pub meta: ScanMeta,
}

/// Slack for `P_e` values that round just outside `[0, 1]`.
const PE_SLACK: f64 = 1e-12;

impl FringeScan {
    pub fn new(omegas: Vec<f64>, pe: Vec<f64>, meta: ScanMeta) -> Result<Self> {
        if omegas.len() != pe.len() {
            return Err(Error::DimensionMismatch {
                what: "scan pe vs omegas".into(),
                expected: omegas.len(),
                found: pe.len(),
            });
        }
        if omegas.is_empty() {
            return Err(Error::InvalidInput("scan is empty".into()));
        }
        check_increasing(&omegas)?;
        let mut pe = pe;
        for (i, p) in pe.iter_mut().enumerate() {
            if !(*p >= -PE_SLACK && *p <= 1.0 + PE_SLACK) {
                return Err(Error::InvalidInput(format!(
                    "pe[{i}] = {p} is outside [0, 1]"
                )));
            }
            *p = p.clamp(0.0, 1.0);
        }
        Ok(Self { omegas, pe, meta })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn pe(&self) -> &[f64] {
        &self.pe
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn ramsey_time_s(&self) -> f64 {
        self.meta.ramsey.ramsey_time_s
    }
}

fn check_increasing(xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { what: "scan grid" });
    }
    if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(format!(
            "scan grid is not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

/// `points` evenly spaced offsets covering `[center − span/2, center + span/2]`.
pub fn linear_grid(center: f64, span: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidInput(format!(
            "a grid needs at least 2 points, got {points}"
        )));
    }
    if !(span > 0.0) || !span.is_finite() || !center.is_finite() {
        return Err(Error::InvalidInput(format!(
            "grid span must be positive and finite, got {span}"
        )));
    }
    let step = span / (points - 1) as f64;
    let start = center - 0.5 * span;
    Ok((0..points).map(|i| start + step * i as f64).collect())
}

pub fn scan_fringe(
    source: &FringeSource,
    cfg: &RamseyConfig,
    grid: &[f64],
    noise: Option<NoiseSpec>,
) -> Result<FringeScan> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::InvalidInput("scan grid is empty".into()));
    }
    check_increasing(grid)?;

    let t = cfg.ramsey_time_s;
    let (clean, meta_params, model, transition) = match source {
        FringeSource::Params(p) => {
            p.validate()?;
            let pe: Vec<f64> = grid.iter().map(|&w| analytic_pe(p, w, t)).collect();
            (pe, *p, None, None)
        }
        FringeSource::Model { model, transition } => {
            let pe = grid
                .par_iter()
                .map(|&w| {
                    ramsey_sequence(model, *transition, &cfg.with_detuning(w)).map(|tr| tr.pe)
                })
                .collect::<Result<Vec<f64>>>()?;
            let mut derived = gamma_params_from_model(model, *transition)?;
            derived.omega_rabi_tau_rad = cfg.pulse_area();
            (pe, derived, Some(model.clone()), Some(*transition))
        }
    };

    let pe = match noise {
        None => clean,
        Some(spec) => add_noise(&clean, spec)?,
    };

    let meta = ScanMeta {
        schema_version: SCHEMA_VERSION,
        ramsey: *cfg,
        params: Some(meta_params),
        model,
        transition,
        noise,
        measured: noise.is_some(),
    };
    FringeScan::new(grid.to_vec(), pe, meta)
}

fn add_noise(clean: &[f64], spec: NoiseSpec) -> Result<Vec<f64>> {
    if !(spec.sigma >= 0.0) || !spec.sigma.is_finite() {
        return Err(Error::InvalidInput(format!(
            "noise sigma must be non-negative, got {}",
            spec.sigma
        )));
    }
    let normal = Normal::new(0.0, spec.sigma).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut rng = seeded(spec.seed);
    Ok(clean
        .iter()
        .map(|&p| (p + normal.sample(&mut rng)).clamp(0.0, 1.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cfg() -> RamseyConfig {
        RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0).unwrap()
    }

    #[test]
    fn ideal_scan_is_symmetric_with_peak_at_zero() {
        let p = FringeParams::new(0.0, 0.0, FRAC_PI_2).unwrap();
        let grid = linear_grid(0.0, 4.0 * PI, 101).unwrap();
        let scan = scan_fringe(&FringeSource::Params(p), &cfg(), &grid, None).unwrap();
        let n = scan.len();
        for i in 0..n {
            assert!((scan.pe()[i] - scan.pe()[n - 1 - i]).abs() < 1e-12);
        }
        assert!((scan.pe()[n / 2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unit_gamma_t_contrast() {
        let p = FringeParams::new(1.0, 0.0, FRAC_PI_2).unwrap();
        let scan = scan_fringe(&FringeSource::Params(p), &cfg(), &[0.0, PI], None).unwrap();
        let (max, min) = (scan.pe()[0], scan.pe()[1]);
        assert!(((max - min) / (max + min) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn noise_is_seeded_and_clipped() {
        let p = FringeParams::new(0.0, 0.0, FRAC_PI_2).unwrap();
        let grid = linear_grid(0.0, 2.0 * PI, 50).unwrap();
        let noise = Some(NoiseSpec {
            seed: 42,
            sigma: 0.2,
        });
        let a = scan_fringe(&FringeSource::Params(p), &cfg(), &grid, noise).unwrap();
        let b = scan_fringe(&FringeSource::Params(p), &cfg(), &grid, noise).unwrap();
        assert_eq!(a, b);
        assert!(a.meta.measured);
        assert!(a.pe().iter().all(|&x| (0.0..=1.0).contains(&x)));
        let c = scan_fringe(
            &FringeSource::Params(p),
            &cfg(),
            &grid,
            Some(NoiseSpec {
                seed: 43,
                sigma: 0.2,
            }),
        )
        .unwrap();
        assert_ne!(a.pe(), c.pe());
    }

    #[test]
    fn rejects_bad_grids() {
        let p = FringeSource::Params(FringeParams::new(0.0, 0.0, 1.0).unwrap());
        assert!(scan_fringe(&p, &cfg(), &[], None).is_err());
        assert!(scan_fringe(&p, &cfg(), &[0.0, 0.0], None).is_err());
        assert!(linear_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn scan_validation() {
        let meta = ScanMeta::measured(cfg());
        assert!(FringeScan::new(vec![0.0, 1.0], vec![0.5], meta.clone()).is_err());
        assert!(FringeScan::new(vec![0.0, 1.0], vec![0.5, 1.5], meta.clone()).is_err());
        assert!(FringeScan::new(vec![1.0, 0.0], vec![0.5, 0.5], meta).is_err());
    }
}
