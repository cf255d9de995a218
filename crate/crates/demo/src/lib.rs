//! Browser bindings. Each export takes plain numbers and returns a JSON
//! string; the page parses it and draws on a canvas. Times are in units of
//! the Ramsey time `T = 1 s`, so `Γ` and `ℰ` are entered as `ΓT` and `ℰT`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use wasm_bindgen::prelude::*;

use clock_core::fringe::{
    fit_fringe, linear_grid, predicted_ratios, scan_fringe, shape_metrics, FitResult, FringeSource,
    NoiseSpec, ShapeMetrics,
};
use clock_core::lindblad::fixtures::{raising_operator, random_diagonal_jump_generator};
use clock_core::lindblad::{entropy_condition_check, propagate, LindbladGenerator};
use clock_core::numerics::random::{random_density, seeded};
use clock_core::numerics::{von_neumann_entropy, ComplexMatrix, DensityMatrix};
use clock_core::ramsey::{FringeParams, RamseyConfig};

/// Two fringe periods either side of resonance.
const SPAN: f64 = 4.0 * PI;

#[derive(Debug, Serialize)]
pub struct FringeView {
    pub omegas: Vec<f64>,
    pub pe: Vec<f64>,
    pub shape: Option<ShapeMetrics>,
    /// `(min/max, slope/peak)` from the closed forms.
    pub predicted: (f64, f64),
}

#[derive(Debug, Serialize)]
pub struct FitView {
    pub omegas: Vec<f64>,
    pub pe: Vec<f64>,
    /// Fitted curve on the same grid.
    pub fitted: Vec<f64>,
    pub fit: FitResult,
}

#[derive(Debug, Serialize)]
pub struct EntropyView {
    pub times: Vec<f64>,
    pub entropy: Vec<f64>,
    pub condition_residual: f64,
    pub condition_satisfied: bool,
}

fn ramsey() -> Result<RamseyConfig, String> {
    RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0).map_err(|e| e.to_string())
}

pub fn fringe_view(gamma_t: f64, eshift_t: f64, points: usize) -> Result<FringeView, String> {
    let params = FringeParams::new(gamma_t, eshift_t, FRAC_PI_2).map_err(|e| e.to_string())?;
    let grid = linear_grid(0.0, SPAN, points).map_err(|e| e.to_string())?;
    let scan = scan_fringe(&FringeSource::Params(params), &ramsey()?, &grid, None)
        .map_err(|e| e.to_string())?;
    Ok(FringeView {
        shape: shape_metrics(&scan).ok(),
        predicted: predicted_ratios(gamma_t),
        omegas: scan.omegas().to_vec(),
        pe: scan.pe().to_vec(),
    })
}

pub fn fit_view(
    gamma_t: f64,
    eshift_t: f64,
    sigma: f64,
    points: usize,
    seed: u64,
) -> Result<FitView, String> {
    if !(sigma >= 0.0) {
        return Err(format!("noise σ must be non-negative, got {sigma}"));
    }
    let cfg = ramsey()?;
    let params = FringeParams::new(gamma_t, eshift_t, FRAC_PI_2).map_err(|e| e.to_string())?;
    let grid = linear_grid(0.0, SPAN, points).map_err(|e| e.to_string())?;
    let noise = (sigma > 0.0).then_some(NoiseSpec { seed, sigma });
    let scan = scan_fringe(&FringeSource::Params(params), &cfg, &grid, noise)
        .map_err(|e| e.to_string())?;
    let fit = fit_fringe(&scan, None).map_err(|e| e.to_string())?;
    let fitted = grid
        .iter()
        .map(|&w| fit.amplitude * (1.0 + (-fit.gamma_rad_s).exp() * (w - fit.eshift_rad_s).cos()))
        .collect();
    Ok(FitView {
        omegas: grid,
        pe: scan.pe().to_vec(),
        fitted,
        fit,
    })
}

/// `raising = true` uses the single raising-operator jump, which breaks the
/// entropy condition; otherwise a seeded random diagonal-jump generator.
pub fn entropy_view(
    raising: bool,
    seed: u64,
    steps: usize,
    dt: f64,
) -> Result<EntropyView, String> {
    if !(dt > 0.0) || steps == 0 {
        return Err("need steps ≥ 1 and dt > 0".into());
    }
    let mut rng = seeded(seed);
    let (gen, rho0) = if raising {
        let g = LindbladGenerator::new(ComplexMatrix::zeros(2), vec![raising_operator()])
            .map_err(|e| e.to_string())?;
        (g, DensityMatrix::maximally_mixed(2))
    } else {
        let g = random_diagonal_jump_generator(&mut rng, 3, 2, 1.0);
        (g, random_density(&mut rng, 3))
    };
    let condition = entropy_condition_check(&gen);
    let times: Vec<f64> = (0..=steps).map(|k| dt * k as f64).collect();
    let entropy = times
        .iter()
        .map(|&t| propagate(&gen, &rho0, t).and_then(|r| von_neumann_entropy(&r)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(EntropyView {
        times,
        entropy,
        condition_residual: condition.residual,
        condition_satisfied: condition.satisfied,
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Noiseless fringe with its shape metrics.
#[wasm_bindgen]
pub fn fringe_curve(gamma_t: f64, eshift_t: f64, points: usize) -> Result<String, JsError> {
    to_json(fringe_view(gamma_t, eshift_t, points))
}

/// Seeded noisy scan and its least-squares fit.
#[wasm_bindgen]
pub fn noisy_fit(
    gamma_t: f64,
    eshift_t: f64,
    sigma: f64,
    points: usize,
    seed: u32,
) -> Result<String, JsError> {
    to_json(fit_view(gamma_t, eshift_t, sigma, points, seed as u64))
}

/// Von Neumann entropy along a trajectory.
#[wasm_bindgen]
pub fn entropy_trajectory(
    raising: bool,
    seed: u32,
    steps: usize,
    dt: f64,
) -> Result<String, JsError> {
    to_json(entropy_view(raising, seed as u64, steps, dt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fringe_view_reports_golden_ratios() {
        let v = fringe_view(1.0, 0.0, 401).unwrap();
        let s = v.shape.unwrap();
        assert!((s.min_max_ratio - v.predicted.0).abs() < 1e-3);
        assert!((s.slope_point_ratio - v.predicted.1).abs() < 1e-3);
        assert_eq!(v.pe.len(), 401);
    }

    #[test]
    fn coarse_view_has_no_shape() {
        assert!(fringe_view(1.0, 0.0, 30).unwrap().shape.is_none());
    }

    #[test]
    fn noiseless_fit_is_exact() {
        let v = fit_view(0.8, 0.3, 0.0, 200, 1).unwrap();
        assert!((v.fit.gamma_rad_s - 0.8).abs() < 1e-8);
        let worst =
            v.pe.iter()
                .zip(&v.fitted)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
        assert!(worst < 1e-10);
    }

    #[test]
    fn entropy_dichotomy() {
        let ok = entropy_view(false, 3, 20, 0.2).unwrap();
        assert!(ok.condition_satisfied);
        assert!(ok.entropy.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        let bad = entropy_view(true, 0, 20, 0.2).unwrap();
        assert!(!bad.condition_satisfied);
        assert!(bad.entropy[0] - bad.entropy[20] > 1e-3);
    }

    #[test]
    fn invalid_inputs_are_errors() {
        assert!(fringe_view(-1.0, 0.0, 100).is_err());
        assert!(fit_view(1.0, 0.0, -0.1, 100, 0).is_err());
        assert!(entropy_view(true, 0, 0, 0.1).is_err());
    }
}
