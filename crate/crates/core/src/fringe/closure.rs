//! Pairwise shifts and the three-level closure test.
//!
//! Every stable-basis model gives `ℰ_ij + ℰ_jk + ℰ_ki = −Im(ℓ_i ℓ_j* + ℓ_j ℓ_k* + ℓ_k ℓ_i*)`,
//! which generally differs from zero. Energy differences around the same loop
//! always sum to zero. A nonzero closure therefore separates a decoherence
//! shift from a redefinition of the level energies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::StableBasisModel;
use crate::numerics::C64;
use crate::ramsey::{ClockTransition, FringeParams};

/// `ℰ_ij = −Σ_α Im(ℓ_{αi} ℓ_{αj}*)` (rad/s). Antisymmetric in `(i, j)`.
pub fn pair_shift(model: &StableBasisModel, i: usize, j: usize) -> f64 {
    -model
        .jump_eigenvalues()
        .iter()
        .map(|row| (row[i] * row[j].conj()).im)
        .sum::<f64>()
}

/// `Γ_ij = ½ Σ_α |ℓ_{αi} − ℓ_{αj}|²` (rad/s).
pub fn pair_gamma(model: &StableBasisModel, i: usize, j: usize) -> f64 {
    0.5 * model
        .jump_eigenvalues()
        .iter()
        .map(|row| (row[i] - row[j]).norm_sqr())
        .sum::<f64>()
}

/// Fringe parameters of a transition, with `Ωτ = π/2`.
pub fn gamma_params_from_model(
    model: &StableBasisModel,
    tr: ClockTransition,
) -> Result<FringeParams> {
    tr.validate(model.dim())?;
    FringeParams::new(
        pair_gamma(model, tr.g_index, tr.e_index),
        pair_shift(model, tr.g_index, tr.e_index),
        std::f64::consts::FRAC_PI_2,
    )
}

/// Two-level model with gap `E_e − E_g` and one jump whose eigenvalues give
/// `(Γ, ℰ)`: `ℓ_g = p`, `ℓ_e = p e^{iφ}` with `tan(φ/2) = Γ/ℰ`, `p² = Γ/(1 − cos φ)`.
/// `Γ = 0` forces `ℓ_g = ℓ_e` and hence `ℰ = 0`.
pub fn model_from_params(
    gap_rad_s: f64,
    gamma_rad_s: f64,
    eshift_rad_s: f64,
) -> Result<StableBasisModel> {
    if !(gamma_rad_s >= 0.0) || !gamma_rad_s.is_finite() || !eshift_rad_s.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need finite Γ ≥ 0 and ℰ, got ({gamma_rad_s}, {eshift_rad_s})"
        )));
    }
    if gamma_rad_s == 0.0 {
        if eshift_rad_s != 0.0 {
            return Err(Error::InvalidInput("Γ = 0 admits only ℰ = 0".into()));
        }
        return StableBasisModel::new(vec![0.0, gap_rad_s], vec![]);
    }
    let phi = 2.0 * gamma_rad_s.atan2(eshift_rad_s);
    let p = (gamma_rad_s / (1.0 - phi.cos())).sqrt();
    StableBasisModel::new(
        vec![0.0, gap_rad_s],
        vec![vec![C64::new(p, 0.0), C64::from_polar(p, phi)]],
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub levels: [usize; 3],
    /// `[ℰ_ij, ℰ_jk, ℰ_ki]` (rad/s).
    pub pair_shifts: [f64; 3],
    /// `ℰ_ij + ℰ_jk + ℰ_ki` (rad/s).
    pub closure_sum: f64,
    /// `(E_i − E_j) + (E_j − E_k) + (E_k − E_i)`; zero by construction.
    pub energy_closure: f64,
    /// `[E_i − E_j, E_j − E_k, E_k − E_i]` (rad/s).
    pub energy_differences: [f64; 3],
}

pub fn three_level_closure(model: &StableBasisModel, levels: [usize; 3]) -> Result<ClosureReport> {
    let [i, j, k] = levels;
    let d = model.dim();
    if levels.iter().any(|&m| m >= d) {
        return Err(Error::InvalidInput(format!(
            "levels {levels:?} out of range for dimension {d}"
        )));
    }
    if i == j || j == k || k == i {
        return Err(Error::InvalidInput(format!(
            "closure needs three distinct levels, got {levels:?}"
        )));
    }
    let pair_shifts = [
        pair_shift(model, i, j),
        pair_shift(model, j, k),
        pair_shift(model, k, i),
    ];
    let e = model.energies();
    Ok(ClosureReport {
        levels,
        pair_shifts,
        closure_sum: pair_shifts.iter().sum(),
        energy_closure: 0.0,
        energy_differences: [e[i] - e[j], e[j] - e[k], e[k] - e[i]],
    })
}

/// `−Σ_α Im(ℓ_i ℓ_j* + ℓ_j ℓ_k* + ℓ_k ℓ_i*)` evaluated as one loop product.
pub fn closure_loop_form(model: &StableBasisModel, [i, j, k]: [usize; 3]) -> f64 {
    -model
        .jump_eigenvalues()
        .iter()
        .map(|r| {
            let s: C64 = r[i] * r[j].conj() + r[j] * r[k].conj() + r[k] * r[i].conj();
            s.im
        })
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::fixtures::random_stable_model;
    use crate::numerics::random::seeded;

    fn model(ell: [C64; 3]) -> StableBasisModel {
        StableBasisModel::new(vec![0.0, 1.0, 3.0], vec![ell.to_vec()]).unwrap()
    }

    #[test]
    fn hand_case_shift() {
        let m = StableBasisModel::new(
            vec![0.0, 1.0],
            vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]],
        )
        .unwrap();
        let p = gamma_params_from_model(&m, ClockTransition::default()).unwrap();
        assert!((p.gamma_rad_s - 1.0).abs() < 1e-15);
        assert!((p.eshift_rad_s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cube_roots_close_to_three_halves_sqrt3() {
        let w = |k: f64| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / 3.0);
        let r = three_level_closure(&model([w(0.0), w(1.0), w(2.0)]), [0, 1, 2]).unwrap();
        let expected = 1.5 * 3f64.sqrt();
        assert!(
            (r.closure_sum - expected).abs() < 1e-12,
            "{}",
            r.closure_sum
        );
        assert_eq!(r.energy_closure, 0.0);
    }

    #[test]
    fn real_eigenvalues_close_trivially() {
        let r = three_level_closure(
            &model([C64::new(0.3, 0.0), C64::new(-1.2, 0.0), C64::new(2.0, 0.0)]),
            [0, 1, 2],
        )
        .unwrap();
        assert!(r.closure_sum.abs() < 1e-15);
    }

    #[test]
    fn matches_loop_form_and_antisymmetry() {
        let mut rng = seeded(11);
        for _ in 0..50 {
            let m = random_stable_model(&mut rng, 4, 3, 2.0);
            let r = three_level_closure(&m, [0, 2, 3]).unwrap();
            assert!((r.closure_sum - closure_loop_form(&m, [0, 2, 3])).abs() < 1e-12);
            assert!((pair_shift(&m, 1, 2) + pair_shift(&m, 2, 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn params_model_round_trip() {
        for &(g, e) in &[(1.0, 0.0), (0.3, -2.0), (2.0, 5.0), (1e-3, 1e-4)] {
            let m = model_from_params(10.0, g, e).unwrap();
            let p = gamma_params_from_model(&m, ClockTransition::default()).unwrap();
            assert!((p.gamma_rad_s - g).abs() < 1e-12 * g.max(1.0));
            assert!((p.eshift_rad_s - e).abs() < 1e-12 * e.abs().max(1.0));
        }
        assert!(model_from_params(1.0, 0.0, 0.5).is_err());
        assert_eq!(
            model_from_params(1.0, 0.0, 0.0)
                .unwrap()
                .jump_eigenvalues()
                .len(),
            0
        );
    }

    #[test]
    fn rejects_repeated_levels() {
        let m = model([C64::new(1.0, 0.0); 3]);
        assert!(three_level_closure(&m, [0, 0, 1]).is_err());
        assert!(three_level_closure(&m, [0, 1, 5]).is_err());
    }
}
