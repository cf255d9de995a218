//! Closed-form evolution in a basis of stable states.
//!
//! For a diagonal generator every coherence evolves independently:
//! `ρ_mn(t) = ρ_mn(0) · exp[−i(E_m − E_n)t − λ_mn t]` with
//!
//! ```text
//! λ_mn = Σ_α [ ½|ℓ_αm|² + ½|ℓ_αn|² − ℓ_αm ℓ*_αn ]
//!      = Σ_α [ −i Im(ℓ_αm ℓ*_αn) + ½|ℓ_αm − ℓ_αn|² ]
//! ```

use serde::{Deserialize, Serialize};

use super::generator::StableBasisModel;
use crate::error::{Error, Result};
use crate::numerics::matrix::{ComplexMatrix, C64, I};
use crate::numerics::DensityMatrix;

/// Complex coherence decay rates `λ_mn` (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoherenceDecayMatrix {
    lambda: ComplexMatrix,
}

impl CoherenceDecayMatrix {
    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.lambda[(m, n)]
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }

    /// `max |λ_mn|`.
    pub fn max_abs(&self) -> f64 {
        self.lambda.max_abs()
    }
}

/// First form: `½|ℓ_m|² + ½|ℓ_n|² − ℓ_m ℓ*_n`, summed over α.
pub fn lambda_product_form(model: &StableBasisModel, m: usize, n: usize) -> C64 {
    model
        .jump_eigenvalues()
        .iter()
        .map(|row| {
            let (a, b) = (row[m], row[n]);
            C64::new(0.5 * a.norm_sqr() + 0.5 * b.norm_sqr(), 0.0) - a * b.conj()
        })
        .sum()
}

/// Second form: `−i Im(ℓ_m ℓ*_n) + ½|ℓ_m − ℓ_n|²`, summed over α.
pub fn lambda_split_form(model: &StableBasisModel, m: usize, n: usize) -> C64 {
    model
        .jump_eigenvalues()
        .iter()
        .map(|row| {
            let (a, b) = (row[m], row[n]);
            -I * (a * b.conj()).im + 0.5 * (a - b).norm_sqr()
        })
        .sum()
}

pub fn coherence_decay_matrix(model: &StableBasisModel) -> Result<CoherenceDecayMatrix> {
    let d = model.dim();
    let scale: f64 = model
        .jump_eigenvalues()
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .max(1.0);
    let mut lambda = ComplexMatrix::zeros(d);
    for m in 0..d {
        for n in 0..d {
            let first = lambda_product_form(model, m, n);
            let second = lambda_split_form(model, m, n);
            if (first - second).norm() > 1e-12 * scale {
                return Err(Error::NumericalFailure(format!(
                    "coherence decay forms disagree at ({m}, {n}): {first} vs {second}"
                )));
            }
            // The split form makes λ_mm = 0 and Re λ ≥ 0 exact.
            lambda[(m, n)] = second;
        }
    }
    Ok(CoherenceDecayMatrix { lambda })
}

/// Closed-form propagation of a stable-basis model.
pub fn analytic_propagate(
    model: &StableBasisModel,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    let d = model.dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch {
            what: "state vs model".into(),
            expected: d,
            found: rho0.dim(),
        });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "propagation time must be finite and non-negative, got {t}"
        )));
    }
    let lambda = coherence_decay_matrix(model)?;
    let e = model.energies();
    let out = ComplexMatrix::from_fn(d, |m, n| {
        if m == n {
            return rho0.get(m, m);
        }
        let exponent = -I * ((e[m] - e[n]) * t) - lambda.get(m, n) * t;
        rho0.get(m, n) * exponent.exp()
    });
    DensityMatrix::new(out)
}
