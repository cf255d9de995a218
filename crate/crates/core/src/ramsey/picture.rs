//! Interaction picture: `ρ^I_mn(t) = e^{i(E_m − E_n)t} ρ_mn(t)`.

use crate::error::{Error, Result};
use crate::numerics::matrix::{ComplexMatrix, C64};
use crate::numerics::DensityMatrix;

fn rephase(rho: &DensityMatrix, energies: &[f64], t: f64, sign: f64) -> Result<DensityMatrix> {
    let d = rho.dim();
    if energies.len() != d {
        return Err(Error::DimensionMismatch {
            what: "energies vs state".into(),
            expected: d,
            found: energies.len(),
        });
    }
    let m = ComplexMatrix::from_fn(d, |i, j| {
        if i == j {
            rho.get(i, i)
        } else {
            rho.get(i, j) * C64::from_polar(1.0, sign * (energies[i] - energies[j]) * t)
        }
    });
    DensityMatrix::new(m)
}

pub fn to_interaction_picture(
    rho: &DensityMatrix,
    energies: &[f64],
    t: f64,
) -> Result<DensityMatrix> {
    rephase(rho, energies, t, 1.0)
}

pub fn from_interaction_picture(
    rho_i: &DensityMatrix,
    energies: &[f64],
    t: f64,
) -> Result<DensityMatrix> {
    rephase(rho_i, energies, t, -1.0)
}
