//! Validated density matrices and von Neumann entropy.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::eigen::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;

/// Hermitian, unit-trace, positive-semidefinite state.
///
/// Construction symmetrizes `(ρ + ρ†)/2` and rescales the trace to one before
/// validating positivity, so small integrator drift is absorbed.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::normalize(matrix)?;
        let min = hermitian_eigenvalues(&rho)?.first().copied().unwrap_or(0.0);
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {min:e} is below {PSD_TOL:e}"
            )));
        }
        Ok(Self { matrix: rho })
    }

    /// Symmetrizes and normalizes without the positivity check. Used where a
    /// caller reports positivity failures itself.
    pub(crate) fn normalize(matrix: ComplexMatrix) -> Result<ComplexMatrix> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite {
                what: "density matrix",
            });
        }
        if matrix.dim() == 0 {
            return Err(Error::InvalidState("zero-dimensional state".into()));
        }
        let h = matrix.hermitian_part();
        let tr = h.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr:e} is not positive")));
        }
        Ok(h.scale_real(1.0 / tr))
    }

    /// The pure basis state `|m⟩⟨m|`.
    pub fn basis_state(dim: usize, m: usize) -> Result<Self> {
        if m >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {m} out of range for dimension {dim}"
            )));
        }
        Ok(Self {
            matrix: ComplexMatrix::projector(dim, m),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalized) state vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let d = psi.len();
        Self::new(ComplexMatrix::from_fn(d, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    pub fn population(&self, m: usize) -> f64 {
        self.matrix[(m, m)].re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn von_neumann_entropy(&self) -> Result<f64> {
        von_neumann_entropy(self)
    }
}

/// `S = −Σ pᵢ ln pᵢ` in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = rho.eigenvalues()?;
    let mut s = 0.0;
    for p in spectrum {
        if p < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {p:e} in entropy evaluation"
            )));
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s.max(0.0))
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{random_density, random_unitary, seeded};

    #[test]
    fn pure_state_has_zero_entropy() {
        let g = DensityMatrix::basis_state(2, 0).unwrap();
        assert_eq!(von_neumann_entropy(&g).unwrap(), 0.0);
    }

    #[test]
    fn maximally_mixed_qubit() {
        let s = von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((s - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn diagonal_three_quarters() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap();
        let expected = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert!((von_neumann_entropy(&rho).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.5623).abs() < 1e-4);
    }

    #[test]
    fn construction_absorbs_drift() {
        let mut m = ComplexMatrix::from_real_diagonal(&[0.6, 0.4000001]);
        m[(0, 1)] = C64::new(0.1, 1e-9);
        m[(1, 0)] = C64::new(0.1, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(rho.matrix().hermitian_defect() <= 1e-12);
        assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let m = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
    }

    #[test]
    fn entropy_bounds_and_unitary_invariance() {
        let mut rng = seeded(5);
        for d in 2..=5 {
            let rho = random_density(&mut rng, d);
            let s = von_neumann_entropy(&rho).unwrap();
            assert!(s >= 0.0 && s <= (d as f64).ln() + 1e-12);
            let u = random_unitary(&mut rng, d);
            let rotated = DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.adjoint())).unwrap();
            assert!((von_neumann_entropy(&rotated).unwrap() - s).abs() < 1e-10);
        }
    }
}
