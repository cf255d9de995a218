//! Seeded random matrices and states for property checks.
//!
//! All draws go through [`ChaCha8Rng`], so a seed reproduces the same
//! sequence on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::density::DensityMatrix;
use super::expm::matrix_exponential;
use super::matrix::{ComplexMatrix, C64, I};

pub type DetRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Complex Gaussian matrix with entries of standard deviation `scale` per component.
pub fn random_ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng) * scale)
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> ComplexMatrix {
    random_ginibre(rng, dim, scale).hermitian_part()
}

/// Unitary from the exponential of a random anti-Hermitian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, dim, 1.0);
    matrix_exponential(&h.scale(-I)).expect("finite input")
}

/// Mixed state `G G† / Tr(G G†)` for a Ginibre `G` (full rank almost surely).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = random_ginibre(rng, dim, 1.0);
    let rho = g.matmul(&g.adjoint());
    DensityMatrix::new(rho).expect("G G† is a valid state")
}

/// Random pure state `|ψ⟩⟨ψ|`.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let psi: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let rho = ComplexMatrix::from_fn(dim, |i, j| psi[i] * psi[j].conj());
    DensityMatrix::new(rho).expect("projector is a valid state")
}
