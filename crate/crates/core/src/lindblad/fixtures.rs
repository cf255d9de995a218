//! Seeded random generators and named operators used by property checks and
//! `clock verify`.

use rand::Rng;

use super::generator::{LindbladGenerator, StableBasisModel};
use crate::numerics::matrix::{ComplexMatrix, C64};
use crate::numerics::random::{gaussian_complex, random_ginibre, random_hermitian};

/// `[[0, 1], [0, 0]]`: moves population from level 1 to level 0.
pub fn raising_operator() -> ComplexMatrix {
    ComplexMatrix::unit(2, 0, 1)
}

/// Generator with a random Hamiltonian and `n_jumps` random Ginibre jumps.
pub fn random_generator<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n_jumps: usize,
    scale: f64,
) -> LindbladGenerator {
    let h = random_hermitian(rng, dim, scale);
    let jumps = (0..n_jumps)
        .map(|_| random_ginibre(rng, dim, scale.sqrt() * 0.5))
        .collect();
    LindbladGenerator::new(h, jumps).expect("random generator is valid")
}

/// Random Hamiltonian with diagonal (hence normal) jump operators; satisfies
/// the entropy condition.
pub fn random_diagonal_jump_generator<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n_jumps: usize,
    scale: f64,
) -> LindbladGenerator {
    let h = random_hermitian(rng, dim, scale);
    let jumps = (0..n_jumps)
        .map(|_| {
            let diag: Vec<C64> = (0..dim)
                .map(|_| gaussian_complex(rng) * scale.sqrt() * 0.5)
                .collect();
            ComplexMatrix::from_diagonal(&diag)
        })
        .collect();
    LindbladGenerator::new(h, jumps).expect("random generator is valid")
}

/// Stable-basis model with energies in `[-scale, scale]` and Gaussian jump
/// eigenvalues of standard deviation `√scale / 2`.
pub fn random_stable_model<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n_jumps: usize,
    scale: f64,
) -> StableBasisModel {
    let energies = (0..dim).map(|_| rng.random_range(-scale..scale)).collect();
    let ells = (0..n_jumps)
        .map(|_| {
            (0..dim)
                .map(|_| gaussian_complex(rng) * scale.sqrt() * 0.5)
                .collect()
        })
        .collect();
    StableBasisModel::new(energies, ells).expect("random model is valid")
}
