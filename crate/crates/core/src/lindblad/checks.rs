//! Structural checks: the entropy condition and stability of basis states.

use serde::{Deserialize, Serialize};

use super::generator::LindbladGenerator;
use crate::error::{Error, Result};
use crate::numerics::matrix::{complex_vec, ComplexMatrix, C64};

/// Threshold on commutator max-norms and residuals.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyCondition {
    /// `‖Σ_α (L_α†L_α − L_α L_α†)‖_max`.
    pub residual: f64,
    pub satisfied: bool,
}

/// Entropy is non-decreasing for every state iff `Σ_α (L_α†L_α − L_α L_α†) = 0`.
pub fn entropy_condition_check(gen: &LindbladGenerator) -> EntropyCondition {
    let residual = entropy_defect(gen).max_abs();
    EntropyCondition {
        residual,
        satisfied: residual <= STRUCTURE_TOL,
    }
}

fn entropy_defect(gen: &LindbladGenerator) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(gen.dim());
    for l in gen.jumps() {
        let ld = l.adjoint();
        acc = &acc + &(&ld.matmul(l) - &l.matmul(&ld));
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub state: usize,
    /// `‖[L_α, Λ_m]‖_max` per jump.
    pub jump_commutators: Vec<f64>,
    /// `‖[L_α†, Λ_m]‖_max` per jump.
    pub jump_adjoint_commutators: Vec<f64>,
    pub hamiltonian_commutator: f64,
    /// `‖RHS(Λ_m)‖_max`: zero iff `Λ_m` is stationary.
    pub stationarity_residual: f64,
    /// `Tr Σ_α [L_α, Λ_m]†[L_α, Λ_m]` (non-negative).
    pub commutator_trace_term: f64,
    /// `Tr Λ_m Σ_α (L_α†L_α − L_α L_α†)`.
    pub entropy_trace_term: f64,
    /// Joint eigenstate of every `L_α`, `L_α†`, and `H` within tolerance.
    pub stable: bool,
    /// `ℓ_αm` when stable.
    #[serde(with = "opt_complex_vec", default)]
    pub jump_eigenvalues: Option<Vec<C64>>,
    /// `E_m` when stable.
    pub energy: Option<f64>,
}

mod opt_complex_vec {
    use super::{complex_vec, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrap(#[serde(with = "complex_vec")] Vec<C64>);

    pub fn serialize<S: Serializer>(v: &Option<Vec<C64>>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(Wrap).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<C64>>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// Tests whether basis state `|m⟩` is a joint eigenstate of the generator's
/// operators, and evaluates both terms of the trace identity
/// `0 = Tr Σ[L,Λ]†[L,Λ] + Tr Λ Σ(L†L − LL†)` that holds for stationary `Λ_m`.
pub fn stability_check(gen: &LindbladGenerator, m: usize) -> Result<StabilityReport> {
    let d = gen.dim();
    if m >= d {
        return Err(Error::InvalidInput(format!(
            "state index {m} out of range for dimension {d}"
        )));
    }
    let proj = ComplexMatrix::projector(d, m);

    let mut jump_commutators = Vec::with_capacity(gen.jumps().len());
    let mut jump_adjoint_commutators = Vec::with_capacity(gen.jumps().len());
    let mut commutator_trace_term = 0.0;
    for l in gen.jumps() {
        let c = l.commutator(&proj);
        jump_commutators.push(c.max_abs());
        jump_adjoint_commutators.push(l.adjoint().commutator(&proj).max_abs());
        commutator_trace_term += c.adjoint().matmul(&c).trace().re;
    }
    let hamiltonian_commutator = gen.hamiltonian().commutator(&proj).max_abs();
    let entropy_trace_term = entropy_defect(gen)[(m, m)].re;
    let stationarity_residual = gen.rhs(&proj).max_abs();

    let stable = jump_commutators
        .iter()
        .chain(&jump_adjoint_commutators)
        .chain(std::iter::once(&hamiltonian_commutator))
        .all(|&x| x <= STRUCTURE_TOL);

    let (jump_eigenvalues, energy) = if stable {
        (
            Some(gen.jumps().iter().map(|l| l[(m, m)]).collect()),
            Some(gen.hamiltonian()[(m, m)].re),
        )
    } else {
        (None, None)
    };

    Ok(StabilityReport {
        state: m,
        jump_commutators,
        jump_adjoint_commutators,
        hamiltonian_commutator,
        stationarity_residual,
        commutator_trace_term,
        entropy_trace_term,
        stable,
        jump_eigenvalues,
        energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::fixtures::{raising_operator, random_diagonal_jump_generator};
    use crate::lindblad::superop::propagate;
    use crate::numerics::random::seeded;
    use crate::numerics::{von_neumann_entropy, DensityMatrix};

    #[test]
    fn diagonal_jumps_satisfy_condition() {
        let mut rng = seeded(2);
        let g = random_diagonal_jump_generator(&mut rng, 3, 4, 1.0);
        let c = entropy_condition_check(&g);
        assert!(c.satisfied);
        assert!(c.residual < 1e-15);
    }

    #[test]
    fn empty_jump_list_satisfies_condition() {
        let g = LindbladGenerator::unitary(ComplexMatrix::identity(2)).unwrap();
        assert!(entropy_condition_check(&g).satisfied);
    }

    #[test]
    fn raising_operator_violates_condition_and_lowers_entropy() {
        let g = LindbladGenerator::new(ComplexMatrix::zeros(2), vec![raising_operator()]).unwrap();
        let c = entropy_condition_check(&g);
        assert!(!c.satisfied);
        assert_eq!(c.residual, 1.0);
        let mixed = DensityMatrix::maximally_mixed(2);
        let later = propagate(&g, &mixed, 1.0).unwrap();
        assert!(von_neumann_entropy(&later).unwrap() < 2f64.ln() - 1e-3);
    }

    #[test]
    fn diagonal_generator_states_are_stable() {
        let l = ComplexMatrix::from_diagonal(&[C64::new(0.5, 0.1), C64::new(-0.2, 0.0)]);
        let g = LindbladGenerator::new(ComplexMatrix::from_real_diagonal(&[1.0, 4.0]), vec![l])
            .unwrap();
        for m in 0..2 {
            let r = stability_check(&g, m).unwrap();
            assert!(r.stable);
            assert!(r.stationarity_residual < 1e-15);
            assert_eq!(r.jump_eigenvalues.unwrap()[0], g.jumps()[0][(m, m)]);
            assert_eq!(r.energy.unwrap(), [1.0, 4.0][m]);
        }
    }

    #[test]
    fn raising_operator_breaks_stability() {
        // [L, Λ₁] = L Λ₁ − Λ₁ L = |0⟩⟨1| − 0.
        let g = LindbladGenerator::new(ComplexMatrix::zeros(2), vec![raising_operator()]).unwrap();
        let excited = stability_check(&g, 1).unwrap();
        assert!(!excited.stable);
        assert_eq!(excited.jump_commutators[0], 1.0);
        assert!(excited.stationarity_residual > 0.5);

        // |0⟩ is stationary (dark state), yet not a joint eigenstate: the
        // trace identity balances a positive commutator term against a
        // negative entropy term.
        let ground = stability_check(&g, 0).unwrap();
        assert!(!ground.stable);
        assert!(ground.stationarity_residual < 1e-15);
        assert_eq!(ground.commutator_trace_term, 1.0);
        assert_eq!(ground.entropy_trace_term, -1.0);
    }

    #[test]
    fn out_of_range_index() {
        let g = LindbladGenerator::unitary(ComplexMatrix::zeros(2)).unwrap();
        assert!(stability_check(&g, 2).is_err());
    }
}
