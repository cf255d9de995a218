//! Vectorized Liouvillian, propagation, and complete-positivity checks.
//!
//! Vectorization is column-stacking throughout: `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use serde::{Deserialize, Serialize};

use super::generator::LindbladGenerator;
use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eigenvalues, matrix::I, matrix_exponential, ComplexMatrix, DensityMatrix,
};

/// Trace drift tolerated by [`propagate`] before the result is renormalized.
pub const TRACE_TOL: f64 = 1e-10;

/// Choi eigenvalues at or above this are accepted as positive.
pub const CHOI_TOL: f64 = -1e-8;

/// `−i(1⊗H − Hᵀ⊗1)`.
pub fn hamiltonian_superoperator(gen: &LindbladGenerator) -> ComplexMatrix {
    let d = gen.dim();
    let id = ComplexMatrix::identity(d);
    let h = gen.hamiltonian();
    (&id.kron(h) - &h.transpose().kron(&id)).scale(-I)
}

/// `Σ_α [L̄_α⊗L_α − ½ 1⊗(L_α†L_α) − ½ (L_α†L_α)ᵀ⊗1]`.
pub fn dissipator_superoperator(gen: &LindbladGenerator) -> ComplexMatrix {
    let d = gen.dim();
    let id = ComplexMatrix::identity(d);
    let mut out = ComplexMatrix::zeros(d * d);
    for l in gen.jumps() {
        let ldl = l.adjoint().matmul(l);
        let term =
            &l.conj().kron(l) - &(&id.kron(&ldl) + &ldl.transpose().kron(&id)).scale_real(0.5);
        out = &out + &term;
    }
    out
}

/// The `d² × d²` matrix `𝓛` with `vec(ρ̇) = 𝓛 vec(ρ)`.
pub fn liouvillian_superoperator(gen: &LindbladGenerator) -> ComplexMatrix {
    &hamiltonian_superoperator(gen) + &dissipator_superoperator(gen)
}

/// Applies a superoperator to a matrix: `unvec(S vec(ρ))`.
pub fn apply_superoperator(s: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if s.dim() != rho.dim() * rho.dim() {
        return Err(Error::DimensionMismatch {
            what: "superoperator vs state".into(),
            expected: rho.dim() * rho.dim(),
            found: s.dim(),
        });
    }
    ComplexMatrix::unvectorize(&s.matvec(&rho.vectorize()))
}

/// `exp(𝓛 t)`.
pub fn propagator(gen: &LindbladGenerator, t: f64) -> Result<ComplexMatrix> {
    check_time(t)?;
    matrix_exponential(&liouvillian_superoperator(gen).scale_real(t))
}

/// `ρ(t) = unvec(exp(𝓛 t) vec(ρ₀))`.
pub fn propagate(gen: &LindbladGenerator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_dims(gen, rho0)?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let raw = apply_superoperator(&propagator(gen, t)?, rho0.matrix())?;
    revalidate(raw)
}

/// Classical fixed-step RK4 integration of the master equation, evaluated
/// with direct matrix products.
pub fn propagate_rk4(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    t: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    check_dims(gen, rho0)?;
    check_time(t)?;
    if steps == 0 {
        return Err(Error::InvalidInput("RK4 needs at least one step".into()));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let h = t / steps as f64;
    let mut rho = rho0.matrix().clone();
    for _ in 0..steps {
        rho = rk4_step(&rho, h, |r| gen.rhs(r));
    }
    revalidate(rho)
}

/// One RK4 step of the autonomous system `ẏ = f(y)`.
pub(crate) fn rk4_step(
    y: &ComplexMatrix,
    h: f64,
    f: impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> ComplexMatrix {
    rk4_step_timed(y, 0.0, h, |_, r| f(r))
}

/// One RK4 step of `ẏ = f(t, y)` from `t` to `t + h`.
pub(crate) fn rk4_step_timed(
    y: &ComplexMatrix,
    t: f64,
    h: f64,
    f: impl Fn(f64, &ComplexMatrix) -> ComplexMatrix,
) -> ComplexMatrix {
    let mid = t + 0.5 * h;
    let k1 = f(t, y);
    let k2 = f(mid, &(y + &k1.scale_real(h / 2.0)));
    let k3 = f(mid, &(y + &k2.scale_real(h / 2.0)));
    let k4 = f(t + h, &(y + &k3.scale_real(h)));
    let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
    y + &incr.scale_real(h / 6.0)
}

fn revalidate(raw: ComplexMatrix) -> Result<DensityMatrix> {
    let tr = raw.trace();
    if (tr.re - 1.0).abs() > 1e3 * TRACE_TOL || tr.im.abs() > 1e3 * TRACE_TOL {
        return Err(Error::NumericalFailure(format!(
            "trace drifted to {tr} during propagation"
        )));
    }
    DensityMatrix::new(raw).map_err(|e| match e {
        Error::InvalidState(msg) => Error::NumericalFailure(format!(
            "propagated state is not positive ({msg}); generator or step is invalid"
        )),
        other => other,
    })
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "propagation time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

fn check_dims(gen: &LindbladGenerator, rho: &DensityMatrix) -> Result<()> {
    if gen.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            what: "state vs generator".into(),
            expected: gen.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiReport {
    pub min_eigenvalue: f64,
    pub completely_positive: bool,
}

/// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)` of the channel with superoperator `channel`.
pub fn choi_matrix(channel: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d2 = channel.dim();
    let d = (d2 as f64).sqrt().round() as usize;
    if d * d != d2 {
        return Err(Error::InvalidInput(format!(
            "superoperator dimension {d2} is not a square"
        )));
    }
    let mut choi = ComplexMatrix::zeros(d2);
    for i in 0..d {
        for j in 0..d {
            let image = apply_superoperator(channel, &ComplexMatrix::unit(d, i, j))?;
            for k in 0..d {
                for l in 0..d {
                    choi[(i * d + k, j * d + l)] = image[(k, l)];
                }
            }
        }
    }
    Ok(choi)
}

/// Complete positivity of `exp(𝓛 t)` via the Choi matrix spectrum.
pub fn choi_psd_check(gen: &LindbladGenerator, t: f64) -> Result<ChoiReport> {
    choi_psd_check_superoperator(&liouvillian_superoperator(gen), t)
}

/// As [`choi_psd_check`] for an arbitrary (possibly non-Lindblad) superoperator.
pub fn choi_psd_check_superoperator(liouvillian: &ComplexMatrix, t: f64) -> Result<ChoiReport> {
    check_time(t)?;
    let channel = matrix_exponential(&liouvillian.scale_real(t))?;
    let choi = choi_matrix(&channel)?;
    // Hermiticity preservation makes the Choi matrix Hermitian up to rounding.
    let spectrum = hermitian_eigenvalues(&choi.hermitian_part())?;
    let min_eigenvalue = spectrum[0];
    Ok(ChoiReport {
        min_eigenvalue,
        completely_positive: min_eigenvalue >= CHOI_TOL,
    })
}

/// NON-PHYSICAL test fixture: the Liouvillian with its dissipative part
/// negated, `𝓛_H − 𝓛_D`. Its propagator is not completely positive for
/// `t > 0` whenever the dissipator is nonzero.
pub fn negated_dissipator_superoperator(gen: &LindbladGenerator) -> ComplexMatrix {
    &hamiltonian_superoperator(gen) - &dissipator_superoperator(gen)
}
