//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Absolute Hermiticity tolerance, scaled by `max(1, ‖m‖_max)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.vectors.dim();
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    /// Applies a real function to the spectrum: `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped = HermitianEigen {
            values: self.values.iter().map(|&x| f(x)).collect(),
            vectors: self.vectors.clone(),
        };
        mapped.reconstruct()
    }
}

pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_finite() {
        return Err(Error::NonFinite {
            what: "eigensolver input",
        });
    }
    let asym = m.hermitian_defect();
    if asym > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }

    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = 1e-14 * m.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NumericalFailure(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigendecomposition(m).map(|e| e.values)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p, q]` with `A ← J† A J`, `V ← V J`, where `J` is a phase
/// change on `q` followed by a real Givens rotation in the `(p, q)` plane.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let b_abs = b.norm();
    if b_abs == 0.0 {
        return;
    }
    let phase = b / b_abs;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * b_abs);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.dim();
    // J = [[c, s], [-s·ē, c·ē]] with ē = conj(phase).
    let e_bar = phase.conj();
    let jqp = -e_bar * s;
    let jqq = e_bar * c;

    for r in 0..n {
        let ap = a[(r, p)];
        let aq = a[(r, q)];
        a[(r, p)] = ap * c + aq * jqp;
        a[(r, q)] = ap * s + aq * jqq;
        let vp = v[(r, p)];
        let vq = v[(r, q)];
        v[(r, p)] = vp * c + vq * jqp;
        v[(r, q)] = vp * s + vq * jqq;
    }
    let (jqp_c, jqq_c) = (jqp.conj(), jqq.conj());
    for col in 0..n {
        let ap = a[(p, col)];
        let aq = a[(q, col)];
        a[(p, col)] = ap * c + aq * jqp_c;
        a[(q, col)] = ap * s + aq * jqq_c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}
