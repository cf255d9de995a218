//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (degrees 3, 5, 7, 9, 13; Higham 2005 backward-error thresholds).

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

pub fn matrix_exponential(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite {
            what: "matrix exponential input",
        });
    }
    let n = m.dim();
    let norm = m.norm_1();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }

    for &(degree, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match degree {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let (u, v) = pade_low(m, coeffs);
            return pade_quotient(&u, &v);
        }
    }

    let squarings = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = m.scale_real(0.5f64.powi(squarings));
    let (u, v) = pade_13(&scaled);
    let mut r = pade_quotient(&u, &v)?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    if !r.is_finite() {
        return Err(Error::NumericalFailure(
            "matrix exponential overflowed".into(),
        ));
    }
    Ok(r)
}

fn pade_low(a: &ComplexMatrix, b: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let a2 = a.matmul(a);
    let mut power = ComplexMatrix::identity(n);
    let mut odd = ComplexMatrix::zeros(n);
    let mut even = ComplexMatrix::zeros(n);
    for k in (0..b.len()).step_by(2) {
        even = &even + &power.scale_real(b[k]);
        odd = &odd + &power.scale_real(b[k + 1]);
        power = power.matmul(&a2);
    }
    (a.matmul(&odd), even)
}

fn pade_13(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let b = &B13;

    let inner_u = &(&a6.scale_real(b[13]) + &a4.scale_real(b[11])) + &a2.scale_real(b[9]);
    let u = a6.matmul(&inner_u)
        + a6.scale_real(b[7])
        + a4.scale_real(b[5])
        + a2.scale_real(b[3])
        + id.scale_real(b[1]);
    let u = a.matmul(&u);

    let inner_v = &(&a6.scale_real(b[12]) + &a4.scale_real(b[10])) + &a2.scale_real(b[8]);
    let v = a6.matmul(&inner_v)
        + a6.scale_real(b[6])
        + a4.scale_real(b[4])
        + a2.scale_real(b[2])
        + id.scale_real(b[0]);
    (u, v)
}

fn pade_quotient(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    (v - u).solve(&(v + u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::{C64, I};
    use crate::numerics::random::{random_ginibre, random_hermitian, seeded};
    use std::f64::consts::PI;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(
            matrix_exponential(&ComplexMatrix::zeros(3)).unwrap(),
            ComplexMatrix::identity(3)
        );
    }

    #[test]
    fn diagonal_phase_pi() {
        let m = ComplexMatrix::from_diagonal(&[I * PI, -I * PI]);
        let e = matrix_exponential(&m).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[-1.0, -1.0]);
        assert!((&e - &expected).max_abs() < 1e-12);
    }

    #[test]
    fn anti_hermitian_gives_unitary() {
        let mut rng = seeded(3);
        let a = random_hermitian(&mut rng, 3, 2.0).scale(I);
        let u = matrix_exponential(&a).unwrap();
        assert!(u.unitary_defect() < 1e-10);
    }

    #[test]
    fn scalar_exponentials_at_every_degree() {
        for x in [1e-3, 0.1, 0.5, 1.5, 3.0, 40.0, -25.0] {
            let z = C64::new(x, 0.3 * x);
            let e = matrix_exponential(&ComplexMatrix::from_diagonal(&[z])).unwrap();
            assert!((e[(0, 0)] - z.exp()).norm() <= 1e-13 * z.exp().norm());
        }
    }

    #[test]
    fn semigroup_and_inverse() {
        let mut rng = seeded(11);
        for scale in [0.01, 0.3, 2.0, 10.0] {
            let m = random_ginibre(&mut rng, 4, scale);
            let full = matrix_exponential(&m).unwrap();
            let half = matrix_exponential(&m.scale_real(0.5)).unwrap();
            let rel = (&full - &half.matmul(&half)).max_abs() / full.max_abs();
            assert!(rel < 1e-10, "semigroup residual {rel:e} at scale {scale}");
            let inv = matrix_exponential(&m.scale_real(-1.0)).unwrap();
            let id_err = (&full.matmul(&inv) - &ComplexMatrix::identity(4)).max_abs();
            // exp(m)·exp(−m) loses accuracy like cond(exp(m)); the bound holds for ‖m‖ ≲ 1.
            if scale <= 0.3 {
                assert!(id_err < 1e-9, "inverse residual {id_err:e}");
            }
        }
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            matrix_exponential(&m),
            Err(Error::NonFinite { .. })
        ));
    }
}
