//! Lindblad generators and stable-basis models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::matrix::{complex_vec, ComplexMatrix, C64, I};
use crate::SCHEMA_VERSION;

/// Generator of `ρ̇ = −i[H, ρ] + Σ_α (L_α ρ L_α† − ½ L_α†L_α ρ − ½ ρ L_α†L_α)`.
///
/// `H` is in rad/s; jump operators carry units of (rad/s)^½.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeneratorRepr", into = "GeneratorRepr")]
pub struct LindbladGenerator {
    dim: usize,
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
}

impl LindbladGenerator {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = hamiltonian.dim();
        if dim == 0 {
            return Err(Error::InvalidInput(
                "generator dimension must be positive".into(),
            ));
        }
        if !hamiltonian.is_finite() {
            return Err(Error::NonFinite {
                what: "hamiltonian",
            });
        }
        let asym = hamiltonian.hermitian_defect();
        if asym > 1e-12 * hamiltonian.max_abs().max(1.0) {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
            });
        }
        if jumps.len() > dim * dim - 1 {
            return Err(Error::InvalidInput(format!(
                "{} jump operators exceed the limit d²−1 = {}",
                jumps.len(),
                dim * dim - 1
            )));
        }
        for (alpha, l) in jumps.iter().enumerate() {
            if l.dim() != dim {
                return Err(Error::DimensionMismatch {
                    what: format!("jump operator {alpha}"),
                    expected: dim,
                    found: l.dim(),
                });
            }
            if !l.is_finite() {
                return Err(Error::NonFinite {
                    what: "jump operator",
                });
            }
        }
        Ok(Self {
            dim,
            hamiltonian: hamiltonian.hermitian_part(),
            jumps,
        })
    }

    /// Purely Hamiltonian evolution.
    pub fn unitary(hamiltonian: ComplexMatrix) -> Result<Self> {
        Self::new(hamiltonian, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    /// Right-hand side of the master equation evaluated directly with matrix
    /// products (no vectorization).
    pub fn rhs(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.hamiltonian.commutator(rho).scale(-I);
        for l in &self.jumps {
            out = &out + &dissipator(l, rho);
        }
        out
    }

    /// Same generator with the Hamiltonian replaced by `H + H_extra`.
    pub fn with_extra_hamiltonian(&self, extra: &ComplexMatrix) -> Result<Self> {
        Self::new(&self.hamiltonian + extra, self.jumps.clone())
    }
}

/// `L ρ L† − ½ L†L ρ − ½ ρ L†L`.
pub fn dissipator(l: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let ld = l.adjoint();
    let ldl = ld.matmul(l);
    let sandwich = l.matmul(rho).matmul(&ld);
    let anti = &ldl.matmul(rho) + &rho.matmul(&ldl);
    &sandwich - &anti.scale_real(0.5)
}

#[derive(Serialize, Deserialize)]
struct GeneratorRepr {
    #[serde(default = "default_schema")]
    schema_version: u32,
    dim: usize,
    hamiltonian: ComplexMatrix,
    #[serde(default)]
    jumps: Vec<ComplexMatrix>,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

impl TryFrom<GeneratorRepr> for LindbladGenerator {
    type Error = Error;

    fn try_from(r: GeneratorRepr) -> Result<Self> {
        check_schema(r.schema_version)?;
        if r.hamiltonian.dim() != r.dim {
            return Err(Error::DimensionMismatch {
                what: "hamiltonian".into(),
                expected: r.dim,
                found: r.hamiltonian.dim(),
            });
        }
        LindbladGenerator::new(r.hamiltonian, r.jumps)
    }
}

impl From<LindbladGenerator> for GeneratorRepr {
    fn from(g: LindbladGenerator) -> Self {
        GeneratorRepr {
            schema_version: SCHEMA_VERSION,
            dim: g.dim,
            hamiltonian: g.hamiltonian,
            jumps: g.jumps,
        }
    }
}

pub(crate) fn check_schema(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

/// Generator that is diagonal in a basis of stable states: level energies
/// `E_m` and jump eigenvalues `ℓ_{αm}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct StableBasisModel {
    energies: Vec<f64>,
    /// Indexed `[α][m]`.
    jump_eigenvalues: Vec<Vec<C64>>,
}

impl StableBasisModel {
    pub fn new(energies: Vec<f64>, jump_eigenvalues: Vec<Vec<C64>>) -> Result<Self> {
        let d = energies.len();
        if d == 0 {
            return Err(Error::InvalidInput("model needs at least one level".into()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite { what: "energies" });
        }
        if jump_eigenvalues.len() > d * d - 1 {
            return Err(Error::InvalidInput(format!(
                "{} jump operators exceed the limit d²−1 = {}",
                jump_eigenvalues.len(),
                d * d - 1
            )));
        }
        for (alpha, row) in jump_eigenvalues.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    what: format!("jump_eigenvalues[{alpha}]"),
                    expected: d,
                    found: row.len(),
                });
            }
            if row.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::NonFinite {
                    what: "jump eigenvalues",
                });
            }
        }
        Ok(Self {
            energies,
            jump_eigenvalues,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn jump_eigenvalues(&self) -> &[Vec<C64>] {
        &self.jump_eigenvalues
    }

    /// `ℓ_{αm}`.
    pub fn ell(&self, alpha: usize, m: usize) -> C64 {
        self.jump_eigenvalues[alpha][m]
    }

    /// Equivalent generator with `H = diag(E)` and `L_α = diag(ℓ_α·)`.
    pub fn to_generator(&self) -> LindbladGenerator {
        let h = ComplexMatrix::from_real_diagonal(&self.energies);
        let jumps = self
            .jump_eigenvalues
            .iter()
            .map(|row| ComplexMatrix::from_diagonal(row))
            .collect();
        LindbladGenerator::new(h, jumps).expect("diagonal model is a valid generator")
    }
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    #[serde(default = "default_schema")]
    schema_version: u32,
    dim: usize,
    energies: Vec<f64>,
    #[serde(default)]
    jump_eigenvalues: Vec<ComplexRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct ComplexRow(#[serde(with = "complex_vec")] Vec<C64>);

impl TryFrom<ModelRepr> for StableBasisModel {
    type Error = Error;

    fn try_from(r: ModelRepr) -> Result<Self> {
        check_schema(r.schema_version)?;
        if r.energies.len() != r.dim {
            return Err(Error::DimensionMismatch {
                what: "energies".into(),
                expected: r.dim,
                found: r.energies.len(),
            });
        }
        StableBasisModel::new(
            r.energies,
            r.jump_eigenvalues.into_iter().map(|c| c.0).collect(),
        )
    }
}

impl From<StableBasisModel> for ModelRepr {
    fn from(m: StableBasisModel) -> Self {
        ModelRepr {
            schema_version: SCHEMA_VERSION,
            dim: m.dim(),
            energies: m.energies,
            jump_eigenvalues: m.jump_eigenvalues.into_iter().map(ComplexRow).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian_hamiltonian() {
        let mut h = ComplexMatrix::zeros(2);
        h[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            LindbladGenerator::unitary(h),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_too_many_jumps() {
        let jumps = vec![ComplexMatrix::identity(2); 4];
        assert!(LindbladGenerator::new(ComplexMatrix::zeros(2), jumps).is_err());
        let jumps = vec![ComplexMatrix::identity(2); 3];
        assert!(LindbladGenerator::new(ComplexMatrix::zeros(2), jumps).is_ok());
    }

    #[test]
    fn rejects_mismatched_jump() {
        let err = LindbladGenerator::new(ComplexMatrix::zeros(2), vec![ComplexMatrix::zeros(3)]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn generator_json_schema() {
        let json = r#"{"dim":2,"hamiltonian":[[[0,0],[0,0]],[[0,0],[1,0]]],
                       "jumps":[[[[0,0],[1,0]],[[0,0],[0,0]]]]}"#;
        let g: LindbladGenerator = serde_json::from_str(json).unwrap();
        assert_eq!(g.jumps().len(), 1);
        assert_eq!(g.hamiltonian()[(1, 1)], C64::new(1.0, 0.0));
        let out = serde_json::to_value(&g).unwrap();
        assert_eq!(out["schema_version"], 1);
        assert_eq!(out["dim"], 2);
        let bad = r#"{"dim":3,"hamiltonian":[[[0,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(serde_json::from_str::<LindbladGenerator>(bad).is_err());
    }

    #[test]
    fn model_json_schema() {
        let json = r#"{"dim":2,"energies":[0.0,10.0],"jump_eigenvalues":[[[1,0],[0,1]]]}"#;
        let m: StableBasisModel = serde_json::from_str(json).unwrap();
        assert_eq!(m.ell(0, 1), C64::new(0.0, 1.0));
        let back: StableBasisModel =
            serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let wrong = r#"{"schema_version":9,"dim":1,"energies":[0.0]}"#;
        assert!(serde_json::from_str::<StableBasisModel>(wrong).is_err());
    }

    #[test]
    fn model_to_generator_is_diagonal() {
        let m = StableBasisModel::new(
            vec![0.0, 2.0],
            vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]],
        )
        .unwrap();
        let g = m.to_generator();
        assert_eq!(g.jumps()[0][(1, 1)], C64::new(0.0, 1.0));
        assert_eq!(g.jumps()[0][(0, 1)], C64::new(0.0, 0.0));
        assert_eq!(g.hamiltonian()[(1, 1)], C64::new(2.0, 0.0));
    }
}
