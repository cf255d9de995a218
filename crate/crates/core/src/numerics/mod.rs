//! Small dense complex linear algebra: matrices, Hermitian eigensolver,
//! matrix exponential, validated density matrices.

pub mod density;
pub mod eigen;
pub mod expm;
pub mod matrix;
pub mod random;

pub use density::{von_neumann_entropy, DensityMatrix};
pub use eigen::{hermitian_eigendecomposition, hermitian_eigenvalues, HermitianEigen};
pub use expm::matrix_exponential;
pub use matrix::{ComplexMatrix, C64};
