//! Dense complex linear algebra for small matrices.

mod eigen;
mod expm;
mod hermitian;
pub mod json;
pub mod lstsq;
mod matrix;
mod ops;

pub use eigen::{
    eigenspaces, eigenvalues, general_eigvec, herm_eig, hessenberg, right_singular, Eigenspace, HermitianEigen,
    RightSingular,
};
pub use expm::matrix_exp;
pub use hermitian::{DensityMatrix, Hermitian};
pub use lstsq::{least_squares, LeastSquares};
pub use matrix::{ComplexMatrix, ComplexVector};
pub(crate) use ops::comm;
pub use ops::{anticommutator, commutator, direct_sum, mat_mul, pauli, tensor_product};
