//! Exact solutions of the Darboux-covariant nonlinear von Neumann equations
//! `i d(rho)/dt = sum_k [A^{n-k} rho A^k, rho]`, built with the binary Darboux
//! transformation and checked against an independent RK4 integrator.

// `!(x <= tol)` is used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod figures;
pub mod laxdarboux;
pub mod linalg;
pub mod scalar;
pub mod seeds;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type CMatrix = linalg::ComplexMatrix<f64>;
pub type CVector = linalg::ComplexVector<f64>;
