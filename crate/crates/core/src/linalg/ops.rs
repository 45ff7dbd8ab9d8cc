use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::Result;
use crate::scalar::Real;

pub fn mat_mul<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.ensure_same_dim(b)?;
    Ok(a.matmul_unchecked(b))
}

/// `ab - ba`.
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.ensure_same_dim(b)?;
    Ok(comm(a, b))
}

/// `ab + ba`.
pub fn anticommutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.ensure_same_dim(b)?;
    Ok(&a.matmul_unchecked(b) + &b.matmul_unchecked(a))
}

#[inline]
pub(crate) fn comm<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    &a.matmul_unchecked(b) - &b.matmul_unchecked(a)
}

/// Kronecker product with `(a (x) b)[i*db + k, j*db + l] = a[i,j] b[k,l]`.
pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let db = b.dim();
    ComplexMatrix::from_fn(a.dim() * db, |r, s| a[(r / db, s / db)] * b[(r % db, s % db)])
}

/// Block-diagonal `a (+) b`.
pub fn direct_sum<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da + db, |i, j| match (i < da, j < da) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - da, j - da)],
        _ => Complex::zero(),
    })
}

/// Pauli matrices `(sigma_x, sigma_y, sigma_z)`.
pub fn pauli<T: Real>() -> [ComplexMatrix<T>; 3] {
    use crate::scalar::c;
    let sx = ComplexMatrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let sy = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => c(0.0, -1.0),
        (1, 0) => c(0.0, 1.0),
        _ => c(0.0, 0.0),
    });
    let sz = ComplexMatrix::from_real_diag(&[T::one(), -T::one()]);
    [sx, sy, sz]
}
