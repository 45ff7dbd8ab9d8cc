use std::ops::Deref;

use super::eigen::herm_eig;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance::tol;

/// A matrix that passed the hermiticity gate.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian<T>(ComplexMatrix<T>);

impl<T: Real> Hermitian<T> {
    /// Accepts `m` when `max |M - M^dagger|` is within the hermiticity
    /// tolerance; the stored matrix is the exact Hermitian part.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::EmptyMatrix);
        }
        m.check_finite()?;
        let defect = m.hermiticity_defect();
        if defect > tol::<T>(|t| t.hermiticity) {
            return Err(Error::NotHermitian {
                deviation: defect.to_f64_lossy(),
            });
        }
        Ok(Self(m.hermitize()))
    }

    /// Projects onto the Hermitian part without checking.
    pub fn project(m: &ComplexMatrix<T>) -> Self {
        Self(m.hermitize())
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix<T> {
        self.0
    }
}

impl<T> Deref for Hermitian<T> {
    type Target = ComplexMatrix<T>;
    fn deref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}

/// Hermitian, positive semidefinite, unit-trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T>(Hermitian<T>);

impl<T: Real> DensityMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let h = Hermitian::new(m)?;
        let tr = h.trace().re;
        if (tr - T::one()).abs() > tol::<T>(|t| t.trace) {
            return Err(Error::NotDensity {
                reason: format!("trace {} != 1", tr),
            });
        }
        let min = herm_eig(&h)?.values[0];
        if min < -tol::<T>(|t| t.psd) {
            return Err(Error::NotDensity {
                reason: format!("negative eigenvalue {}", min),
            });
        }
        Ok(Self(h))
    }

    pub fn hermitian(&self) -> &Hermitian<T> {
        &self.0
    }
}

impl<T> Deref for DensityMatrix<T> {
    type Target = ComplexMatrix<T>;
    fn deref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn gates() {
        let ok = ComplexMatrix::<f64>::from_real_diag(&[0.25, 0.75]);
        assert!(DensityMatrix::new(ok).is_ok());
        let neg = ComplexMatrix::<f64>::from_real_diag(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotDensity { .. })));
        let tr = ComplexMatrix::<f64>::from_real_diag(&[0.5, 0.6]);
        assert!(matches!(DensityMatrix::new(tr), Err(Error::NotDensity { .. })));
        let skew = ComplexMatrix::<f64>::from_fn(2, |i, j| if i < j { c(0.0, 1.0) } else { c(0.0, 0.0) });
        assert!(matches!(Hermitian::new(skew), Err(Error::NotHermitian { .. })));
    }
}
