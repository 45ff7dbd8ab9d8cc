use crate::dynamics::{ClosedForm, EquationFamily, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{comm, herm_eig, ComplexMatrix, Hermitian, HermitianEigen};
use crate::scalar::{c, Real};
use crate::tolerance::tol;

fn check_commutes<T: Real>(x: &ComplexMatrix<T>, m: &ComplexMatrix<T>, check: &'static str) -> Result<()> {
    let defect = comm(x, m).max_norm();
    let scale = T::one().max(x.max_norm() * m.max_norm());
    if !(defect <= tol::<T>(|t| t.commutation) * scale) {
        return Err(Error::Precondition {
            check,
            detail: format!("max |[X, .]| = {defect:e}"),
        });
    }
    Ok(())
}

/// Eigendecomposition of the Hermitian generator `X A^n` of the shift.
fn shift_generator<T: Real>(x: &Hermitian<T>, fam: &EquationFamily<T>) -> Result<HermitianEigen<T>> {
    x.ensure_same_dim(fam.a().matrix())?;
    check_commutes(x.matrix(), fam.a().matrix(), "[X, A] = 0")?;
    herm_eig(&(x.matrix() * fam.a_pow(fam.n() as usize)).hermitize())
}

fn apply_shift<T: Real>(
    gen: &HermitianEigen<T>,
    n: u32,
    x: &ComplexMatrix<T>,
    t: T,
    rho: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    check_commutes(x, rho, "[X, rho(t)] = 0")?;
    let coeff = c::<T>(0.0, -1.0) * T::lit(f64::from(n + 1)) * t;
    let u = gen.exp_scaled(coeff);
    Ok(&(&u * &(rho + x)) * &u.adjoint())
}

/// `rho_X(t) = exp(-i(n+1) X A^n t) (rho(t) + X) exp(i(n+1) X A^n t)` on a
/// sampled trajectory. `[X, A] = 0` and `[X, rho(t)] = 0` are checked at
/// every sample.
pub fn shift_solution<T: Real>(
    traj: &Trajectory<T>,
    x: &Hermitian<T>,
    fam: &EquationFamily<T>,
) -> Result<Trajectory<T>> {
    let gen = shift_generator(x, fam)?;
    traj.map_states(|t, rho| apply_shift(&gen, fam.n(), x.matrix(), t, rho))
}

/// Closed-form shifted solution.
#[derive(Debug, Clone)]
pub struct Shifted<S, T> {
    inner: S,
    x: ComplexMatrix<T>,
    gen: HermitianEigen<T>,
    n: u32,
}

impl<S: ClosedForm<T>, T: Real> Shifted<S, T> {
    pub fn new(inner: S, x: &Hermitian<T>, fam: &EquationFamily<T>) -> Result<Self> {
        let gen = shift_generator(x, fam)?;
        Ok(Self {
            inner,
            x: x.matrix().clone(),
            gen,
            n: fam.n(),
        })
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: ClosedForm<T>, T: Real> ClosedForm<T> for Shifted<S, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        apply_shift(&self.gen, self.n, &self.x, t, &self.inner.state(t)?)
    }
}

/// `rho_Y(t) = Y rho(Y t)`.
#[derive(Debug, Clone)]
pub struct Rescaled<S, T> {
    inner: S,
    y: T,
}

impl<S: ClosedForm<T>, T: Real> Rescaled<S, T> {
    pub fn new(inner: S, y: T) -> Result<Self> {
        if y.is_zero() || !y.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "rescaling factor must be finite and nonzero, got {y}"
            )));
        }
        Ok(Self { inner, y })
    }

    pub fn y(&self) -> T {
        self.y
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: ClosedForm<T>, T: Real> ClosedForm<T> for Rescaled<S, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        Ok(self.inner.state(self.y * t)?.scale_real(self.y))
    }
}

/// `Y rho_X(Y t)`: a shifted solution, then rescaled.
pub type ShiftedRescaled<S, T> = Rescaled<Shifted<S, T>, T>;

pub fn rescale_solution<S: ClosedForm<T>, T: Real>(gen: S, y: T) -> Result<Rescaled<S, T>> {
    Rescaled::new(gen, y)
}

/// Shift `X = Lambda I` and rescaling `Y` turning an isospectral solution
/// into a density matrix: `Lambda = -lambda_min` (so the smallest
/// eigenvalue becomes 0) and `Y = 1 / Tr(rho + Lambda I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityShift<T> {
    pub lambda: T,
    pub y: T,
}

pub fn density_normalization<T: Real>(rho: &ComplexMatrix<T>) -> Result<DensityShift<T>> {
    let e = herm_eig(rho)?;
    let lambda = -e.values[0];
    let trace = rho.trace().re + lambda * T::lit(rho.dim() as f64);
    if !(trace.abs() > tol::<T>(|t| t.trace)) {
        return Err(Error::NotDensity {
            reason: "shifted spectrum has zero trace".into(),
        });
    }
    Ok(DensityShift {
        lambda,
        y: T::one() / trace,
    })
}

/// `Y rho_X(Y t)` with `X = Lambda I` and the values of
/// [`density_normalization`] taken at `t = 0`.
pub fn normalize_to_density<S: ClosedForm<T>, T: Real>(
    gen: S,
    fam: &EquationFamily<T>,
) -> Result<(ShiftedRescaled<S, T>, DensityShift<T>)> {
    let shift = density_normalization(&gen.state(T::zero())?)?;
    let x = Hermitian::new(ComplexMatrix::identity(gen.dim()).scale_real(shift.lambda))?;
    let shifted = Shifted::new(gen, &x, fam)?;
    Ok((Rescaled::new(shifted, shift.y)?, shift))
}
