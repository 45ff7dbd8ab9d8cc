//! Nonlinear von Neumann right-hand sides, conserved quantities, the
//! reference integrator, and observables.

mod integrate;
mod trajectory;

pub use integrate::{integrate_rk4, Integration};
pub use trajectory::{equation_residual, uniform_grid, ClosedForm, CsvMode, DirectSum, Stationary, Trajectory};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{comm, ComplexMatrix, Hermitian};
use crate::scalar::{c, Real};
use crate::tolerance::tol;

/// The family `i rho' = sum_{k=0}^{n} [A^{n-k} rho A^k, rho]` for a fixed
/// Hermitian `A`. `n = 1` with `A = H` is `i rho' = [H, rho^2]`.
#[derive(Debug, Clone)]
pub struct EquationFamily<T> {
    n: u32,
    a: Hermitian<T>,
    /// `A^0 ..= A^{n+1}`.
    powers: Vec<ComplexMatrix<T>>,
}

impl<T: Real> EquationFamily<T> {
    pub fn new(n: u32, a: Hermitian<T>) -> Self {
        let mut powers = vec![ComplexMatrix::identity(a.dim())];
        for k in 1..=(n as usize + 1) {
            let next = &powers[k - 1] * a.matrix();
            powers.push(next);
        }
        Self { n, a, powers }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> &Hermitian<T> {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `A^k` for `k <= n + 1`.
    pub fn a_pow(&self, k: usize) -> &ComplexMatrix<T> {
        &self.powers[k]
    }

    /// `sum_k A^{n-k} rho A^k`, the effective Hamiltonian of the family.
    pub fn effective_hamiltonian(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        self.a.ensure_same_dim(rho)?;
        let n = self.n as usize;
        let mut acc = ComplexMatrix::zeros(self.dim());
        for k in 0..=n {
            acc += &(&(&self.powers[n - k] * rho) * &self.powers[k]);
        }
        Ok(acc)
    }

    /// Lax time generator `sum_k A^{n-k} rho A^k - mu A^{n+1}`.
    pub fn lax_generator(&self, rho: &ComplexMatrix<T>, mu: Complex<T>) -> Result<ComplexMatrix<T>> {
        let h = self.effective_hamiltonian(rho)?;
        Ok(&h - &self.powers[self.n as usize + 1].scale(mu))
    }
}

/// `d(rho)/dt = -i sum_k [A^{n-k} rho A^k, rho]`.
///
/// Both algebraic forms of the right-hand side are evaluated and must agree;
/// disagreement means an arithmetic fault and is reported as an error.
pub fn rhs_family<T: Real>(fam: &EquationFamily<T>, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    fam.a.ensure_same_dim(rho)?;
    let n = fam.n as usize;
    let mut left = ComplexMatrix::zeros(rho.dim());
    let mut right = ComplexMatrix::zeros(rho.dim());
    let mut scale = T::one();
    for k in 0..=n {
        let sandwiched = &(&fam.powers[n - k] * rho) * &fam.powers[k];
        left += &comm(&sandwiched, rho);
        let inner = &(rho * &fam.powers[k]) * rho;
        right += &comm(&fam.powers[n - k], &inner);
        scale = scale.max(inner.max_norm() * fam.powers[n - k].max_norm());
    }
    let residual = left.max_diff(&right);
    if residual > tol::<T>(|t| t.identity) * scale {
        return Err(Error::IdentityViolated {
            check: "sum [A^(n-k) rho A^k, rho] = sum [A^(n-k), rho A^k rho]",
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(left.scale(c(0.0, -1.0)))
}

/// Truncated Taylor series `f(x) = sum_k f_k (x - a)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialF<T> {
    pub center: T,
    pub coeffs: Vec<T>,
}

impl<T: Real> PolynomialF<T> {
    pub fn new(center: T, coeffs: Vec<T>) -> Self {
        Self { center, coeffs }
    }

    /// `f(x) = x`.
    pub fn identity() -> Self {
        Self::new(T::zero(), vec![T::zero(), T::one()])
    }

    /// `f(x) = x^2`.
    pub fn square() -> Self {
        Self::new(T::zero(), vec![T::zero(), T::zero(), T::one()])
    }

    /// Requires `f(0) = 0` and `f(1) = 1`, so that `f(rho) = rho` on pure
    /// states.
    pub fn pure_state_compatible(center: T, coeffs: Vec<T>) -> Result<Self> {
        let f = Self::new(center, coeffs);
        let eps = tol::<T>(|t| t.identity);
        let (f0, f1) = (f.eval_scalar(T::zero()), f.eval_scalar(T::one()));
        if f0.abs() > eps || (f1 - T::one()).abs() > eps {
            return Err(Error::InvalidArgument(format!(
                "f(0) = {f0}, f(1) = {f1}; need f(0) = 0 and f(1) = 1"
            )));
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval_scalar(&self, x: T) -> T {
        let y = x - self.center;
        self.coeffs.iter().rev().fold(T::zero(), |acc, fk| acc * y + *fk)
    }

    /// Horner evaluation on `rho - a I`.
    pub fn eval_matrix(&self, rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let shifted = rho.add_identity(Complex::new(-self.center, T::zero()));
        let n = rho.dim();
        self.coeffs.iter().rev().fold(ComplexMatrix::zeros(n), |acc, fk| {
            (&acc * &shifted).add_identity(Complex::new(*fk, T::zero()))
        })
    }
}

/// `d(rho)/dt = -i [H, f(rho)]`.
pub fn rhs_fvn<T: Real>(h: &ComplexMatrix<T>, rho: &ComplexMatrix<T>, f: &PolynomialF<T>) -> Result<ComplexMatrix<T>> {
    h.ensure_same_dim(rho)?;
    Ok(comm(h, &f.eval_matrix(rho)).scale(c(0.0, -1.0)))
}

/// Functional derivative of `Tr(f(rho) H)`:
/// `sum_{k>=1} f_k sum_{m=0}^{k-1} (rho - aI)^{k-1-m} H (rho - aI)^m`.
pub fn effective_hamiltonian<T: Real>(
    h: &ComplexMatrix<T>,
    rho: &ComplexMatrix<T>,
    f: &PolynomialF<T>,
) -> Result<ComplexMatrix<T>> {
    h.ensure_same_dim(rho)?;
    let n = rho.dim();
    let shifted = rho.add_identity(Complex::new(-f.center, T::zero()));
    let deg = f.degree();
    let mut powers = vec![ComplexMatrix::identity(n)];
    for k in 1..deg {
        let next = &powers[k - 1] * &shifted;
        powers.push(next);
    }
    let mut out = ComplexMatrix::zeros(n);
    for (k, fk) in f.coeffs.iter().enumerate().skip(1) {
        if fk.is_zero() {
            continue;
        }
        let mut inner = ComplexMatrix::zeros(n);
        for m in 0..k {
            inner += &(&(&powers[k - 1 - m] * h) * &powers[m]);
        }
        out += &inner.scale_real(*fk);
    }
    Ok(out)
}

/// `[Tr rho, Tr rho^2, ..., Tr rho^max_power]`.
pub fn casimirs<T: Real>(rho: &ComplexMatrix<T>, max_power: usize) -> Result<Vec<T>> {
    if max_power == 0 {
        return Err(Error::InvalidArgument("max_power must be >= 1".into()));
    }
    let eps = tol::<T>(|t| t.casimir_imag);
    let mut p = rho.clone();
    let mut out = Vec::with_capacity(max_power);
    for k in 1..=max_power {
        if k > 1 {
            p = &p * rho;
        }
        let tr = p.trace();
        if tr.im.abs() > eps * T::one().max(tr.re.abs()) {
            return Err(Error::ImaginaryPart {
                context: "Casimir trace",
                imag: tr.im.to_f64_lossy(),
            });
        }
        out.push(tr.re);
    }
    Ok(out)
}

/// `Re Tr(obs rho)`.
pub fn expectation<T: Real>(obs: &ComplexMatrix<T>, rho: &ComplexMatrix<T>) -> Result<T> {
    obs.ensure_same_dim(rho)?;
    let n = obs.dim();
    let mut tr = Complex::<T>::zero();
    for i in 0..n {
        for k in 0..n {
            tr += obs[(i, k)] * rho[(k, i)];
        }
    }
    if tr.im.abs() > tol::<T>(|t| t.expectation_imag) * T::one().max(tr.re.abs()) {
        return Err(Error::ImaginaryPart {
            context: "expectation value",
            imag: tr.im.to_f64_lossy(),
        });
    }
    Ok(tr.re)
}

/// The spin-1 matrices used for the 3x3 observables, taken verbatim:
///
/// ```text
/// Jx = [[0,0,0],[0,0,i],[0,-i,0]]
/// Jy = [[0,0,-i],[0,0,0],[i,0,0]]
/// Jz = [[0,i,0],[-i,0,0],[0,0,0]]
/// ```
///
/// With these, `[Jx, Jy] = -i Jz` (note the sign).
pub fn spin1_matrices<T: Real>() -> [Hermitian<T>; 3] {
    let z = c::<T>(0.0, 0.0);
    let i = c::<T>(0.0, 1.0);
    let jx = ComplexMatrix::from_rows(vec![vec![z, z, z], vec![z, z, i], vec![z, -i, z]]);
    let jy = ComplexMatrix::from_rows(vec![vec![z, z, -i], vec![z, z, z], vec![i, z, z]]);
    let jz = ComplexMatrix::from_rows(vec![vec![z, i, z], vec![-i, z, z], vec![z, z, z]]);
    [jx, jy, jz].map(|m| Hermitian::new(m.expect("static 3x3")).expect("static Hermitian"))
}
