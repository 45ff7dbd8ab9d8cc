use num_complex::Complex;

use super::strategy1::{Strategy1Seed, Strategy1Solution};
use super::strategy2::{Strategy2Seed, Strategy2Solution};
use crate::dynamics::{ClosedForm, EquationFamily};
use crate::error::{Error, Result};
use crate::laxdarboux::{Rescaled, Shifted, ShiftedRescaled};
use crate::linalg::{pauli, tensor_product, ComplexMatrix, ComplexVector, Hermitian};
use crate::scalar::{c, Real};
use crate::tolerance::tol;

/// `1 / (1 + e^x)` without overflow.
fn logistic<T: Real>(x: T) -> T {
    if x > T::zero() {
        let e = (-x).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + x.exp())
    }
}

/// `1 / cosh(x)` without overflow.
fn sech<T: Real>(x: T) -> T {
    let e = (-x.abs()).exp();
    (e + e) / (T::one() + e * e)
}

/// Three-level example: `H` couples levels 1 and 2, `xi0` is diagonal with
/// `xi0^2 - xi0 = diag(1, 1, -1) / 4`.
#[derive(Debug, Clone)]
pub struct Example3x3<T> {
    pub h: Hermitian<T>,
    pub xi0: Hermitian<T>,
    pub a: T,
    pub delta: Hermitian<T>,
    pub mu: Complex<T>,
    /// `(1 - i sqrt 2) / 2`, doubly degenerate eigenvalue of `xi0 - i H`.
    pub z_minus: Complex<T>,
    pub phi1: ComplexVector<T>,
    pub phi2: ComplexVector<T>,
    /// `(phi1 + phi2) / sqrt 2`.
    pub phi0: ComplexVector<T>,
    /// Spectrum shift `X = x I`.
    pub x: T,
    /// Rescaling giving unit trace after the shift.
    pub y: T,
}

pub fn example3x3<T: Real>() -> Example3x3<T> {
    let s2 = 2f64.sqrt();
    let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0 / s2]]).expect("3x3");
    let xi0 = ComplexMatrix::from_real_diag(&[T::lit(0.5 + s2 / 2.0), T::lit(0.5 - s2 / 2.0), T::lit(0.5)]);
    let delta = ComplexMatrix::from_real_diag(&[T::lit(0.25), T::lit(0.25), T::lit(-0.25)]);
    let phi1 = ComplexVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let e = std::f64::consts::FRAC_PI_4;
    let phi2 = ComplexVector::from_vec(vec![c(e.cos() / s2, e.sin() / s2), c(1.0 / s2, 0.0), c(0.0, 0.0)]);
    let phi0 = phi1.add(&phi2).scale(c(1.0 / s2, 0.0));
    Example3x3 {
        h: Hermitian::new(h).expect("symmetric"),
        xi0: Hermitian::new(xi0).expect("diagonal"),
        a: T::one(),
        delta: Hermitian::new(delta).expect("diagonal"),
        mu: c(0.0, 1.0),
        z_minus: c(0.5, -s2 / 2.0),
        phi1,
        phi2,
        phi0,
        x: T::lit((s2 - 1.0) / 2.0),
        y: T::lit(s2 / 3.0),
    }
}

impl<T: Real> Example3x3<T> {
    pub fn seed(&self) -> Result<Strategy1Seed<T>> {
        Strategy1Seed::new(self.h.clone(), self.xi0.clone(), self.a)
    }

    pub fn family(&self) -> EquationFamily<T> {
        EquationFamily::new(1, self.h.clone())
    }

    pub fn solution(&self) -> Result<Strategy1Solution<T>> {
        Strategy1Solution::new(self.seed()?, self.mu, self.phi0.clone())
    }

    /// Unit-trace, nonnegative solution `Y xi_X[1](Y t)`.
    pub fn density_solution(&self) -> Result<ShiftedRescaled<Strategy1Solution<T>, T>> {
        let x = Hermitian::new(ComplexMatrix::identity(3).scale_real(self.x))?;
        Rescaled::new(Shifted::new(self.solution()?, &x, &self.family())?, self.y)
    }

    /// Entrywise closed form of the co-rotating part of the dressed solution.
    pub fn internal_closed_form(&self, t: T) -> ComplexMatrix<T> {
        let s2 = T::lit(2f64.sqrt());
        let half = T::lit(0.5);
        let l = logistic(t);
        let s = sech(t * half) * half;
        let z = Complex::new(T::zero(), T::zero());
        let r = |x: T| Complex::new(x, T::zero());
        let off = s / s2;
        ComplexMatrix::from_rows(vec![
            vec![r((T::one() + s2) * half - s2 * l), z, Complex::new(-off, -off)],
            vec![z, r((T::one() - s2) * half + s2 * l), r(s)],
            vec![Complex::new(-off, off), r(s), r(half)],
        ])
        .expect("3x3")
    }

    /// `Y (xi_int(Y t) + X)`, the co-rotating part of the density solution.
    pub fn rho_int(&self, t: T) -> ComplexMatrix<T> {
        self.internal_closed_form(self.y * t)
            .add_identity(Complex::new(self.x, T::zero()))
            .scale_real(self.y)
    }
}

/// Eight-level example built from Dirac alpha matrices
/// `alpha_k = [[0, sigma_k], [sigma_k, 0]]`: `H = alpha_1 (x) 1 + 1 (x) sigma_1`,
/// `xi = alpha_2 (x) sigma_2 + alpha_3 (x) sigma_3`, so `xi H = -H xi`.
#[derive(Debug, Clone)]
pub struct Example8x8<T> {
    pub h: Hermitian<T>,
    pub xi: Hermitian<T>,
    pub mu: Complex<T>,
    /// Ket solving `(xi - i H) phi0 = 0`.
    pub phi0: ComplexVector<T>,
    pub lambda: T,
    pub y: T,
}

/// Builds the fixture and checks the dressed solution against
/// [`published_8x8`]; a mismatch means the alpha-matrix convention is wrong.
pub fn example8x8<T: Real>() -> Result<Example8x8<T>> {
    let [sx, sy, sz] = pauli::<T>();
    let id2 = ComplexMatrix::<T>::identity(2);
    let id4 = ComplexMatrix::<T>::identity(4);
    let alpha = |s: &ComplexMatrix<T>| tensor_product(&sx, s);
    let h = &tensor_product(&alpha(&sx), &id2) + &tensor_product(&id4, &sx);
    let xi = &tensor_product(&alpha(&sy), &sy) + &tensor_product(&alpha(&sz), &sz);
    // Adjoint of the bra (i, 0, -1, 0, -i, 0, 1, 0).
    let phi0 = ComplexVector::from_vec(
        [
            (0.0, -1.0),
            (0.0, 0.0),
            (-1.0, 0.0),
            (0.0, 0.0),
            (0.0, 1.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (0.0, 0.0),
        ]
        .iter()
        .map(|(r, i)| c(*r, *i))
        .collect(),
    );
    let ex = Example8x8 {
        h: Hermitian::new(h)?,
        xi: Hermitian::new(xi)?,
        mu: c(0.0, 1.0),
        phi0,
        lambda: T::lit(2.0),
        y: T::lit(1.0 / 16.0),
    };
    let sol = ex.solution()?;
    let eps = tol::<T>(|t| t.identity);
    for t in [-1.0, 0.0, 0.5, 1.0] {
        let t = T::lit(t);
        let diff = sol.state(t)?.max_diff(&published_8x8(t));
        if !(diff <= eps) {
            return Err(Error::Precondition {
                check: "8x8 fixture reproduces the reference dressed matrix",
                detail: format!("max deviation {diff:e} at t = {t}"),
            });
        }
    }
    Ok(ex)
}

impl<T: Real> Example8x8<T> {
    pub fn seed(&self) -> Result<Strategy2Seed<T>> {
        Strategy2Seed::new(self.h.clone(), self.xi.clone(), 1)
    }

    pub fn family(&self) -> EquationFamily<T> {
        EquationFamily::new(1, self.h.clone())
    }

    pub fn solution(&self) -> Result<Strategy2Solution<T>> {
        Strategy2Solution::new(self.seed()?, self.mu, self.phi0.clone())
    }

    /// `Y (xi[1](Y t) + Lambda)`; the shift generator `Lambda H` only adds a
    /// unitary rotation that commutes with nothing in particular, so it is
    /// kept explicit through [`Shifted`].
    pub fn density_solution(&self) -> Result<ShiftedRescaled<Strategy2Solution<T>, T>> {
        let x = Hermitian::new(ComplexMatrix::identity(8).scale_real(self.lambda))?;
        Rescaled::new(Shifted::new(self.solution()?, &x, &self.family())?, self.y)
    }
}

/// The dressed 8x8 solution entrywise, with `p = 1/(2 cosh 4t)`,
/// `q = 1/(1 + e^{8t})`, `r = 1 - q`.
pub fn published_8x8<T: Real>(t: T) -> ComplexMatrix<T> {
    let p = sech(T::lit(4.0) * t) * T::lit(0.5);
    let q = logistic(T::lit(8.0) * t);
    let r = T::one() - q;
    let re = |x: T| Complex::new(x, T::zero());
    let im = |x: T| Complex::new(T::zero(), x);
    let o = re(T::zero());
    ComplexMatrix::from_rows(vec![
        vec![re(q + p), im(p), o, re(-q), re(r - p), im(-p), o, re(-r)],
        vec![im(-p), re(p - q), re(q), o, im(p), re(-r - p), re(r), o],
        vec![o, re(q), re(-q - p), im(p), o, re(r), re(p - r), im(-p)],
        vec![re(-q), o, im(-p), re(q - p), re(-r), o, im(p), re(r + p)],
        vec![re(r - p), im(-p), o, re(-r), re(q + p), im(p), o, re(-q)],
        vec![im(p), re(-r - p), re(r), o, im(-p), re(p - q), re(q), o],
        vec![o, re(r), re(p - r), im(-p), o, re(q), re(-q - p), im(p)],
        vec![re(-r), o, im(p), re(r + p), re(-q), o, im(-p), re(q - p)],
    ])
    .expect("8x8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_safe_helpers() {
        assert_eq!(logistic(800.0f64), 0.0);
        assert_eq!(logistic(-800.0f64), 1.0);
        assert!((logistic(0.0f64) - 0.5).abs() < 1e-16);
        assert_eq!(sech(900.0f64), 0.0);
        assert!((sech(1.0f64) - 1.0 / 1.0f64.cosh()).abs() < 1e-15);
    }

    #[test]
    fn fixtures_build() {
        let ex = example3x3::<f64>();
        assert!(ex.seed().is_ok());
        assert!(ex.solution().is_ok());
        assert!(example8x8::<f64>().is_ok());
    }
}
