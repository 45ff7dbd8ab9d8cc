use num_complex::Complex;
use num_traits::Zero;

use crate::linalg::{ComplexMatrix, ComplexVector, HermitianEigen};
use crate::scalar::Real;

/// A vector expanded in the eigenbasis of a Hermitian generator, so that
/// `sum_j c_j exp(e_j(t)) v_j` can be formed with the exponents shifted by
/// their maximum real part. The shifted vector never overflows; its
/// direction, and hence any projector built from it, is exact.
#[derive(Debug, Clone)]
pub(crate) struct SpectralVector<T> {
    pub eig: HermitianEigen<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralVector<T> {
    pub fn new(eig: HermitianEigen<T>, v: &ComplexVector<T>) -> Self {
        let raw = eig.coefficients(v);
        // Rounding noise on components that are exactly zero would be
        // amplified by exp(e_j t) at large |t|; drop it.
        let cutoff = T::lit(64.0) * T::epsilon() * raw.norm();
        let coeffs = raw
            .iter()
            .map(|z| if z.norm() <= cutoff { Complex::zero() } else { *z })
            .collect();
        Self { eig, coeffs }
    }

    /// `(w, m)` with `w exp(m) = sum_j c_j exp(e(lambda_j)) v_j`.
    pub fn evolve(&self, exponent: impl Fn(T) -> Complex<T>) -> (ComplexVector<T>, T) {
        let exps: Vec<Complex<T>> = self.eig.values.iter().map(|l| exponent(*l)).collect();
        let m = self
            .coeffs
            .iter()
            .zip(&exps)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, e)| e.re)
            .fold(T::neg_infinity(), T::max);
        let m = if m.is_finite() { m } else { T::zero() };
        let shifted: Vec<Complex<T>> = self
            .coeffs
            .iter()
            .zip(&exps)
            .map(|(c, e)| {
                if c.is_zero() {
                    Complex::zero()
                } else {
                    *c * (*e - Complex::new(m, T::zero())).exp()
                }
            })
            .collect();
        (self.eig.synthesize(&ComplexVector::from_vec(shifted)), m)
    }

    /// `log sum_j |c_j|^2 exp(g(lambda_j))` for real `g`, without overflow.
    pub fn log_weighted_norm(&self, g: impl Fn(T) -> T) -> T {
        let terms: Vec<(T, T)> = self
            .coeffs
            .iter()
            .zip(&self.eig.values)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| (c.norm_sqr(), g(*l)))
            .collect();
        let m = terms.iter().map(|(_, e)| *e).fold(T::neg_infinity(), T::max);
        if !m.is_finite() {
            return m;
        }
        let s = terms.iter().fold(T::zero(), |acc, (w, e)| acc + *w * (*e - m).exp());
        m + s.ln()
    }
}

/// Hermitian projector onto a nonzero vector.
pub(crate) fn ray_projector<T: Real>(v: &ComplexVector<T>) -> ComplexMatrix<T> {
    let u = v.normalized();
    u.outer(&u)
}
