use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::error::Result;
use crate::scalar::Real;

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// The input is scaled by `2^-s` until its 1-norm is at most 1/2, the Taylor
/// series is summed to machine precision, and the result is squared `s` times.
pub fn matrix_exp<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    m.check_finite()?;
    let n = m.dim();
    let norm = m.one_norm();
    let half = T::lit(0.5);
    let mut squarings = 0i32;
    if norm > half {
        squarings = (norm / half).log2().ceil().to_i32().unwrap_or(0).max(0);
    }
    let scaled = m.scale_real(T::lit(2f64).powi(-squarings));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=60 {
        term = (&term * &scaled).scale(Complex::new(T::one() / T::lit(k as f64), T::zero()));
        sum += &term;
        if term.max_norm() <= T::epsilon() * sum.max_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen::herm_eig;
    use crate::scalar::c;

    #[test]
    fn exp_zero_is_identity() {
        let e = matrix_exp(&ComplexMatrix::<f64>::zeros(3)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(3));
    }

    #[test]
    fn exp_i_pi_sigma_z() {
        let sz = ComplexMatrix::<f64>::from_real_diag(&[1.0, -1.0]);
        let e = matrix_exp(&sz.scale(c(0.0, std::f64::consts::PI))).unwrap();
        assert!(e.max_diff(&ComplexMatrix::identity(2).scale(c(-1.0, 0.0))) < 1e-14);
    }

    #[test]
    fn unitary_for_large_times() {
        let h = ComplexMatrix::<f64>::from_rows(vec![
            vec![c(0.3, 0.0), c(1.0, -0.5), c(0.0, 0.2)],
            vec![c(1.0, 0.5), c(-0.7, 0.0), c(0.4, 0.0)],
            vec![c(0.0, -0.2), c(0.4, 0.0), c(1.1, 0.0)],
        ])
        .unwrap();
        let eig = herm_eig(&h).unwrap();
        for t in [-300.0, -230.0, 17.5, 300.0] {
            let u = matrix_exp(&h.scale(c(0.0, -t))).unwrap();
            let uu = &u * &u.adjoint();
            assert!(uu.max_diff(&ComplexMatrix::identity(3)) < 1e-10, "t={t}");
            let oracle = eig.exp_scaled(c(0.0, -t));
            assert!(u.max_diff(&oracle) < 1e-10, "t={t}");
        }
    }
}
