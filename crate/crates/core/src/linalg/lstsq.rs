//! Real linear least squares via Householder QR, used by the curve fits.

use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct LeastSquares<T> {
    pub coef: Vec<T>,
    /// `(A^T A)^{-1}`, for parameter standard errors.
    pub inverse_normal: Vec<Vec<T>>,
    pub residual_norm: T,
}

/// Solves `min ||A x - b||` for a tall design matrix given row-wise.
/// Returns `None` when `A` is numerically rank deficient.
// Index loops mirror the Householder and back-substitution formulas.
#[allow(clippy::needless_range_loop)]
pub fn least_squares<T: Real>(rows: &[Vec<T>], rhs: &[T]) -> Option<LeastSquares<T>> {
    let m = rows.len();
    let n = rows.first()?.len();
    if m < n || rhs.len() != m {
        return None;
    }
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut b = rhs.to_vec();
    let col_scale: Vec<T> = (0..n)
        .map(|j| a.iter().map(|r| r[j] * r[j]).sum::<T>().sqrt())
        .collect();
    if col_scale.iter().any(|s| s.is_zero()) {
        return None;
    }
    for r in a.iter_mut() {
        for j in 0..n {
            r[j] /= col_scale[j];
        }
    }
    let mut diag = vec![T::zero(); n];
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<T>().sqrt();
        if norm.is_zero() {
            return None;
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|x| *x * *x).sum();
        if !vnorm2.is_zero() {
            let two = T::lit(2.0);
            for j in k..n {
                let dot: T = (k..m).map(|i| v[i - k] * a[i][j]).sum();
                let f = two * dot / vnorm2;
                for i in k..m {
                    a[i][j] -= f * v[i - k];
                }
            }
            let dot: T = (k..m).map(|i| v[i - k] * b[i]).sum();
            let f = two * dot / vnorm2;
            for i in k..m {
                b[i] -= f * v[i - k];
            }
        }
        diag[k] = a[k][k];
    }
    let dmax = diag.iter().map(|d| d.abs()).fold(T::zero(), T::max);
    if diag.iter().any(|d| d.abs() <= T::lit(1e3) * T::epsilon() * dmax) {
        return None;
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let s: T = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    let residual_norm = (n..m).map(|i| b[i] * b[i]).sum::<T>().sqrt();
    // R^{-1} by back substitution, then (R^T R)^{-1} = R^{-1} R^{-T}.
    let mut rinv = vec![vec![T::zero(); n]; n];
    for col in 0..n {
        for k in (0..=col).rev() {
            let e = if k == col { T::one() } else { T::zero() };
            let s: T = (k + 1..=col).map(|j| a[k][j] * rinv[j][col]).sum();
            rinv[k][col] = (e - s) / a[k][k];
        }
    }
    let mut inverse_normal = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let s: T = (0..n).map(|k| rinv[i][k] * rinv[j][k]).sum();
            inverse_normal[i][j] = s / (col_scale[i] * col_scale[j]);
        }
    }
    let coef = x.iter().zip(&col_scale).map(|(x, s)| *x / *s).collect();
    Some(LeastSquares {
        coef,
        inverse_normal,
        residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_quadratic_recovered() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let rows: Vec<Vec<f64>> = xs.iter().map(|x| vec![x * x, *x, 1.0]).collect();
        let b: Vec<f64> = xs.iter().map(|x| 3.0 * x * x - 0.5 * x + 0.125).collect();
        let fit = least_squares(&rows, &b).unwrap();
        assert!((fit.coef[0] - 3.0).abs() < 1e-12);
        assert!((fit.coef[1] + 0.5).abs() < 1e-12);
        assert!((fit.coef[2] - 0.125).abs() < 1e-12);
        assert!(fit.residual_norm < 1e-12);
    }

    #[test]
    fn collinear_design_is_rank_deficient() {
        let rows: Vec<Vec<f64>> = (0..10).map(|_| vec![0.25, 0.5, 1.0]).collect();
        assert!(least_squares(&rows, &[1.0; 10]).is_none());
    }
}
