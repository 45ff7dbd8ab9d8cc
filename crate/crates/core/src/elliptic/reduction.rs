use num_complex::Complex;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, Hermitian};
use crate::scalar::Real;
use crate::tolerance::tol;

/// Change of basis to the eigenbasis of a 3x3 `H`.
///
/// If two eigenvalues form a pair `+m, -m` with `m > 0`, the basis is ordered
/// `(+m, -m, l)` so that `H = diag(m, -m, l)`; in that basis
///
/// ```text
/// i rho_12' =  2m     [(rho_11 + rho_22) rho_12 + rho_13 conj(rho_23)]
/// i rho_13' =  (m-l)  [(rho_11 + rho_33) rho_13 + rho_12 rho_23]
/// i rho_23' = -(m+l)  [(rho_22 + rho_33) rho_23 + conj(rho_12) rho_13]
/// ```
///
/// Without such a pair the eigenvalues are ordered by descending magnitude.
#[derive(Debug, Clone)]
pub struct EigenbasisTransform<T> {
    /// Columns are the eigenvectors in the chosen order.
    pub basis: ComplexMatrix<T>,
    pub eigenvalues: Vec<T>,
    /// Index into the ascending eigenvalue list for each new basis slot.
    pub permutation: Vec<usize>,
    /// `(m, l)` when the `+m, -m` pair exists.
    pub pair: Option<(T, T)>,
}

impl<T: Real> EigenbasisTransform<T> {
    pub fn new(h: &Hermitian<T>) -> Result<Self> {
        let e = herm_eig(h)?;
        let n = e.dim();
        let scale = T::one().max(h.max_norm());
        let eps = tol::<T>(|t| t.eigen_residual) * scale;
        let mut pair = None;
        let mut permutation: Vec<usize> = (0..n).collect();
        'search: for i in 0..n {
            for j in 0..n {
                let (hi, hj) = (e.values[i], e.values[j]);
                if i != j && hi > eps && (hi + hj).abs() <= eps {
                    let rest: Vec<usize> = (0..n).filter(|k| *k != i && *k != j).collect();
                    permutation = [i, j].into_iter().chain(rest).collect();
                    pair = (n == 3).then(|| (hi, e.values[permutation[2]]));
                    break 'search;
                }
            }
        }
        if pair.is_none() {
            permutation.sort_by(|a, b| {
                let (x, y) = (e.values[*a], e.values[*b]);
                (y.abs(), y).partial_cmp(&(x.abs(), x)).expect("finite eigenvalues")
            });
        }
        let cols: Vec<_> = permutation.iter().map(|k| e.vector(*k)).collect();
        Ok(Self {
            basis: ComplexMatrix::from_columns(&cols),
            eigenvalues: permutation.iter().map(|k| e.values[*k]).collect(),
            permutation,
            pair,
        })
    }

    /// `V^dagger rho V`.
    pub fn apply(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        self.basis.ensure_same_dim(rho)?;
        Ok(&(&self.basis.adjoint() * rho) * &self.basis)
    }
}

/// Conjugates every state into the eigenbasis of `h`.
pub fn to_h_eigenbasis<T: Real>(
    h: &Hermitian<T>,
    traj: &Trajectory<T>,
) -> Result<(Trajectory<T>, EigenbasisTransform<T>)> {
    let tr = EigenbasisTransform::new(h)?;
    let out = traj.map_states(|_, rho| tr.apply(rho))?;
    Ok((out, tr))
}

/// `d/dt (rho_12, rho_13, rho_23)` from the reduced system above, for a
/// state already in the ordered eigenbasis.
pub fn off_diagonal_rhs<T: Real>(tr: &EigenbasisTransform<T>, rho: &ComplexMatrix<T>) -> Result<[Complex<T>; 3]> {
    let Some((m, l)) = tr.pair else {
        return Err(Error::Precondition {
            check: "H has an eigenvalue pair +m, -m",
            detail: format!("eigenvalues {:?}", tr.eigenvalues),
        });
    };
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            left: 3,
            right: rho.dim(),
        });
    }
    let r = |i: usize, j: usize| rho[(i, j)];
    let minus_i = Complex::new(T::zero(), -T::one());
    let two = T::lit(2.0);
    let d12 = ((r(0, 0) + r(1, 1)) * r(0, 1) + r(0, 2) * r(1, 2).conj()) * (two * m);
    let d13 = ((r(0, 0) + r(2, 2)) * r(0, 2) + r(0, 1) * r(1, 2)) * (m - l);
    let d23 = ((r(1, 1) + r(2, 2)) * r(1, 2) + r(0, 1).conj() * r(0, 2)) * (-(m + l));
    Ok([d12 * minus_i, d13 * minus_i, d23 * minus_i])
}

/// Samples of `W(t) = |rho_12(t)|^2`.
#[derive(Debug, Clone)]
pub struct WSeries<T> {
    pub times: Vec<T>,
    pub w: Vec<T>,
}

impl<T: Real> WSeries<T> {
    pub fn new(times: Vec<T>, w: Vec<T>) -> Result<Self> {
        if times.len() != w.len() {
            return Err(Error::InvalidArgument("times and values differ in length".into()));
        }
        if times.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidArgument("times must be strictly increasing".into()));
        }
        if let Some(bad) = w.iter().find(|x| !(**x >= T::zero())) {
            return Err(Error::InvalidArgument(format!("W must be nonnegative, found {bad}")));
        }
        Ok(Self { times, w })
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// `|rho_12|^2` along a 3x3 trajectory (already in the desired basis).
pub fn extract_w<T: Real>(traj: &Trajectory<T>) -> Result<WSeries<T>> {
    if traj.dim() != 3 {
        return Err(Error::DimensionMismatch {
            left: 3,
            right: traj.dim(),
        });
    }
    let w = traj.states().iter().map(|s| s[(0, 1)].norm_sqr()).collect();
    WSeries::new(traj.times().to_vec(), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn diagonal_h_is_a_permutation() {
        let h = Hermitian::new(ComplexMatrix::from_real_diag(&[0.5, -2.0, 1.0])).unwrap();
        let tr = EigenbasisTransform::new(&h).unwrap();
        assert!(tr.pair.is_none());
        assert_eq!(tr.eigenvalues, vec![-2.0, 1.0, 0.5]);
        for col in 0..3 {
            let v = tr.basis.column(col);
            assert_eq!(v.iter().filter(|z| z.norm() > 0.5).count(), 1);
        }
    }

    #[test]
    fn pair_ordering() {
        let h = Hermitian::new(ComplexMatrix::from_real_diag(&[0.3, -1.0, 1.0])).unwrap();
        let tr = EigenbasisTransform::new(&h).unwrap();
        assert_eq!(tr.eigenvalues, vec![1.0, -1.0, 0.3]);
        assert_eq!(tr.pair, Some((1.0, 0.3)));
    }

    #[test]
    fn w_rejects_wrong_dimension() {
        let s = ComplexMatrix::<f64>::identity(2);
        let tr = Trajectory::new(vec![0.0], vec![s]).unwrap();
        assert!(extract_w(&tr).is_err());
        let d = ComplexMatrix::from_fn(3, |i, j| if i == j { c(1.0 / 3.0, 0.0) } else { c(0.0, 0.0) });
        let tr = Trajectory::new(vec![0.0, 1.0], vec![d.clone(), d]).unwrap();
        assert_eq!(extract_w(&tr).unwrap().w, vec![0.0, 0.0]);
    }
}
