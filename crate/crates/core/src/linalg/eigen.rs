//! Eigen-solvers for small dense complex matrices.
//!
//! * Hermitian matrices: cyclic complex Jacobi rotations.
//! * Nullspaces of arbitrary matrices: one-sided (Hestenes) Jacobi SVD, which
//!   resolves tiny singular values to high relative accuracy.
//! * Eigenvalues of arbitrary matrices: Householder reduction to Hessenberg
//!   form followed by single-shift complex QR with Wilkinson shifts.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::matrix::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance::tol;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `M = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> ComplexVector<T> {
        self.vectors.column(k)
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn apply_fn(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.dim();
        let fv: Vec<Complex<T>> = self.values.iter().map(|l| f(*l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| acc + v[(i, k)] * fv[k] * v[(j, k)].conj())
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.apply_fn(|l| Complex::new(l, T::zero()))
    }

    /// `exp(coeff * M)` evaluated spectrally.
    pub fn exp_scaled(&self, coeff: Complex<T>) -> ComplexMatrix<T> {
        self.apply_fn(|l| (coeff * l).exp())
    }

    /// Coefficients of `v` in the eigenbasis, `V^dagger v`.
    pub fn coefficients(&self, v: &ComplexVector<T>) -> ComplexVector<T> {
        self.vectors.adjoint().mat_vec(v)
    }

    /// Inverse of [`coefficients`](Self::coefficients).
    pub fn synthesize(&self, coeffs: &ComplexVector<T>) -> ComplexVector<T> {
        self.vectors.mat_vec(coeffs)
    }
}

/// Unitary 2x2 rotation `J` that diagonalises the Hermitian block
/// `[[alpha, gamma], [conj(gamma), beta]]` via `J^dagger G J`.
#[derive(Clone, Copy)]
struct Rotation<T> {
    pp: Complex<T>,
    pq: Complex<T>,
    qp: Complex<T>,
    qq: Complex<T>,
}

impl<T: Real> Rotation<T> {
    fn new(alpha: T, beta: T, gamma: Complex<T>) -> Self {
        let g = gamma.norm();
        let phase = gamma / g; // e^{i theta}
        let tau = (beta - alpha) / (g + g);
        let t = if tau.is_zero() {
            T::one()
        } else {
            tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
        };
        let cs = T::one() / (T::one() + t * t).sqrt();
        let sn = t * cs;
        let e = phase.conj();
        Rotation {
            pp: Complex::new(cs, T::zero()),
            pq: Complex::new(sn, T::zero()),
            qp: e * (-sn),
            qq: e * cs,
        }
    }

    /// `M <- M J` restricted to columns p, q.
    fn apply_right(&self, m: &mut ComplexMatrix<T>, p: usize, q: usize) {
        for k in 0..m.dim() {
            let mp = m[(k, p)];
            let mq = m[(k, q)];
            m[(k, p)] = mp * self.pp + mq * self.qp;
            m[(k, q)] = mp * self.pq + mq * self.qq;
        }
    }

    /// `M <- J^dagger M` restricted to rows p, q.
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix<T>, p: usize, q: usize) {
        for k in 0..m.dim() {
            let mp = m[(p, k)];
            let mq = m[(q, k)];
            m[(p, k)] = self.pp.conj() * mp + self.qp.conj() * mq;
            m[(q, k)] = self.pq.conj() * mp + self.qq.conj() * mq;
        }
    }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn herm_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    m.check_finite()?;
    let defect = m.hermiticity_defect();
    let bound = tol::<T>(|t| t.hermiticity) * T::one().max(m.max_norm());
    if defect > bound {
        return Err(Error::NotHermitian {
            deviation: defect.to_f64_lossy(),
        });
    }
    herm_eig_unchecked(&m.hermitize())
}

pub(crate) fn herm_eig_unchecked<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = T::epsilon() * scale;
    let mut converged = n < 2 || scale.is_zero();
    for _ in 0..MAX_SWEEPS {
        if converged || off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let gamma = a[(p, q)];
                if gamma.norm() <= T::min_positive_value() {
                    continue;
                }
                let rot = Rotation::new(a[(p, p)].re, a[(q, q)].re, gamma);
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                rot.apply_right(&mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence {
            algorithm: "hermitian Jacobi",
            iterations: MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Right singular vectors and singular values of an arbitrary square matrix.
#[derive(Debug, Clone)]
pub struct RightSingular<T> {
    /// Unsorted; `sigma[k]` pairs with column `k` of `v`.
    pub sigma: Vec<T>,
    pub v: ComplexMatrix<T>,
}

pub fn right_singular<T: Real>(m: &ComplexMatrix<T>) -> Result<RightSingular<T>> {
    m.check_finite()?;
    let n = m.dim();
    let mut u = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), Complex::zero());
                for k in 0..n {
                    alpha += u[(k, p)].norm_sqr();
                    beta += u[(k, q)].norm_sqr();
                    gamma += u[(k, p)].conj() * u[(k, q)];
                }
                if alpha.is_zero() || beta.is_zero() || gamma.norm() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::new(alpha, beta, gamma);
                rot.apply_right(&mut u, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence {
            algorithm: "one-sided Jacobi SVD",
            iterations: MAX_SWEEPS,
        });
    }
    let sigma = (0..n).map(|j| u.column(j).norm()).collect();
    Ok(RightSingular { sigma, v })
}

/// Orthonormal basis of the numerical nullspace of `m - z I`.
///
/// A right singular vector is kept when its singular value is at most the
/// nullspace rank tolerance times `max(1, sigma_max)`. Returns an empty list
/// when `z` is not an eigenvalue. Degenerate eigenspaces come back in an
/// arbitrary orthonormal basis.
pub fn general_eigvec<T: Real>(m: &ComplexMatrix<T>, z: Complex<T>) -> Vec<ComplexVector<T>> {
    let shifted = m.add_identity(-z);
    let Ok(svd) = right_singular(&shifted) else {
        return Vec::new();
    };
    let smax = svd.sigma.iter().copied().fold(T::zero(), T::max);
    let cutoff = tol::<T>(|t| t.nullspace_rank) * T::one().max(smax);
    let mut picked: Vec<(T, usize)> = svd
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff)
        .map(|(k, s)| (*s, k))
        .collect();
    picked.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite singular values"));
    picked.into_iter().map(|(_, k)| svd.v.column(k)).collect()
}

/// Unitary Hessenberg reduction `Q^dagger M Q`, Householder based.
pub fn hessenberg<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = m.dim();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if xnorm.is_zero() {
            continue;
        }
        let phase = if x[0].norm().is_zero() {
            Complex::one()
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vnorm.is_zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        let two = T::lit(2.0);
        // H <- (I - 2 v v^dagger) H on rows k+1..n
        for j in 0..n {
            let dot = (0..v.len()).fold(Complex::<T>::zero(), |acc, r| acc + v[r].conj() * h[(k + 1 + r, j)]);
            for r in 0..v.len() {
                let upd = v[r] * dot * two;
                h[(k + 1 + r, j)] -= upd;
            }
        }
        // H <- H (I - 2 v v^dagger) on columns k+1..n
        for i in 0..n {
            let dot = (0..v.len()).fold(Complex::<T>::zero(), |acc, r| acc + h[(i, k + 1 + r)] * v[r]);
            for r in 0..v.len() {
                let upd = dot * v[r].conj() * two;
                h[(i, k + 1 + r)] -= upd;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
    h
}

/// All eigenvalues of an arbitrary square matrix (unordered).
pub fn eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    m.check_finite()?;
    let n = m.dim();
    let mut h = hessenberg(m);
    let eps = T::epsilon();
    let max_iter = 100 * n.max(1);
    let mut hi = n.saturating_sub(1);
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let floor = if diag.is_zero() { h.max_norm() } else { diag };
            if sub <= eps * floor {
                h[(l, l - 1)] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter * n.max(1) {
            return Err(Error::NoConvergence {
                algorithm: "complex Hessenberg QR",
                iterations: total,
            });
        }
        let a = h[(hi - 1, hi - 1)];
        let b = h[(hi - 1, hi)];
        let cc = h[(hi, hi - 1)];
        let d = h[(hi, hi)];
        let mut shift = if iter % 11 == 10 {
            d + Complex::new(h[(hi, hi - 1)].norm(), T::zero())
        } else {
            let half = T::lit(0.5);
            let mean = (a + d) * half;
            let disc = ((a - d) * (a - d) * T::lit(0.25) + b * cc).sqrt();
            let s1 = mean + disc;
            let s2 = mean - disc;
            if (s1 - d).norm() <= (s2 - d).norm() {
                s1
            } else {
                s2
            }
        };
        if !(shift.re.is_finite() && shift.im.is_finite()) {
            shift = d;
        }
        for k in l..=hi {
            h[(k, k)] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r.is_zero() {
                (Complex::one(), Complex::zero())
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let hk = h[(k, j)];
                let hk1 = h[(k + 1, j)];
                h[(k, j)] = c.conj() * hk + s.conj() * hk1;
                h[(k + 1, j)] = -s * hk + c * hk1;
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.into_iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let hk = h[(i, k)];
                let hk1 = h[(i, k + 1)];
                h[(i, k)] = hk * c + hk1 * s;
                h[(i, k + 1)] = -(hk * s.conj()) + hk1 * c.conj();
            }
        }
        for k in l..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// A cluster of numerically coincident eigenvalues with its eigenspace basis.
#[derive(Debug, Clone)]
pub struct Eigenspace<T> {
    pub value: Complex<T>,
    pub algebraic_multiplicity: usize,
    pub basis: Vec<ComplexVector<T>>,
}

/// Eigenvalues of `m` grouped within `cluster_tol`, each with an orthonormal
/// nullspace basis of `m - z I`.
pub fn eigenspaces<T: Real>(m: &ComplexMatrix<T>, cluster_tol: T) -> Result<Vec<Eigenspace<T>>> {
    let vals = eigenvalues(m)?;
    let mut clusters: Vec<Vec<Complex<T>>> = Vec::new();
    for z in vals {
        match clusters.iter_mut().find(|c| (c[0] - z).norm() <= cluster_tol) {
            Some(c) => c.push(z),
            None => clusters.push(vec![z]),
        }
    }
    let mut out: Vec<Eigenspace<T>> = clusters
        .into_iter()
        .map(|c| {
            let count = T::lit(c.len() as f64);
            let mean = c.iter().fold(Complex::zero(), |a, b| a + *b) / count;
            Eigenspace {
                value: mean,
                algebraic_multiplicity: c.len(),
                basis: general_eigvec(m, mean),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .expect("finite eigenvalues")
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix<f64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = ComplexMatrix::from_fn(n, |_, _| Complex::new(next(), next()));
        (&m + &m.adjoint()).scale_real(0.5)
    }

    #[test]
    fn diagonal_seed_sorted() {
        let s2 = 2f64.sqrt();
        let m = ComplexMatrix::<f64>::from_real_diag(&[0.5 + s2 / 2.0, 0.5 - s2 / 2.0, 0.5]);
        let e = herm_eig(&m).unwrap();
        let want = [0.5 - s2 / 2.0, 0.5, 0.5 + s2 / 2.0];
        for (a, b) in e.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_eigenvalues() {
        let e = herm_eig(&ComplexMatrix::<f64>::identity(4)).unwrap();
        assert!(e.values.iter().all(|v| (*v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn random_reconstruction_and_unitarity() {
        for seed in 0..20 {
            let m = random_hermitian(5, seed);
            let e = herm_eig(&m).unwrap();
            assert!(e.reconstruct().max_diff(&m) < 1e-10);
            let vv = &e.vectors.adjoint() * &e.vectors;
            assert!(vv.max_diff(&ComplexMatrix::identity(5)) < 1e-10);
            for k in 0..5 {
                let v = e.vector(k);
                let r = m.mat_vec(&v).sub(&v.scale(c(e.values[k], 0.0)));
                assert!(r.norm() < 1e-10);
            }
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn general_eigvec_identity_cases() {
        let id = ComplexMatrix::<f64>::identity(3);
        assert_eq!(general_eigvec(&id, c(1.0, 0.0)).len(), 3);
        assert!(general_eigvec(&id, c(2.0, 0.0)).is_empty());
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let m = ComplexMatrix::<f64>::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.5), c(1.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.25, -2.0)],
        ])
        .unwrap();
        let mut got = eigenvalues(&m).unwrap();
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let want = [c(-1.0, 0.5), c(0.25, -2.0), c(1.0, 1.0)];
        for (g, w) in got.iter().zip(want) {
            assert!((*g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn general_eigenvalues_match_hermitian_solver() {
        for seed in 0..10 {
            let m = random_hermitian(6, 100 + seed);
            let mut got: Vec<f64> = eigenvalues(&m).unwrap().iter().map(|z| z.re).collect();
            got.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let want = herm_eig(&m).unwrap().values;
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn f32_instantiation() {
        let m = ComplexMatrix::<f32>::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let e = herm_eig(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-6);
        assert!((e.values[1] - 3.0).abs() < 1e-6);
    }
}
