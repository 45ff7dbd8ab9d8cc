//! Lax pairs, the binary Darboux transformation `rho[1] = rho + (mu - nu)[P, A]`,
//! its similarity form, and the shift/rescale covariance of the family.

mod chain;
mod covariance;
mod lax;

pub use chain::{theorem1_residuals, theorem1_residuals_with_projector_fault, verify_theorem1_chain, ChainReport};
pub use covariance::{
    density_normalization, normalize_to_density, rescale_solution, shift_solution, DensityShift, Rescaled, Shifted,
    ShiftedRescaled,
};
pub use lax::{lax_residuals, seed_with_lax_vector, LaxEigenpair, LaxPropagator, LaxResiduals};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{comm, matrix_exp, ComplexMatrix, ComplexVector};
use crate::scalar::Real;
use crate::tolerance::tol;

/// Spectral parameters of the transformation. In Hermitian mode `nu` is
/// `conj(mu)` and the bra solution is the adjoint of the ket solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxConfig<T> {
    pub mu: Complex<T>,
    pub nu: Complex<T>,
    pub hermitian_mode: bool,
}

impl<T: Real> DarbouxConfig<T> {
    pub fn hermitian(mu: Complex<T>) -> Self {
        Self {
            mu,
            nu: mu.conj(),
            hermitian_mode: true,
        }
    }

    pub fn general(mu: Complex<T>, nu: Complex<T>) -> Self {
        Self {
            mu,
            nu,
            hermitian_mode: false,
        }
    }

    /// `mu == nu`, e.g. real `mu` in Hermitian mode.
    pub fn is_trivial(&self) -> bool {
        self.mu == self.nu
    }
}

/// `P = |phi><chi| / <chi|phi>`.
pub fn projector<T: Real>(phi: &ComplexVector<T>, chi: &ComplexVector<T>) -> Result<ComplexMatrix<T>> {
    if phi.len() != chi.len() {
        return Err(Error::DimensionMismatch {
            left: phi.len(),
            right: chi.len(),
        });
    }
    phi.check_finite()?;
    chi.check_finite()?;
    let overlap = chi.inner(phi);
    if !(overlap.norm() > tol::<T>(|t| t.projector_overlap) * phi.norm() * chi.norm()) {
        return Err(Error::SingularProjector {
            overlap: overlap.norm().to_f64_lossy(),
        });
    }
    Ok(phi.outer(chi).scale(Complex::<T>::one() / overlap))
}

/// Hermitian rank-one projector onto `phi`. Invariant under rescaling of `phi`.
pub fn hermitian_projector<T: Real>(phi: &ComplexVector<T>) -> Result<ComplexMatrix<T>> {
    projector(phi, phi)
}

pub(crate) fn idempotency_defect<T: Real>(p: &ComplexMatrix<T>) -> T {
    (p * p).max_diff(p) / T::one().max(p.max_norm())
}

fn ensure_idempotent<T: Real>(p: &ComplexMatrix<T>) -> Result<()> {
    let defect = idempotency_defect(p);
    if !(defect <= tol::<T>(|t| t.idempotent)) {
        return Err(Error::Precondition {
            check: "P^2 = P",
            detail: format!("relative defect {defect:e}"),
        });
    }
    Ok(())
}

/// `rho + (mu - nu) [P, A]`.
pub fn darboux_rho<T: Real>(
    rho: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
    p: &ComplexMatrix<T>,
    cfg: &DarbouxConfig<T>,
) -> Result<ComplexMatrix<T>> {
    rho.ensure_same_dim(a)?;
    rho.ensure_same_dim(p)?;
    ensure_idempotent(p)?;
    let out = rho + &comm(p, a).scale(cfg.mu - cfg.nu);
    if cfg.hermitian_mode && rho.hermiticity_defect() <= tol::<T>(|t| t.hermiticity) * T::one().max(rho.max_norm()) {
        let scale = T::one().max(out.max_norm());
        let defect = out.hermiticity_defect();
        if !(defect <= tol::<T>(|t| t.darboux_hermiticity) * scale) {
            return Err(Error::NotHermitian {
                deviation: defect.to_f64_lossy(),
            });
        }
    }
    Ok(out)
}

/// `T` and `T^{-1}` of the similarity form `rho[1] = T rho T^{-1}`.
#[derive(Debug, Clone)]
pub struct Similarity<T> {
    pub t: ComplexMatrix<T>,
    pub t_inv: ComplexMatrix<T>,
    /// `max |(1 + (mu-nu)/nu P) - exp(P ln(mu/nu))|`.
    pub form_mismatch: T,
}

/// `T = 1 + (mu - nu)/nu P = exp(P ln(mu/nu))` with the principal logarithm;
/// `T^{-1} = 1 + (nu - mu)/mu P`. Both forms of `T` are computed and must agree.
pub fn similarity_t<T: Real>(p: &ComplexMatrix<T>, cfg: &DarbouxConfig<T>) -> Result<Similarity<T>> {
    if cfg.nu.is_zero() || cfg.mu.is_zero() {
        return Err(Error::InvalidArgument("similarity T needs mu != 0 and nu != 0".into()));
    }
    ensure_idempotent(p)?;
    let n = p.dim();
    let id = ComplexMatrix::<T>::identity(n);
    let rational = &id + &p.scale((cfg.mu - cfg.nu) / cfg.nu);
    let t_inv = &id + &p.scale((cfg.nu - cfg.mu) / cfg.mu);
    let log = (cfg.mu / cfg.nu).ln();
    let exponential = matrix_exp(&p.scale(log))?;
    let form_mismatch = rational.max_diff(&exponential);
    let scale = T::one().max(rational.max_norm());
    if !(form_mismatch <= tol::<T>(|t| t.proof_step) * scale) {
        return Err(Error::IdentityViolated {
            check: "1 + (mu-nu)/nu P = exp(P ln(mu/nu))",
            residual: form_mismatch.to_f64_lossy(),
        });
    }
    Ok(Similarity {
        t: rational,
        t_inv,
        form_mismatch,
    })
}

/// Central-difference estimate of `||dT/dt||_max` for a time-dependent
/// projector. A vanishing rate with `rho[1] = T rho T^{-1}` would signal a
/// physically trivial transformation; no ruling is made here.
pub fn similarity_rate<T: Real>(
    projector_at: impl Fn(T) -> Result<ComplexMatrix<T>>,
    cfg: &DarbouxConfig<T>,
    t: T,
    h: T,
) -> Result<T> {
    let plus = similarity_t(&projector_at(t + h)?, cfg)?.t;
    let minus = similarity_t(&projector_at(t - h)?, cfg)?.t;
    Ok((&plus - &minus).max_norm() / (h + h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn v(entries: &[(f64, f64)]) -> ComplexVector<f64> {
        ComplexVector::from_vec(entries.iter().map(|(r, i)| c(*r, *i)).collect())
    }

    #[test]
    fn matrix_unit_projector() {
        let e1 = ComplexVector::<f64>::basis(3, 0);
        let p = projector(&e1, &e1).unwrap();
        assert!(p.max_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0])) == 0.0);
    }

    #[test]
    fn orthogonal_vectors_rejected() {
        let e1 = ComplexVector::<f64>::basis(3, 0);
        let e2 = ComplexVector::<f64>::basis(3, 1);
        assert!(matches!(projector(&e1, &e2), Err(Error::SingularProjector { .. })));
    }

    #[test]
    fn oblique_projector_idempotent() {
        let phi = v(&[(1.0, 0.5), (-0.3, 0.0), (0.2, 2.0)]);
        let chi = v(&[(0.1, 0.0), (1.0, -1.0), (0.7, 0.3)]);
        let p = projector(&phi, &chi).unwrap();
        assert!((&p * &p).max_diff(&p) < 1e-12);
        assert!(p.hermiticity_defect() > 1e-3);
    }

    #[test]
    fn real_mu_is_trivial() {
        let cfg = DarbouxConfig::hermitian(c::<f64>(0.7, 0.0));
        assert!(cfg.is_trivial());
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let rho = ComplexMatrix::from_real_diag(&[0.3, 0.7]);
        let p = hermitian_projector(&v(&[(1.0, 0.0), (0.5, 0.5)])).unwrap();
        assert_eq!(darboux_rho(&rho, &a, &p, &cfg).unwrap().max_diff(&rho), 0.0);
    }

    #[test]
    fn commuting_projector_is_trivial() {
        let cfg = DarbouxConfig::hermitian(c::<f64>(0.0, 1.0));
        let a = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let rho = ComplexMatrix::from_real_rows(&[&[0.5, 0.2], &[0.2, 0.5]]).unwrap();
        let p = hermitian_projector(&ComplexVector::basis(2, 1)).unwrap();
        assert!(darboux_rho(&rho, &a, &p, &cfg).unwrap().max_diff(&rho) < 1e-16);
    }

    #[test]
    fn non_idempotent_rejected() {
        let cfg = DarbouxConfig::hermitian(c::<f64>(0.0, 1.0));
        let m = ComplexMatrix::<f64>::identity(2).scale_real(2.0);
        assert!(darboux_rho(&m, &m, &m, &cfg).is_err());
    }

    #[test]
    fn similarity_special_cases() {
        let p = hermitian_projector(&v(&[(1.0, 0.0), (0.0, 1.0), (2.0, -1.0)])).unwrap();
        let id = ComplexMatrix::<f64>::identity(3);
        let same = similarity_t(&p, &DarbouxConfig::general(c(0.3, 0.4), c(0.3, 0.4))).unwrap();
        assert!(same.t.max_diff(&id) < 1e-15);
        let s = similarity_t(&p, &DarbouxConfig::hermitian(c(0.0, 1.0))).unwrap();
        let reflection = &id - &p.scale_real(2.0);
        assert!(s.t.max_diff(&reflection) < 1e-14);
        assert!((&s.t * &s.t.adjoint()).max_diff(&id) < 1e-14);
        assert!((&s.t * &s.t).max_diff(&id) < 1e-14);
        assert!((&s.t * &s.t_inv).max_diff(&id) < 1e-14);
        assert!(similarity_t(&p, &DarbouxConfig::general(c(1.0, 0.0), c(0.0, 0.0))).is_err());
        assert!(similarity_t(&p, &DarbouxConfig::general(c(0.0, 0.0), c(1.0, 0.0))).is_err());
    }
}
