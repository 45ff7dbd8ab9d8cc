use num_complex::Complex;
use num_traits::One;

use super::{projector, DarbouxConfig};
use crate::error::{Error, Result};
use crate::linalg::{comm, matrix_exp, ComplexMatrix, ComplexVector};
use crate::scalar::Real;
use crate::tolerance::tol;

/// Residual of every step of the similarity argument, in order.
#[derive(Debug, Clone)]
pub struct ChainReport<T> {
    pub steps: Vec<(String, T)>,
    /// Absolute tolerance applied to each residual.
    pub tolerance: T,
}

impl<T: Real> ChainReport<T> {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<(&str, T)> {
        self.steps
            .iter()
            .find(|(_, r)| !(*r <= self.tolerance))
            .map(|(n, r)| (n.as_str(), *r))
    }

    pub fn max_residual(&self) -> T {
        self.steps.iter().fold(T::zero(), |m, (_, r)| m.max(*r))
    }
}

/// Evaluates each step from the Lax eigen-equations to
/// `rho[1] = T rho T^{-1}` for the ket `phi` (parameter `mu`) and the bra
/// `<chi|` (parameter `nu`).
pub fn theorem1_residuals<T: Real>(
    rho: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
    phi: &ComplexVector<T>,
    chi: &ComplexVector<T>,
    cfg: &DarbouxConfig<T>,
) -> Result<ChainReport<T>> {
    chain(rho, a, phi, chi, cfg, None)
}

/// Fault-injection hook: runs the chain with `P` replaced by `perturb(P)`.
#[doc(hidden)]
pub fn theorem1_residuals_with_projector_fault<T: Real>(
    rho: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
    phi: &ComplexVector<T>,
    chi: &ComplexVector<T>,
    cfg: &DarbouxConfig<T>,
    perturb: &dyn Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>,
) -> Result<ChainReport<T>> {
    chain(rho, a, phi, chi, cfg, Some(perturb))
}

type Perturb<'a, T> = Option<&'a dyn Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>>;

fn chain<T: Real>(
    rho: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
    phi: &ComplexVector<T>,
    chi: &ComplexVector<T>,
    cfg: &DarbouxConfig<T>,
    perturb: Perturb<'_, T>,
) -> Result<ChainReport<T>> {
    rho.ensure_same_dim(a)?;
    let (mu, nu) = (cfg.mu, cfg.nu);
    if mu == Complex::new(T::zero(), T::zero()) || nu == Complex::new(T::zero(), T::zero()) {
        return Err(Error::InvalidArgument("the chain divides by mu and nu".into()));
    }
    let phi = phi.normalized();
    let chi = chi.normalized();
    let l_mu = rho - &a.scale(mu);
    let l_nu = rho - &a.scale(nu);
    let z_mu = phi.inner(&l_mu.mat_vec(&phi));
    // <chi| L = z <chi|  <=>  L^dagger |chi> = conj(z) |chi>.
    let z_nu = l_nu.adjoint().mat_vec(&chi).inner(&chi);
    let mut p = projector(&phi, &chi)?;
    if let Some(f) = perturb {
        p = f(&p);
    }
    let id = ComplexMatrix::<T>::identity(rho.dim());

    let mut steps = Vec::new();
    let mut push = |name: &str, r: T| steps.push((name.to_string(), r));

    push(
        "ket eigen-equation z_mu phi = (rho - mu A) phi",
        l_mu.mat_vec(&phi).sub(&phi.scale(z_mu)).norm(),
    );
    push(
        "bra eigen-equation z_nu <chi| = <chi|(rho - nu A)",
        l_nu.adjoint().mat_vec(&chi).sub(&chi.scale(z_nu.conj())).norm(),
    );
    let lp = &l_mu * &p;
    let pl = &p * &l_nu;
    push("z_mu P = (rho - mu A) P", p.scale(z_mu).max_diff(&lp));
    push("z_nu P = P (rho - nu A)", p.scale(z_nu).max_diff(&pl));
    push("P (rho - mu A) P = (rho - mu A) P", (&p * &lp).max_diff(&lp));
    push("P (rho - nu A) P = P (rho - nu A)", (&pl * &p).max_diff(&pl));

    let pa = comm(&p, a);
    let prp = &(&p * rho) * &p;
    let identity_rhs = &(&prp.scale((nu - mu) / (mu * nu)) - &(rho * &p).scale(Complex::<T>::one() / mu))
        + &(&p * rho).scale(Complex::<T>::one() / nu);
    push(
        "[P, A] = (nu-mu)/(mu nu) P rho P - rho P / mu + P rho / nu",
        pa.max_diff(&identity_rhs),
    );

    let rho1 = rho + &pa.scale(mu - nu);
    let left = &id + &p.scale((mu - nu) / nu);
    let right = &id + &p.scale((nu - mu) / mu);
    push(
        "rho[1] = (1 + (mu-nu)/nu P) rho (1 + (nu-mu)/mu P)",
        rho1.max_diff(&(&(&left * rho) * &right)),
    );
    let t_exp = matrix_exp(&p.scale((mu / nu).ln()))?;
    let t_inv = matrix_exp(&p.scale((nu / mu).ln()))?;
    push(
        "rho[1] = T rho T^-1 with T = exp(P ln(mu/nu))",
        rho1.max_diff(&(&(&t_exp * rho) * &t_inv)),
    );

    let scale =
        (T::one() + rho.max_norm() + mu.norm().max(nu.norm()) * a.max_norm()) * T::one().max(p.max_norm()).powi(2);
    Ok(ChainReport {
        steps,
        tolerance: tol::<T>(|t| t.proof_step) * scale,
    })
}

/// [`theorem1_residuals`], failing with the first step above tolerance. A
/// failure in one of the first two steps means `phi` or `chi` is not a Lax
/// eigenvector; a later first failure points at the arithmetic.
pub fn verify_theorem1_chain<T: Real>(
    rho: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
    phi: &ComplexVector<T>,
    chi: &ComplexVector<T>,
    cfg: &DarbouxConfig<T>,
) -> Result<ChainReport<T>> {
    let report = theorem1_residuals(rho, a, phi, chi, cfg)?;
    if let Some((step, residual)) = report.first_failure() {
        return Err(Error::ChainStep {
            step: step.to_string(),
            residual: residual.to_f64_lossy(),
            tolerance: report.tolerance.to_f64_lossy(),
        });
    }
    Ok(report)
}
