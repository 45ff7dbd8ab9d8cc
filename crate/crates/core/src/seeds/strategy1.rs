use num_complex::Complex;

use super::spectral::{ray_projector, SpectralVector};
use crate::dynamics::{ClosedForm, EquationFamily};
use crate::error::{Error, Result};
use crate::laxdarboux::{DarbouxConfig, LaxEigenpair, LaxPropagator};
use crate::linalg::{comm, herm_eig, ComplexMatrix, ComplexVector, Hermitian, HermitianEigen};
use crate::scalar::{c, Real};
use crate::tolerance::tol;

/// A seed `xi0` for `i rho' = [H, rho^2]` such that
/// `Delta_a = xi0^2 - a xi0` commutes with `H`. Its flow is then
/// `xi(t) = exp(-i a H t) xi0 exp(i a H t)`.
#[derive(Debug, Clone)]
pub struct Strategy1Seed<T> {
    pub h: Hermitian<T>,
    pub xi0: Hermitian<T>,
    pub a: T,
    pub delta: Hermitian<T>,
}

impl<T: Real> Strategy1Seed<T> {
    pub fn new(h: Hermitian<T>, xi0: Hermitian<T>, a: T) -> Result<Self> {
        h.ensure_same_dim(&xi0)?;
        let x = xi0.matrix();
        let delta = Hermitian::project(&(&(x * x) - &x.scale_real(a)));
        let scale = T::one().max(h.max_norm() * delta.max_norm());
        let defect = comm(h.matrix(), delta.matrix()).max_norm();
        if !(defect <= tol::<T>(|t| t.identity) * scale) {
            return Err(Error::Precondition {
                check: "[H, xi0^2 - a xi0] = 0",
                detail: format!("max |[H, Delta_a]| = {defect:e}"),
            });
        }
        let n = delta.dim();
        let mean = delta.trace().re / T::lit(n as f64);
        let traceless = delta.add_identity(Complex::new(-mean, T::zero())).max_norm();
        if !(traceless > tol::<T>(|t| t.identity) * T::one().max(delta.max_norm())) {
            return Err(Error::Precondition {
                check: "Delta_a is not a multiple of the identity",
                detail: format!("Delta_a = {mean} I"),
            });
        }
        let motion = comm(h.matrix(), x).max_norm();
        if !(motion > tol::<T>(|t| t.identity) * T::one().max(h.max_norm() * x.max_norm())) {
            return Err(Error::Precondition {
                check: "[H, xi0] != 0",
                detail: "seed is stationary".into(),
            });
        }
        Ok(Self { h, xi0, a, delta })
    }

    /// The `n = 1` family with `A = H`.
    pub fn family(&self) -> EquationFamily<T> {
        EquationFamily::new(1, self.h.clone())
    }

    pub fn flow(&self) -> Result<SeedFlow<T>> {
        Ok(SeedFlow {
            h_eig: herm_eig(&self.h)?,
            xi0: self.xi0.matrix().clone(),
            a: self.a,
        })
    }
}

/// `xi(t) = exp(-i a H t) xi0 exp(i a H t)`.
#[derive(Debug, Clone)]
pub struct SeedFlow<T> {
    h_eig: HermitianEigen<T>,
    xi0: ComplexMatrix<T>,
    a: T,
}

impl<T: Real> SeedFlow<T> {
    fn unitary(&self, t: T) -> ComplexMatrix<T> {
        self.h_eig.exp_scaled(c::<T>(0.0, -1.0) * self.a * t)
    }
}

impl<T: Real> ClosedForm<T> for SeedFlow<T> {
    fn dim(&self) -> usize {
        self.xi0.dim()
    }

    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        let u = self.unitary(t);
        Ok(&(&u * &self.xi0) * &u.adjoint())
    }
}

/// Closed-form dressing of a [`Strategy1Seed`]:
///
/// ```text
/// xi[1](t) = U(t) (xi0 + (mu - conj mu) [P(t), H]) U(t)^dagger,
/// U(t) = exp(-i a H t),
/// P(t) = projector onto exp(-(i/mu) Delta_a t) phi0.
/// ```
///
/// The unnormalized `P` carries the factor `1/F_a(t)` with
/// `F_a(t) = <phi0| exp(i (mu - conj mu)/|mu|^2 Delta_a t) |phi0>`; here the
/// projector is formed from the direction of the vector directly, with the
/// exponentials shifted in the eigenbasis of `Delta_a`, so the evaluation is
/// exact for any `|t|` that does not make `F_a` itself vanish.
#[derive(Debug, Clone)]
pub struct Strategy1Solution<T> {
    seed: Strategy1Seed<T>,
    flow: SeedFlow<T>,
    pair: LaxEigenpair<T>,
    cfg: DarbouxConfig<T>,
    phi_delta: SpectralVector<T>,
}

impl<T: Real> Strategy1Solution<T> {
    pub fn new(seed: Strategy1Seed<T>, mu: Complex<T>, phi0: ComplexVector<T>) -> Result<Self> {
        if mu.im.is_zero() {
            return Err(Error::Precondition {
                check: "Im mu != 0",
                detail: "real mu gives the trivial transformation".into(),
            });
        }
        let pair = LaxEigenpair::new(seed.xi0.matrix(), seed.h.matrix(), mu, phi0)?;
        let d = seed.delta.matrix();
        let u = &pair.phi0;
        let expect = u.inner(&d.mat_vec(u));
        let spread = d.mat_vec(u).sub(&u.scale(expect)).norm();
        if !(spread > tol::<T>(|t| t.lax_eigen) * T::one().max(d.max_norm())) {
            return Err(Error::Precondition {
                check: "phi0 is not an eigenvector of Delta_a",
                detail: "the dressing would be time independent".into(),
            });
        }
        let phi_delta = SpectralVector::new(herm_eig(&seed.delta)?, u);
        Ok(Self {
            flow: seed.flow()?,
            seed,
            pair,
            cfg: DarbouxConfig::hermitian(mu),
            phi_delta,
        })
    }

    pub fn seed(&self) -> &Strategy1Seed<T> {
        &self.seed
    }

    pub fn pair(&self) -> &LaxEigenpair<T> {
        &self.pair
    }

    pub fn config(&self) -> &DarbouxConfig<T> {
        &self.cfg
    }

    pub fn family(&self) -> EquationFamily<T> {
        self.seed.family()
    }

    pub fn seed_flow(&self) -> &SeedFlow<T> {
        &self.flow
    }

    /// `ln F_a(t)`; `F_a` is real and positive for Hermitian `Delta_a`.
    pub fn log_f_a(&self, t: T) -> T {
        let mu = self.pair.mu;
        // i (mu - conj mu) / |mu|^2 = -2 Im(mu) / |mu|^2.
        let rate = -(mu.im + mu.im) / mu.norm_sqr() * t;
        self.phi_delta.log_weighted_norm(|d| rate * d)
    }

    fn check_normalization(&self, t: T) -> Result<()> {
        let log_f = self.log_f_a(t);
        if log_f < tol::<T>(|t| t.singular_normalization).ln() {
            return Err(Error::SingularNormalization {
                value: log_f.exp().to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Projector in the frame co-rotating with `exp(-i a H t)`.
    pub fn internal_projector(&self, t: T) -> Result<ComplexMatrix<T>> {
        self.check_normalization(t)?;
        let coeff = c::<T>(0.0, -1.0) / self.pair.mu * t;
        let (w, _) = self.phi_delta.evolve(|d| coeff * d);
        Ok(ray_projector(&w))
    }

    /// `xi0 + (mu - conj mu) [P(t), H]`.
    pub fn internal(&self, t: T) -> Result<ComplexMatrix<T>> {
        let p = self.internal_projector(t)?;
        let mu = self.pair.mu;
        Ok(self.seed.xi0.matrix() + &comm(&p, self.seed.h.matrix()).scale(mu - mu.conj()))
    }

    /// Lax solution of the seed flow for this `mu`.
    pub fn lax(&self) -> Strategy1Lax<'_, T> {
        Strategy1Lax { sol: self }
    }
}

impl<T: Real> ClosedForm<T> for Strategy1Solution<T> {
    fn dim(&self) -> usize {
        self.seed.h.dim()
    }

    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        let u = self.flow.unitary(t);
        let out = &(&u * &self.internal(t)?) * &u.adjoint();
        let defect = out.hermiticity_defect();
        if !(defect <= tol::<T>(|t| t.darboux_hermiticity) * T::one().max(out.max_norm())) {
            return Err(Error::NotHermitian {
                deviation: defect.to_f64_lossy(),
            });
        }
        Ok(out.hermitize())
    }
}

/// `phi(t) = exp(i z (z - a) t / mu) exp(-i a H t) exp(-(i/mu) Delta_a t) phi0`,
/// which solves both halves of the Lax pair of the seed flow.
/// Unshifted, so intended for moderate `|t|`.
#[derive(Debug, Clone, Copy)]
pub struct Strategy1Lax<'a, T> {
    sol: &'a Strategy1Solution<T>,
}

impl<T: Real> LaxPropagator<T> for Strategy1Lax<'_, T> {
    fn pair(&self) -> &LaxEigenpair<T> {
        &self.sol.pair
    }

    fn phi(&self, t: T) -> Result<ComplexVector<T>> {
        let s = self.sol;
        let (mu, z) = (s.pair.mu, s.pair.z);
        let i = c::<T>(0.0, 1.0);
        let coeff = -i / mu * t;
        let (w, m) = s.phi_delta.evolve(|d| coeff * d);
        let inner = w.scale(Complex::new(m, T::zero()).exp());
        let phase = (i * z * (z - Complex::new(s.seed.a, T::zero())) * t / mu).exp();
        Ok(s.flow.unitary(t).mat_vec(&inner).scale(phase))
    }
}

/// One-shot evaluation of the dressed Strategy-1 solution at `t`.
pub fn dressed_strategy1<T: Real>(
    seed: &Strategy1Seed<T>,
    mu: Complex<T>,
    phi0: &ComplexVector<T>,
    t: T,
) -> Result<ComplexMatrix<T>> {
    Strategy1Solution::new(seed.clone(), mu, phi0.clone())?.state(t)
}
