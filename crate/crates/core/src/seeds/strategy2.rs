use num_complex::Complex;

use super::spectral::{ray_projector, SpectralVector};
use crate::dynamics::{ClosedForm, EquationFamily};
use crate::error::{Error, Result};
use crate::laxdarboux::{DarbouxConfig, LaxEigenpair, LaxPropagator};
use crate::linalg::{anticommutator, comm, herm_eig, ComplexMatrix, ComplexVector, Hermitian};
use crate::scalar::{c, Real};
use crate::tolerance::tol;

/// A stationary seed `xi` with `A xi = -xi A` for the family of index `n`.
/// For even `n` the seed is stationary for every such pair.
#[derive(Debug, Clone)]
pub struct Strategy2Seed<T> {
    pub a: Hermitian<T>,
    pub xi: Hermitian<T>,
    pub n: u32,
}

impl<T: Real> Strategy2Seed<T> {
    pub fn new(a: Hermitian<T>, xi: Hermitian<T>, n: u32) -> Result<Self> {
        let anti = anticommutator(a.matrix(), xi.matrix())?;
        let defect = anti.max_norm();
        if !(defect <= tol::<T>(|t| t.identity) * T::one().max(a.max_norm() * xi.max_norm())) {
            return Err(Error::Precondition {
                check: "A xi + xi A = 0",
                detail: format!("max |{{A, xi}}| = {defect:e}"),
            });
        }
        Ok(Self { a, xi, n })
    }

    pub fn family(&self) -> EquationFamily<T> {
        EquationFamily::new(self.n, self.a.clone())
    }
}

fn check_parity(n: u32, even: bool) -> Result<()> {
    if n.is_multiple_of(2) != even || (even && n == 0) {
        let want = if even { "even n >= 2" } else { "odd n" };
        return Err(Error::InvalidArgument(format!("propagator needs {want}, got n = {n}")));
    }
    Ok(())
}

/// `exp(-i z A^n t) phi0` for even `n`.
pub fn propagate_phi_even<T: Real>(
    phi0: &ComplexVector<T>,
    a: &Hermitian<T>,
    n: u32,
    z: Complex<T>,
    t: T,
) -> Result<ComplexVector<T>> {
    check_parity(n, true)?;
    let e = herm_eig(a)?;
    let coeff = c::<T>(0.0, -1.0) * z * t;
    Ok(e.apply_fn(|l| (coeff * l.powi(n as i32)).exp()).mat_vec(phi0))
}

/// `exp(i mu A^{n+1} t) phi0` for odd `n`.
pub fn propagate_phi_odd<T: Real>(
    phi0: &ComplexVector<T>,
    a: &Hermitian<T>,
    n: u32,
    mu: Complex<T>,
    t: T,
) -> Result<ComplexVector<T>> {
    check_parity(n, false)?;
    let e = herm_eig(a)?;
    let coeff = c::<T>(0.0, 1.0) * mu * t;
    Ok(e.apply_fn(|l| (coeff * l.powi(n as i32 + 1)).exp()).mat_vec(phi0))
}

/// `xi[1](t) = xi + (mu - conj mu) [P(t), A]`, `P(t)` the projector onto the
/// propagated Lax vector. The propagator is not unitary; the vector is
/// formed with shifted exponents in the eigenbasis of `A` so that `P(t)` is
/// exact for any `|t|`.
#[derive(Debug, Clone)]
pub struct Strategy2Solution<T> {
    seed: Strategy2Seed<T>,
    pair: LaxEigenpair<T>,
    cfg: DarbouxConfig<T>,
    phi_a: SpectralVector<T>,
}

impl<T: Real> Strategy2Solution<T> {
    pub fn new(seed: Strategy2Seed<T>, mu: Complex<T>, phi0: ComplexVector<T>) -> Result<Self> {
        if mu.im.is_zero() {
            return Err(Error::Precondition {
                check: "Im mu != 0",
                detail: "real mu gives the trivial transformation".into(),
            });
        }
        if seed.n == 0 {
            return Err(Error::InvalidArgument("family index must be >= 1".into()));
        }
        let pair = LaxEigenpair::new(seed.xi.matrix(), seed.a.matrix(), mu, phi0)?;
        let phi_a = SpectralVector::new(herm_eig(&seed.a)?, &pair.phi0);
        Ok(Self {
            seed,
            pair,
            cfg: DarbouxConfig::hermitian(mu),
            phi_a,
        })
    }

    pub fn seed(&self) -> &Strategy2Seed<T> {
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

    fn exponent(&self, t: T) -> impl Fn(T) -> Complex<T> {
        let n = self.seed.n as i32;
        let (mu, z) = (self.pair.mu, self.pair.z);
        let even = n % 2 == 0;
        move |l: T| {
            if even {
                c::<T>(0.0, -1.0) * z * l.powi(n) * t
            } else {
                c::<T>(0.0, 1.0) * mu * l.powi(n + 1) * t
            }
        }
    }

    pub fn projector(&self, t: T) -> Result<ComplexMatrix<T>> {
        let (w, _) = self.phi_a.evolve(self.exponent(t));
        if !(w.norm() > T::zero()) {
            return Err(Error::SingularNormalization { value: 0.0 });
        }
        Ok(ray_projector(&w))
    }

    /// `[P(0), A] = 0`: the dressing leaves the seed unchanged.
    pub fn is_trivial(&self) -> Result<bool> {
        let p = self.projector(T::zero())?;
        let scale = T::one().max(self.seed.a.max_norm());
        Ok(comm(&p, self.seed.a.matrix()).max_norm() <= tol::<T>(|t| t.commutation) * scale)
    }

    pub fn lax(&self) -> Strategy2Lax<'_, T> {
        Strategy2Lax { sol: self }
    }
}

impl<T: Real> ClosedForm<T> for Strategy2Solution<T> {
    fn dim(&self) -> usize {
        self.seed.a.dim()
    }

    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        let p = self.projector(t)?;
        let mu = self.pair.mu;
        let out = self.seed.xi.matrix() + &comm(&p, self.seed.a.matrix()).scale(mu - mu.conj());
        let defect = out.hermiticity_defect();
        if !(defect <= tol::<T>(|t| t.darboux_hermiticity) * T::one().max(out.max_norm())) {
            return Err(Error::NotHermitian {
                deviation: defect.to_f64_lossy(),
            });
        }
        Ok(out.hermitize())
    }
}

/// Unshifted Lax solution of the stationary seed.
#[derive(Debug, Clone, Copy)]
pub struct Strategy2Lax<'a, T> {
    sol: &'a Strategy2Solution<T>,
}

impl<T: Real> LaxPropagator<T> for Strategy2Lax<'_, T> {
    fn pair(&self) -> &LaxEigenpair<T> {
        &self.sol.pair
    }

    fn phi(&self, t: T) -> Result<ComplexVector<T>> {
        let (w, m) = self.sol.phi_a.evolve(self.sol.exponent(t));
        Ok(w.scale(Complex::new(m, T::zero()).exp()))
    }
}

pub fn dressed_strategy2<T: Real>(
    seed: &Strategy2Seed<T>,
    mu: Complex<T>,
    phi0: &ComplexVector<T>,
    t: T,
) -> Result<ComplexMatrix<T>> {
    Strategy2Solution::new(seed.clone(), mu, phi0.clone())?.state(t)
}
