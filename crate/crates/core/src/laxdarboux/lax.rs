use num_complex::Complex;

use crate::dynamics::EquationFamily;
use crate::error::{Error, Result};
use crate::linalg::{general_eigvec, ComplexMatrix, ComplexVector};
use crate::scalar::Real;
use crate::tolerance::tol;

/// A solution of `(rho - mu A) phi = z phi` at the reference time.
#[derive(Debug, Clone)]
pub struct LaxEigenpair<T> {
    pub mu: Complex<T>,
    pub z: Complex<T>,
    /// Unit norm.
    pub phi0: ComplexVector<T>,
}

impl<T: Real> LaxEigenpair<T> {
    /// Takes `z` from the Rayleigh quotient and checks the eigen-equation.
    pub fn new(rho: &ComplexMatrix<T>, a: &ComplexMatrix<T>, mu: Complex<T>, phi0: ComplexVector<T>) -> Result<Self> {
        rho.ensure_same_dim(a)?;
        if phi0.len() != rho.dim() {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: phi0.len(),
            });
        }
        if !(phi0.norm() > T::zero()) {
            return Err(Error::InvalidArgument("Lax vector must be nonzero".into()));
        }
        let phi0 = phi0.normalized();
        let lax = lax_operator(rho, a, mu);
        let z = phi0.inner(&lax.mat_vec(&phi0));
        let pair = Self { mu, z, phi0 };
        let residual = pair.spatial_residual(rho, a);
        let scale = T::one().max(lax.max_norm());
        if !(residual <= tol::<T>(|t| t.lax_eigen) * scale) {
            return Err(Error::Precondition {
                check: "(rho - mu A) phi = z phi",
                detail: format!("residual {residual:e}"),
            });
        }
        Ok(pair)
    }

    /// Equal-weight combination of an orthonormal basis of
    /// `ker(rho - mu A - z)`. For a degenerate eigenspace this is a
    /// convention; callers wanting another combination use [`new`](Self::new).
    pub fn from_eigenvalue(
        rho: &ComplexMatrix<T>,
        a: &ComplexMatrix<T>,
        mu: Complex<T>,
        z: Complex<T>,
    ) -> Result<Self> {
        rho.ensure_same_dim(a)?;
        let basis = general_eigvec(&lax_operator(rho, a, mu), z);
        let Some(first) = basis.first() else {
            return Err(Error::Precondition {
                check: "z is an eigenvalue of rho - mu A",
                detail: format!("z = {z}"),
            });
        };
        let sum = basis.iter().skip(1).fold(first.clone(), |acc, b| acc.add(b));
        Self::new(rho, a, mu, sum)
    }

    /// `||(rho - mu A - z) phi0||`.
    pub fn spatial_residual(&self, rho: &ComplexMatrix<T>, a: &ComplexMatrix<T>) -> T {
        spatial(rho, a, self.mu, self.z, &self.phi0)
    }
}

/// A Hermitian `rho` for which `phi` solves `(rho - mu A) phi = z phi` with
/// `z = r - mu <phi|A|phi>/<phi|phi>`. `b` fills the orthogonal complement
/// of `phi` (it is projected and Hermitized). Useful for generating valid
/// transformation data for arbitrary `A`.
pub fn seed_with_lax_vector<T: Real>(
    a: &ComplexMatrix<T>,
    phi: &ComplexVector<T>,
    mu: Complex<T>,
    r: T,
    b: &ComplexMatrix<T>,
) -> Result<(ComplexMatrix<T>, LaxEigenpair<T>)> {
    a.ensure_same_dim(b)?;
    let n = a.dim();
    if phi.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: phi.len(),
        });
    }
    let phi = phi.normalized();
    let expect_a = phi.inner(&a.mat_vec(&phi));
    let z = Complex::new(r, T::zero()) - mu * expect_a;
    // w = (rho) phi must equal z phi + mu A phi; <phi|w> = r is real.
    let w = phi.scale(z).add(&a.mat_vec(&phi).scale(mu));
    let pp = phi.outer(&phi);
    let q = &ComplexMatrix::identity(n) - &pp;
    let bh = b.hermitize();
    let rho = &(&(&w.outer(&phi) + &phi.outer(&w)) - &pp.scale_real(r)) + &(&(&q * &bh) * &q);
    let rho = rho.hermitize();
    let pair = LaxEigenpair::new(&rho, a, mu, phi)?;
    Ok((rho, pair))
}

fn lax_operator<T: Real>(rho: &ComplexMatrix<T>, a: &ComplexMatrix<T>, mu: Complex<T>) -> ComplexMatrix<T> {
    rho - &a.scale(mu)
}

fn spatial<T: Real>(
    rho: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
    mu: Complex<T>,
    z: Complex<T>,
    phi: &ComplexVector<T>,
) -> T {
    let lhs = lax_operator(rho, a, mu).mat_vec(phi);
    lhs.sub(&phi.scale(z)).norm()
}

/// Closed-form time dependence of a Lax solution, exact for both halves of
/// the pair (not merely up to normalization).
pub trait LaxPropagator<T: Real>: Send + Sync {
    fn pair(&self) -> &LaxEigenpair<T>;

    fn phi(&self, t: T) -> Result<ComplexVector<T>>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxResiduals<T> {
    /// `||(rho - mu A - z) phi|| / ||phi||`.
    pub spatial: T,
    /// `||i phi' - (sum_k A^{n-k} rho A^k - mu A^{n+1}) phi|| / ||phi||`,
    /// with `phi'` from a central difference of step `1e-5`.
    pub temporal: T,
}

/// Both Lax residuals at time `t`, for `rho_t` the state at `t`.
pub fn lax_residuals<T: Real>(
    fam: &EquationFamily<T>,
    rho_t: &ComplexMatrix<T>,
    propagator: Option<&dyn LaxPropagator<T>>,
    t: T,
) -> Result<LaxResiduals<T>> {
    let prop = propagator.ok_or(Error::NoPropagator)?;
    let pair = prop.pair();
    let a = fam.a().matrix();
    let phi = prop.phi(t)?;
    let norm = phi.norm();
    let spatial = spatial(rho_t, a, pair.mu, pair.z, &phi) / norm;
    let h = T::lit(1e-5);
    let dphi = prop
        .phi(t + h)?
        .sub(&prop.phi(t - h)?)
        .scale(Complex::new(T::zero(), T::one() / (h + h)));
    let gen = fam.lax_generator(rho_t, pair.mu)?;
    let temporal = dphi.sub(&gen.mat_vec(&phi)).norm() / norm;
    Ok(LaxResiduals { spatial, temporal })
}
