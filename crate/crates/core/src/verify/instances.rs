//! Randomized but reproducible problem instances.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{ClosedForm, DirectSum, EquationFamily, Stationary};
use crate::error::{Error, Result};
use crate::laxdarboux::{seed_with_lax_vector, DarbouxConfig, LaxEigenpair, Rescaled, Shifted, ShiftedRescaled};
use crate::linalg::{direct_sum, eigenspaces, ComplexMatrix, ComplexVector, Hermitian};
use crate::seeds::{example3x3, example8x8, Strategy2Seed, Strategy2Solution};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in `[-scale, scale]` (real and imaginary parts), then
/// Hermitized.
pub fn random_hermitian(rng: &mut Rng64, n: usize, scale: f64) -> ComplexMatrix<f64> {
    let m = ComplexMatrix::from_fn(n, |_, _| {
        Complex::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
    });
    m.hermitize()
}

pub fn random_vector(rng: &mut Rng64, n: usize) -> ComplexVector<f64> {
    ComplexVector::from_vec(
        (0..n)
            .map(|_| Complex::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect(),
    )
}

pub fn random_real_diag(rng: &mut Rng64, n: usize, scale: f64) -> ComplexMatrix<f64> {
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-scale..=scale)).collect();
    ComplexMatrix::from_real_diag(&d)
}

/// Spectral parameter with `|Im mu|` in `[0.3, 1.5]`.
pub fn random_mu(rng: &mut Rng64) -> Complex<f64> {
    let im = rng.gen_range(0.3..=1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Complex::new(rng.gen_range(-1.0..=1.0), im)
}

/// Data for one Hermitian-mode transformation.
#[derive(Debug, Clone)]
pub struct Theorem1Instance {
    pub rho: ComplexMatrix<f64>,
    pub a: ComplexMatrix<f64>,
    pub pair: LaxEigenpair<f64>,
    pub cfg: DarbouxConfig<f64>,
}

/// Random `A`, `phi`, `mu` of dimension 2..=6 and a Hermitian `rho` built so
/// that `phi` is a Lax eigenvector.
pub fn random_theorem1_instance(rng: &mut Rng64) -> Result<Theorem1Instance> {
    let n = rng.gen_range(2..=6);
    let a = random_hermitian(rng, n, 1.0);
    let phi = random_vector(rng, n);
    let mu = random_mu(rng);
    let b = random_hermitian(rng, n, 1.0);
    let r = rng.gen_range(-1.0..=1.0);
    let (rho, pair) = seed_with_lax_vector(&a, &phi, mu, r, &b)?;
    Ok(Theorem1Instance {
        rho,
        a,
        pair,
        cfg: DarbouxConfig::hermitian(mu),
    })
}

pub type BoxedSolution = Box<dyn ClosedForm<f64>>;

/// A shifted and rescaled solution of the family of index `n` together with
/// the family it must satisfy.
pub struct Theorem2Case {
    pub family: EquationFamily<f64>,
    pub x: Hermitian<f64>,
    pub y: f64,
    pub solution: ShiftedRescaled<BoxedSolution, f64>,
}

/// Block-diagonal cases: for `n = 1` the two dressed examples plus a
/// stationary diagonal block; for `n = 2` an eight-level dressing of the
/// anticommuting seed with random `mu` plus a stationary block. `X` is a
/// random scalar on each dressed block and a random diagonal on the
/// stationary block, so it commutes with `A` and with the solution.
pub fn theorem2_case(rng: &mut Rng64, n: u32, y: f64) -> Result<Theorem2Case> {
    let k = 2;
    let a_stat = random_real_diag(rng, k, 1.0);
    let d_stat = random_real_diag(rng, k, 1.0);
    let x_stat = random_real_diag(rng, k, 1.0);
    let ex8 = example8x8::<f64>()?;
    let (a, base, x_dressed): (ComplexMatrix<f64>, BoxedSolution, ComplexMatrix<f64>) = match n {
        1 => {
            let ex3 = example3x3::<f64>();
            let a = direct_sum(ex3.h.matrix(), ex8.h.matrix());
            let x = direct_sum(
                &ComplexMatrix::identity(3).scale_real(rng.gen_range(-1.0..=1.0)),
                &ComplexMatrix::identity(8).scale_real(rng.gen_range(-1.0..=1.0)),
            );
            (a, Box::new(DirectSum(ex3.solution()?, ex8.solution()?)), x)
        }
        2 => {
            let sol = even_eight_level(rng, &ex8)?;
            let x = ComplexMatrix::identity(8).scale_real(rng.gen_range(-1.0..=1.0));
            (ex8.h.matrix().clone(), Box::new(sol), x)
        }
        _ => return Err(Error::InvalidArgument(format!("no randomized case for n = {n}"))),
    };
    let a = Hermitian::new(direct_sum(&a, &a_stat))?;
    let family = EquationFamily::new(n, a);
    let x = Hermitian::new(direct_sum(&x_dressed, &x_stat))?;
    let base: BoxedSolution = Box::new(DirectSum(base, Stationary(d_stat)));
    let shifted = Shifted::new(base, &x, &family)?;
    Ok(Theorem2Case {
        solution: Rescaled::new(shifted, y)?,
        family,
        x,
        y,
    })
}

/// Dressing of the anticommuting eight-level seed for `n = 2`, using a Lax
/// eigenvalue `z` away from 0 so that the propagator is nontrivial.
pub fn even_eight_level(rng: &mut Rng64, ex8: &crate::seeds::Example8x8<f64>) -> Result<Strategy2Solution<f64>> {
    let seed = Strategy2Seed::new(ex8.h.clone(), ex8.xi.clone(), 2)?;
    for _ in 0..32 {
        let mu = random_mu(rng);
        let lax = ex8.xi.matrix() - &ex8.h.scale(mu);
        let spaces = eigenspaces(&lax, 1e-8)?;
        let Some(space) = spaces.iter().find(|s| s.value.norm() > 0.1 && !s.basis.is_empty()) else {
            continue;
        };
        let pair = LaxEigenpair::from_eigenvalue(ex8.xi.matrix(), ex8.h.matrix(), mu, space.value)?;
        let sol = Strategy2Solution::new(seed.clone(), mu, pair.phi0)?;
        if !sol.is_trivial()? {
            return Ok(sol);
        }
    }
    Err(Error::Precondition {
        check: "nontrivial even-n dressing",
        detail: "no suitable spectral parameter found".into(),
    })
}
