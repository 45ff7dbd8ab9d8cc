//! Seed solutions and their closed-form Darboux dressings: the `Delta_a`
//! construction for a Hamiltonian flow, anticommuting stationary seeds, and
//! the two worked examples.

mod examples;
mod spectral;
mod strategy1;
mod strategy2;

pub use examples::{example3x3, example8x8, published_8x8, Example3x3, Example8x8};
pub use strategy1::{dressed_strategy1, SeedFlow, Strategy1Lax, Strategy1Seed, Strategy1Solution};
pub use strategy2::{
    dressed_strategy2, propagate_phi_even, propagate_phi_odd, Strategy2Lax, Strategy2Seed, Strategy2Solution,
};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Roots of `x^2 - a x - x0 = 0`, `plus >= minus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticRoots<T> {
    pub plus: T,
    pub minus: T,
    /// Zero discriminant: a double root.
    pub degenerate: bool,
}

/// Solves `x^2 - a x = x0`, used to build diagonal seeds with a prescribed
/// `xi0^2 - a xi0`.
pub fn solve_quadratic_diag<T: Real>(a: T, x0: T) -> Result<QuadraticRoots<T>> {
    let disc = a * a + T::lit(4.0) * x0;
    if disc < T::zero() {
        return Err(Error::NegativeDiscriminant {
            discriminant: disc.to_f64_lossy(),
        });
    }
    let half = T::lit(0.5);
    let root = disc.sqrt() * half;
    Ok(QuadraticRoots {
        plus: a * half + root,
        minus: a * half - root,
        degenerate: disc.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_cases() {
        let r = solve_quadratic_diag(1.0f64, 0.25).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.plus - (0.5 + s2 / 2.0)).abs() < 1e-15);
        assert!((r.minus - (0.5 - s2 / 2.0)).abs() < 1e-15);
        assert!(!r.degenerate);
        let r = solve_quadratic_diag(0.0f64, 0.0).unwrap();
        assert_eq!((r.plus, r.minus, r.degenerate), (0.0, 0.0, true));
        let r = solve_quadratic_diag(2.0f64, -1.0).unwrap();
        assert_eq!((r.plus, r.minus, r.degenerate), (1.0, 1.0, true));
        assert!(matches!(
            solve_quadratic_diag(0.0f64, -1.0),
            Err(Error::NegativeDiscriminant { .. })
        ));
    }
}
