//! Reduction of the three-level `n = 1` flow to a scalar equation for
//! `W = |rho_12|^2` in the eigenbasis of `H`, Jacobi `sn`, and fits of `W`.

mod fit;
mod reduction;

pub use fit::{fit_w_equation, verify_k1_identification, K1Fit, K1Outcome, QuadFit, WFit, K1_TOLERANCE};
pub use reduction::{extract_w, off_diagonal_rhs, to_h_eigenbasis, EigenbasisTransform, WSeries};

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_AGM_STEPS: usize = 64;

fn check_modulus<T: Real>(k: T) -> Result<()> {
    if !(k >= T::zero() && k <= T::one()) {
        return Err(Error::ModulusOutOfRange(k.to_f64_lossy()));
    }
    Ok(())
}

/// Arithmetic-geometric mean of two nonnegative numbers.
pub fn agm<T: Real>(mut a: T, mut b: T) -> T {
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= T::epsilon() * a {
            break;
        }
        let next = (a + b) * T::lit(0.5);
        b = (a * b).sqrt();
        a = next;
    }
    a
}

/// Complete elliptic integral of the first kind, `K(k) = pi / (2 AGM(1, k'))`.
/// Infinite at `k = 1`.
pub fn complete_k<T: Real>(k: T) -> Result<T> {
    check_modulus(k)?;
    if k == T::one() {
        return Ok(T::infinity());
    }
    let kp = ((T::one() - k) * (T::one() + k)).sqrt();
    Ok(T::PI() / (agm(T::one(), kp) + agm(T::one(), kp)))
}

/// Incomplete elliptic integral of the first kind
/// `F(phi, k) = int_0^phi dtheta / sqrt(1 - k^2 sin^2 theta)` by composite
/// five-point Gauss-Legendre quadrature. Intended as a slow reference for
/// `k < 1` and `|phi| <= pi/2`.
pub fn incomplete_f<T: Real>(phi: T, k: T) -> Result<T> {
    check_modulus(k)?;
    const NODES: [(f64, f64); 5] = [
        (-0.906_179_845_938_663_9, 0.236_926_885_056_189_1),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_663_9, 0.236_926_885_056_189_1),
    ];
    let panels = 512;
    let h = phi / T::lit(panels as f64);
    let half = h * T::lit(0.5);
    let mut total = T::zero();
    for p in 0..panels {
        let mid = h * (T::lit(p as f64) + T::lit(0.5));
        for (x, w) in NODES {
            let s = (mid + half * T::lit(x)).sin();
            total += T::lit(w) * half / (T::one() - k * k * s * s).sqrt();
        }
    }
    Ok(total)
}

/// Jacobi `sn(u, k)` by descending Landen transformation (AGM scale).
/// `k` is the modulus; `sn(u, 0) = sin u` and `sn(u, 1) = tanh u`.
pub fn jacobi_sn<T: Real>(u: T, k: T) -> Result<T> {
    check_modulus(k)?;
    if !u.is_finite() {
        return Err(Error::InvalidArgument(format!("sn argument must be finite, got {u}")));
    }
    if k.is_zero() {
        return Ok(u.sin());
    }
    if k == T::one() {
        return Ok(u.tanh());
    }
    let mut a = vec![T::one()];
    let mut c = vec![k];
    let mut b = ((T::one() - k) * (T::one() + k)).sqrt();
    while c.last().copied().unwrap_or_else(T::zero).abs() > T::epsilon() && a.len() < MAX_AGM_STEPS {
        let an = *a.last().expect("nonempty");
        a.push((an + b) * T::lit(0.5));
        c.push((an - b) * T::lit(0.5));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = T::lit(2f64.powi(n as i32)) * a[n] * u;
    for j in (1..=n).rev() {
        phi = (phi + (c[j] / a[j] * phi.sin()).asin()) * T::lit(0.5);
    }
    Ok(phi.sin())
}
