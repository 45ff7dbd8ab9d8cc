use super::{casimirs, rhs_family, EquationFamily, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::tolerance::tol;

/// RK4 output plus the final-state drift of `Tr rho, Tr rho^2, Tr rho^3`.
#[derive(Debug, Clone)]
pub struct Integration<T> {
    pub trajectory: Trajectory<T>,
    pub casimir_drift: Vec<T>,
    /// Largest drift seen at any step, per Casimir.
    pub max_casimir_drift: Vec<T>,
}

/// Classic fixed-step RK4 for the family equation.
///
/// The step count is `ceil((t1 - t0) / dt)` with the step shrunk uniformly
/// so the grid lands on `t1`. After every full step the state is replaced
/// by its Hermitian part `(M + M^dagger) / 2`. Every step is stored.
pub fn integrate_rk4<T: Real>(
    fam: &EquationFamily<T>,
    rho0: &ComplexMatrix<T>,
    t0: T,
    t1: T,
    dt: T,
) -> Result<Integration<T>> {
    if !(dt > T::zero()) || !(t1 > t0) {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and t1 > t0 (dt={dt}, t0={t0}, t1={t1})"
        )));
    }
    fam.a().ensure_same_dim(rho0)?;
    rho0.check_finite()?;
    let steps = ((t1 - t0) / dt - T::lit(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
    let h = (t1 - t0) / T::lit(steps as f64);
    let half = h * T::lit(0.5);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let blowup = T::lit(tol::<T>(|t| t.blowup).to_f64_lossy());

    let c0 = casimirs(rho0, 3)?;
    let mut max_drift = vec![T::zero(); 3];
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut rho = rho0.hermitize();
    times.push(t0);
    states.push(rho.clone());
    for k in 1..=steps {
        let k1 = rhs_family(fam, &rho)?;
        let k2 = rhs_family(fam, &(&rho + &k1.scale_real(half)))?;
        let k3 = rhs_family(fam, &(&rho + &k2.scale_real(half)))?;
        let k4 = rhs_family(fam, &(&rho + &k3.scale_real(h)))?;
        let incr = &(&k1 + &k2.scale_real(two)) + &(&k3.scale_real(two) + &k4);
        rho = (&rho + &incr.scale_real(sixth)).hermitize();
        let t = if k == steps { t1 } else { t0 + h * T::lit(k as f64) };
        let mag = rho.max_norm();
        if !(mag <= blowup) {
            return Err(Error::BlowUp {
                t: t.to_f64_lossy(),
                magnitude: mag.to_f64_lossy(),
            });
        }
        let c = casimirs(&rho, 3)?;
        for (m, (a, b)) in max_drift.iter_mut().zip(c.iter().zip(&c0)) {
            *m = m.max((*a - *b).abs());
        }
        times.push(t);
        states.push(rho.clone());
    }
    let c_end = casimirs(&rho, 3)?;
    let casimir_drift = c_end.iter().zip(&c0).map(|(a, b)| (*a - *b).abs()).collect();
    Ok(Integration {
        trajectory: Trajectory::new(times, states)?,
        casimir_drift,
        max_casimir_drift: max_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Hermitian;
    use crate::scalar::c;

    #[test]
    fn commuting_initial_state_stays_put() {
        let a = Hermitian::new(ComplexMatrix::from_real_diag(&[0.5, -1.0, 2.0])).unwrap();
        let fam = EquationFamily::new(2, a);
        let rho0 = ComplexMatrix::from_real_diag(&[0.1, 0.6, 0.3]);
        let out = integrate_rk4(&fam, &rho0, 0.0, 1.0, 1e-2).unwrap();
        for s in out.trajectory.states() {
            assert!(s.max_diff(&rho0) < 1e-12);
        }
        assert_eq!(out.trajectory.len(), 101);
        assert_eq!(*out.trajectory.times().last().unwrap(), 1.0);
    }

    #[test]
    fn bad_grid_rejected() {
        let a = Hermitian::new(ComplexMatrix::<f64>::identity(2)).unwrap();
        let fam = EquationFamily::new(1, a);
        let rho0 = ComplexMatrix::identity(2);
        assert!(integrate_rk4(&fam, &rho0, 0.0, 1.0, 0.0).is_err());
        assert!(integrate_rk4(&fam, &rho0, 1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn blowup_is_reported() {
        // A huge state makes the quadratic flow leave the 1e6 box.
        let a = Hermitian::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()).unwrap();
        let fam = EquationFamily::new(1, a);
        let rho0 = ComplexMatrix::from_fn(2, |i, j| if i == j { c(2e6, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(
            integrate_rk4(&fam, &rho0, 0.0, 1.0, 0.1),
            Err(Error::BlowUp { .. })
        ));
    }
}
