use super::reduction::WSeries;
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::scalar::Real;

/// Least-squares coefficients of `W'' = a W^2 + b W + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadFit<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    /// Max-norm misfit of `W'' - (a W^2 + b W + c)` over the fitted points.
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WFit<T> {
    Fit(QuadFit<T>),
    /// `W` is (numerically) constant, so `a`, `b`, `c` are not identifiable.
    Degenerate,
}

fn is_constant<T: Real>(w: &[T]) -> bool {
    let lo = w.iter().copied().fold(T::infinity(), T::min);
    let hi = w.iter().copied().fold(T::neg_infinity(), T::max);
    hi - lo <= T::lit(1e-12) * T::one().max(hi.abs())
}

fn uniform_step<T: Real>(times: &[T]) -> Result<T> {
    let dt = times[1] - times[0];
    for pair in times.windows(2) {
        if ((pair[1] - pair[0]) - dt).abs() > T::lit(1e-6) * dt {
            return Err(Error::InvalidArgument("W samples must lie on a uniform grid".into()));
        }
    }
    Ok(dt)
}

/// `W''` from the five-point central stencil on interior points, then a
/// linear least-squares fit of `a W^2 + b W + c`.
pub fn fit_w_equation<T: Real>(series: &WSeries<T>) -> Result<WFit<T>> {
    let n = series.len();
    if n < 7 {
        return Err(Error::InvalidArgument(format!("need at least 7 samples, got {n}")));
    }
    let dt = uniform_step(&series.times)?;
    let w = &series.w;
    if is_constant(w) {
        return Ok(WFit::Degenerate);
    }
    let denom = T::lit(12.0) * dt * dt;
    let mut rows = Vec::with_capacity(n - 4);
    let mut rhs = Vec::with_capacity(n - 4);
    for i in 2..n - 2 {
        let d2 =
            (-w[i - 2] + T::lit(16.0) * w[i - 1] - T::lit(30.0) * w[i] + T::lit(16.0) * w[i + 1] - w[i + 2]) / denom;
        rows.push(vec![w[i] * w[i], w[i], T::one()]);
        rhs.push(d2);
    }
    let Some(ls) = least_squares(&rows, &rhs) else {
        return Ok(WFit::Degenerate);
    };
    let (a, b, c) = (ls.coef[0], ls.coef[1], ls.coef[2]);
    let residual = rows
        .iter()
        .zip(&rhs)
        .map(|(r, y)| (*y - (a * r[0] + b * r[1] + c)).abs())
        .fold(T::zero(), T::max);
    Ok(WFit::Fit(QuadFit { a, b, c, residual }))
}

/// Pass threshold on the max misfit of the `k = 1` fit.
pub const K1_TOLERANCE: f64 = 1e-6;

/// `W(t) = beta^{-1} tanh^2(alpha (t - t0)) + gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct K1Fit<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub t0: T,
    pub misfit: T,
    pub pass: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum K1Outcome<T> {
    Fit(K1Fit<T>),
    Degenerate,
}

const MAX_LM_ITERATIONS: usize = 500;

/// Model values and Jacobian columns for `(amp, alpha, t0, gamma)`.
fn model<T: Real>(p: &[T; 4], t: T) -> (T, [T; 4]) {
    let [amp, alpha, t0, gamma] = *p;
    let x = t - t0;
    let s = (alpha * x).tanh();
    let sech2 = T::one() - s * s;
    let two = T::lit(2.0);
    let value = amp * s * s + gamma;
    let grad = [
        s * s,
        two * amp * s * sech2 * x,
        -two * amp * s * sech2 * alpha,
        T::one(),
    ];
    (value, grad)
}

fn cost<T: Real>(p: &[T; 4], series: &WSeries<T>) -> T {
    series
        .times
        .iter()
        .zip(&series.w)
        .map(|(t, w)| {
            let r = *w - model(p, *t).0;
            r * r
        })
        .fold(T::zero(), |a, b| a + b)
}

fn initial_guess<T: Real>(series: &WSeries<T>) -> Option<[T; 4]> {
    let (t, w) = (&series.times, &series.w);
    let n = w.len();
    let edge = (w[0] + w[n - 1]) * T::lit(0.5);
    let k0 = (0..n)
        .max_by(|a, b| {
            (w[*a] - edge)
                .abs()
                .partial_cmp(&(w[*b] - edge).abs())
                .expect("finite W")
        })
        .expect("nonempty");
    let gamma = w[k0];
    let amp = edge - gamma;
    if amp.is_zero() {
        return None;
    }
    let half = amp.abs() * T::lit(0.5);
    let hit = |i: &usize| (w[*i] - gamma).abs() >= half;
    let i = (k0..n).find(hit).or_else(|| (0..=k0).rev().find(hit))?;
    let d = (t[i] - t[k0]).abs();
    // tanh^2(x) = 1/2 at x = atanh(1/sqrt 2).
    let alpha = T::lit(0.881_373_587_019_543) / d.max(T::epsilon());
    Some([amp, alpha, t[k0], gamma])
}

/// Nonlinear least-squares fit of the `k = 1` form (Levenberg-Marquardt).
/// Passes iff the max misfit is at most [`K1_TOLERANCE`].
pub fn verify_k1_identification<T: Real>(series: &WSeries<T>) -> Result<K1Outcome<T>> {
    if series.len() < 5 {
        return Err(Error::InvalidArgument("need at least 5 samples".into()));
    }
    if is_constant(&series.w) {
        return Ok(K1Outcome::Degenerate);
    }
    let Some(mut p) = initial_guess(series) else {
        return Ok(K1Outcome::Degenerate);
    };
    let mut current = cost(&p, series);
    let mut lambda = T::lit(1e-3);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_LM_ITERATIONS {
        iterations += 1;
        let mut jac = Vec::with_capacity(series.len());
        let mut res = Vec::with_capacity(series.len());
        for (t, w) in series.times.iter().zip(&series.w) {
            let (v, g) = model(&p, *t);
            jac.push(g);
            res.push(*w - v);
        }
        let mut diag = [T::zero(); 4];
        for g in &jac {
            for (d, x) in diag.iter_mut().zip(g) {
                *d += *x * *x;
            }
        }
        let damp = lambda.sqrt();
        let mut rows: Vec<Vec<T>> = jac.iter().map(|g| g.to_vec()).collect();
        let mut rhs = res.clone();
        for (k, d) in diag.iter().enumerate() {
            let mut row = vec![T::zero(); 4];
            row[k] = damp * d.max(T::epsilon()).sqrt();
            rows.push(row);
            rhs.push(T::zero());
        }
        let Some(step) = least_squares(&rows, &rhs) else {
            return Err(Error::FitNonConvergence("singular Levenberg-Marquardt step".into()));
        };
        let mut trial = p;
        for (x, d) in trial.iter_mut().zip(&step.coef) {
            *x += *d;
        }
        let trial_cost = cost(&trial, series);
        if trial_cost.is_finite() && trial_cost < current {
            let rel_cost = (current - trial_cost) / current.max(T::min_positive_value());
            let rel_step = step
                .coef
                .iter()
                .zip(&trial)
                .map(|(d, x)| d.abs() / T::one().max(x.abs()))
                .fold(T::zero(), T::max);
            p = trial;
            current = trial_cost;
            lambda = (lambda / T::lit(3.0)).max(T::lit(1e-12));
            if rel_cost < T::lit(1e-12) && rel_step < T::lit(1e-10) {
                converged = true;
                break;
            }
        } else {
            lambda *= T::lit(4.0);
            if lambda > T::lit(1e12) {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::FitNonConvergence(format!(
            "no convergence in {MAX_LM_ITERATIONS} iterations"
        )));
    }
    let misfit = series
        .times
        .iter()
        .zip(&series.w)
        .map(|(t, w)| (*w - model(&p, *t).0).abs())
        .fold(T::zero(), T::max);
    let [amp, alpha, t0, gamma] = p;
    Ok(K1Outcome::Fit(K1Fit {
        alpha: alpha.abs(),
        beta: T::one() / amp,
        gamma,
        t0,
        misfit,
        pass: misfit <= T::lit(K1_TOLERANCE),
        iterations,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::uniform_grid;

    fn series(f: impl Fn(f64) -> f64, t0: f64, t1: f64, n: usize) -> WSeries<f64> {
        let t = uniform_grid(t0, t1, n);
        let w = t.iter().map(|x| f(*x)).collect();
        WSeries::new(t, w).unwrap()
    }

    #[test]
    fn constant_is_degenerate() {
        let s = series(|_| 0.25, 0.0, 1.0, 20);
        assert_eq!(fit_w_equation(&s).unwrap(), WFit::Degenerate);
        assert_eq!(verify_k1_identification(&s).unwrap(), K1Outcome::Degenerate);
    }

    #[test]
    fn too_few_samples() {
        let s = series(|x| x * x, 0.0, 1.0, 6);
        assert!(fit_w_equation(&s).is_err());
    }

    #[test]
    fn non_uniform_grid_rejected() {
        let s = WSeries::new(vec![0.0, 0.1, 0.2, 0.35, 0.4, 0.5, 0.6, 0.7], vec![0.0; 8]).unwrap();
        assert!(fit_w_equation(&s).is_err());
    }

    #[test]
    fn shifted_tanh_recovered() {
        let s = series(|x| 0.3 * (1.7 * (x - 0.4)).tanh().powi(2) + 0.05, -6.0, 6.0, 1201);
        match verify_k1_identification(&s).unwrap() {
            K1Outcome::Fit(f) => {
                assert!(f.pass, "{f:?}");
                assert!((f.alpha - 1.7).abs() < 1e-8);
                assert!((f.beta - 1.0 / 0.3).abs() < 1e-7);
                assert!((f.t0 - 0.4).abs() < 1e-8);
                assert!((f.gamma - 0.05).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }
}
