//! Data behind the three-level figures: in-plane spin components and their
//! envelope at early and late times, and the two asymptotic oscillations of
//! `<J_z>`.

use crate::dynamics::{expectation, spin1_matrices, uniform_grid, ClosedForm, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{least_squares, ComplexMatrix, Hermitian};
use crate::scalar::Real;

/// Real-symmetric partners `K_x`, `K_y` of `J_x`, `J_y`: same nonzero slots,
/// entries 1 instead of `+-i`. `<J>^2 + <K>^2` is phase independent.
pub fn quadrature_partners<T: Real>() -> [Hermitian<T>; 2] {
    let kx = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]).expect("3x3");
    let ky = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]).expect("3x3");
    [kx, ky].map(|m| Hermitian::new(m).expect("symmetric"))
}

/// `sqrt(<Jx>^2 + <Jy>^2 + <Kx>^2 + <Ky>^2) = 2 sqrt(|rho_13|^2 + |rho_23|^2)`.
pub fn envelope<T: Real>(rho: &ComplexMatrix<T>) -> Result<T> {
    let [jx, jy, _] = spin1_matrices::<T>();
    let [kx, ky] = quadrature_partners::<T>();
    let mut s = T::zero();
    for o in [&jx, &jy, &kx, &ky] {
        let e = expectation(o, rho)?;
        s += e * e;
    }
    Ok(s.sqrt())
}

/// Samples `<Jx>`, `<Jy>`, `<Jz>` and the envelope on `[t0, t1]`.
pub fn spin_series<T: Real, S: ClosedForm<T> + ?Sized>(sol: &S, t0: T, t1: T, count: usize) -> Result<Trajectory<T>> {
    if sol.dim() != 3 {
        return Err(Error::DimensionMismatch {
            left: 3,
            right: sol.dim(),
        });
    }
    let grid = uniform_grid(t0, t1, count);
    let states = grid.iter().map(|t| sol.state(*t)).collect::<Result<Vec<_>>>()?;
    let mut traj = Trajectory::new(grid, states)?;
    let [jx, jy, jz] = spin1_matrices::<T>();
    traj.add_expectation("Jx", &jx)?;
    traj.add_expectation("Jy", &jy)?;
    traj.add_expectation("Jz", &jz)?;
    let env = traj.states().iter().map(envelope).collect::<Result<Vec<_>>>()?;
    traj.add_series("envelope", env)?;
    Ok(traj)
}

pub fn is_monotone<T: Real>(values: &[T], increasing: bool) -> bool {
    values
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

/// Envelope comparison of an early and a late window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeComparison<T> {
    pub early_max: T,
    pub late_max: T,
    /// `log10(late_max / early_max)`.
    pub log10_ratio: T,
    pub late_decreasing: bool,
    pub early_increasing: bool,
}

/// Compares the envelope on `late = [t0, t1]` with `early = [t0, t1]`.
pub fn amplitude_comparison<T: Real, S: ClosedForm<T> + ?Sized>(
    sol: &S,
    late: (T, T),
    early: (T, T),
    count: usize,
) -> Result<AmplitudeComparison<T>> {
    let l = spin_series(sol, late.0, late.1, count)?;
    let e = spin_series(sol, early.0, early.1, count)?;
    let le = l.observable("envelope").expect("added above");
    let ee = e.observable("envelope").expect("added above");
    let late_max = le.iter().copied().fold(T::zero(), T::max);
    let early_max = ee.iter().copied().fold(T::zero(), T::max);
    Ok(AmplitudeComparison {
        early_max,
        late_max,
        log10_ratio: (late_max / early_max).log10(),
        late_decreasing: is_monotone(le, false),
        early_increasing: is_monotone(ee, true),
    })
}

/// `y(t) = offset + a cos(w t) + b sin(w t)`, all four fitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidFit<T> {
    pub offset: T,
    pub cos: T,
    pub sin: T,
    pub omega: T,
    /// Standard errors of `(offset, cos, sin, omega)` from `(J^T J)^{-1} s^2`.
    pub stderr: [T; 4],
    pub rms: T,
    pub max_abs: T,
}

impl<T: Real> SinusoidFit<T> {
    pub fn params(&self) -> [T; 4] {
        [self.offset, self.cos, self.sin, self.omega]
    }

    pub fn eval(&self, t: T) -> T {
        self.offset + self.cos * (self.omega * t).cos() + self.sin * (self.omega * t).sin()
    }

    /// Largest `|p_i - q_i| / sqrt(se_i^2 + se_i'^2)` over the parameters.
    pub fn separation(&self, other: &Self) -> T {
        let (p, q) = (self.params(), other.params());
        (0..4)
            .map(|i| {
                let se = (self.stderr[i] * self.stderr[i] + other.stderr[i] * other.stderr[i]).sqrt();
                (p[i] - q[i]).abs() / se.max(T::min_positive_value())
            })
            .fold(T::zero(), T::max)
    }
}

fn linear_part<T: Real>(t: &[T], y: &[T], omega: T) -> Option<(T, T, T, T)> {
    let rows: Vec<Vec<T>> = t
        .iter()
        .map(|x| vec![T::one(), (omega * *x).cos(), (omega * *x).sin()])
        .collect();
    let ls = least_squares(&rows, y)?;
    Some((ls.coef[0], ls.coef[1], ls.coef[2], ls.residual_norm))
}

/// Frequency guess from mean crossings, refined by golden-section search on
/// the residual of the linear sub-problem, then standard errors from the
/// full four-parameter Jacobian.
pub fn fit_sinusoid<T: Real>(t: &[T], y: &[T]) -> Result<SinusoidFit<T>> {
    let n = t.len();
    if n < 8 || y.len() != n {
        return Err(Error::InvalidArgument(
            "sinusoid fit needs at least 8 paired samples".into(),
        ));
    }
    let mean = y.iter().copied().fold(T::zero(), |a, b| a + b) / T::lit(n as f64);
    let crossings = y
        .windows(2)
        .filter(|w| (w[0] - mean) * (w[1] - mean) < T::zero())
        .count();
    if crossings < 2 {
        return Err(Error::FitNonConvergence(
            "signal does not oscillate in the window".into(),
        ));
    }
    let span = t[n - 1] - t[0];
    let guess = T::PI() * T::lit(crossings as f64) / span;
    let rss = |w: T| linear_part(t, y, w).map_or(T::infinity(), |p| p.3);
    let (mut lo, mut hi) = (guess * T::lit(0.8), guess * T::lit(1.2));
    let g = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (rss(x1), rss(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = rss(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = rss(x2);
        }
        if hi - lo <= T::epsilon() * T::lit(16.0) * hi {
            break;
        }
    }
    let omega = (lo + hi) * T::lit(0.5);
    let (offset, a, b, _) =
        linear_part(t, y, omega).ok_or_else(|| Error::FitNonConvergence("rank-deficient design".into()))?;
    let resid: Vec<T> = t
        .iter()
        .zip(y)
        .map(|(x, v)| *v - (offset + a * (omega * *x).cos() + b * (omega * *x).sin()))
        .collect();
    let ss = resid.iter().fold(T::zero(), |acc, r| acc + *r * *r);
    let rms = (ss / T::lit(n as f64)).sqrt();
    let max_abs = resid.iter().fold(T::zero(), |m, r| m.max(r.abs()));
    let jac: Vec<Vec<T>> = t
        .iter()
        .map(|x| {
            let (c, s) = ((omega * *x).cos(), (omega * *x).sin());
            vec![T::one(), c, s, *x * (b * c - a * s)]
        })
        .collect();
    let ls = least_squares(&jac, &resid).ok_or_else(|| Error::FitNonConvergence("singular Jacobian".into()))?;
    let sigma2 = ss / T::lit((n - 4) as f64);
    let stderr = [0, 1, 2, 3].map(|i| (ls.inverse_normal[i][i] * sigma2).sqrt());
    Ok(SinusoidFit {
        offset,
        cos: a,
        sin: b,
        omega,
        stderr,
        rms,
        max_abs,
    })
}

/// `<Jz>` on `[-t_max, t_max]` with the two asymptotic fits taken on
/// `[t_fit, t_max]` and `[-t_max, -t_fit]`.
#[derive(Debug, Clone)]
pub struct Scattering<T> {
    pub series: Trajectory<T>,
    pub future: SinusoidFit<T>,
    pub past: SinusoidFit<T>,
}

pub fn scattering_fits<T: Real, S: ClosedForm<T> + ?Sized>(
    sol: &S,
    t_fit: T,
    t_max: T,
    dt: T,
) -> Result<Scattering<T>> {
    let count = ((t_max + t_max) / dt).round().to_usize().unwrap_or(0) + 1;
    let mut series = spin_series(sol, -t_max, t_max, count)?;
    let times = series.times().to_vec();
    let jz = series.observable("Jz").expect("added").to_vec();
    let window = |keep: &dyn Fn(T) -> bool| -> (Vec<T>, Vec<T>) {
        times
            .iter()
            .zip(&jz)
            .filter(|(t, _)| keep(**t))
            .map(|(t, y)| (*t, *y))
            .unzip()
    };
    let (tf, yf) = window(&|t| t >= t_fit);
    let (tp, yp) = window(&|t| t <= -t_fit);
    let future = fit_sinusoid(&tf, &yf)?;
    let past = fit_sinusoid(&tp, &yp)?;
    let fut_col = times.iter().map(|t| future.eval(*t)).collect();
    let past_col = times.iter().map(|t| past.eval(*t)).collect();
    series.add_series("Jz_fit_future", fut_col)?;
    series.add_series("Jz_fit_past", past_col)?;
    Ok(Scattering { series, future, past })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn envelope_is_off_diagonal_weight() {
        let rho = ComplexMatrix::<f64>::from_rows(vec![
            vec![c(0.2, 0.0), c(0.1, 0.0), c(0.03, -0.04)],
            vec![c(0.1, 0.0), c(0.3, 0.0), c(0.0, 0.12)],
            vec![c(0.03, 0.04), c(0.0, -0.12), c(0.5, 0.0)],
        ])
        .unwrap();
        let want = 2.0 * (0.05f64.powi(2) + 0.12f64.powi(2)).sqrt();
        assert!((envelope(&rho).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn sinusoid_recovery() {
        let t = uniform_grid(0.0f64, 10.0, 1001);
        let y: Vec<f64> = t
            .iter()
            .map(|x| 0.1 + 0.4 * (1.3 * x).cos() - 0.2 * (1.3 * x).sin())
            .collect();
        let f = fit_sinusoid(&t, &y).unwrap();
        assert!((f.omega - 1.3).abs() < 1e-9);
        assert!((f.offset - 0.1).abs() < 1e-9 && (f.cos - 0.4).abs() < 1e-8 && (f.sin + 0.2).abs() < 1e-8);
        assert!(f.rms < 1e-9);
    }

    #[test]
    fn monotone_checks() {
        assert!(is_monotone(&[1.0, 2.0, 3.0], true));
        assert!(!is_monotone(&[1.0, 1.0], true));
        assert!(is_monotone(&[3.0, 2.0], false));
    }
}
