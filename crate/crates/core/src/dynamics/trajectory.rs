use std::io::Write;

use rayon::prelude::*;

use super::{expectation, rhs_family, EquationFamily};
use crate::error::{Error, Result};
use crate::linalg::{direct_sum, ComplexMatrix};
use crate::scalar::Real;

/// Sampled solution: strictly increasing times, same-dimension states, and
/// any number of named scalar series.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    times: Vec<T>,
    states: Vec<ComplexMatrix<T>>,
    observables: Vec<(String, Vec<T>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvMode {
    /// `t,<obs1>,<obs2>,...`
    Observables,
    /// `t,re_1_1,im_1_1,re_1_2,...` in row-major order, 1-based indices.
    FullMatrix,
}

impl<T: Real> Trajectory<T> {
    pub fn new(times: Vec<T>, states: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "{} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if let Some(w) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(format!(
                "times not strictly increasing at index {}",
                w + 1
            )));
        }
        if let Some(first) = states.first() {
            for s in &states {
                first.ensure_same_dim(s)?;
            }
        }
        Ok(Self {
            times,
            states,
            observables: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[ComplexMatrix<T>] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.dim())
    }

    pub fn observables(&self) -> &[(String, Vec<T>)] {
        &self.observables
    }

    pub fn observable(&self, name: &str) -> Option<&[T]> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Appends `Re Tr(obs rho(t))` as a named series.
    pub fn add_expectation(&mut self, name: &str, obs: &ComplexMatrix<T>) -> Result<()> {
        let series = self
            .states
            .iter()
            .map(|s| expectation(obs, s))
            .collect::<Result<Vec<_>>>()?;
        self.observables.push((name.to_string(), series));
        Ok(())
    }

    pub fn add_series(&mut self, name: &str, values: Vec<T>) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::InvalidArgument(format!("series `{name}` has wrong length")));
        }
        self.observables.push((name.to_string(), values));
        Ok(())
    }

    /// Applies `f` to every state, keeping the time grid.
    pub fn map_states(&self, f: impl Fn(T, &ComplexMatrix<T>) -> Result<ComplexMatrix<T>>) -> Result<Self> {
        let states = self
            .times
            .iter()
            .zip(&self.states)
            .map(|(t, s)| f(*t, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.times.clone(), states)
    }

    /// CSV with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W, mode: CsvMode) -> Result<()> {
        let d = self.dim();
        let mut header = vec!["t".to_string()];
        match mode {
            CsvMode::Observables => header.extend(self.observables.iter().map(|(n, _)| n.clone())),
            CsvMode::FullMatrix => {
                for i in 1..=d {
                    for j in 1..=d {
                        header.push(format!("re_{i}_{j}"));
                        header.push(format!("im_{i}_{j}"));
                    }
                }
            }
        }
        writeln!(out, "{}", header.join(","))?;
        for (k, t) in self.times.iter().enumerate() {
            let mut row = vec![fmt17(*t)];
            match mode {
                CsvMode::Observables => row.extend(self.observables.iter().map(|(_, v)| fmt17(v[k]))),
                CsvMode::FullMatrix => {
                    for z in self.states[k].as_slice() {
                        row.push(fmt17(z.re));
                        row.push(fmt17(z.im));
                    }
                }
            }
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn fmt17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

/// A solution known in closed form, evaluable at any time.
pub trait ClosedForm<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn state(&self, t: T) -> Result<ComplexMatrix<T>>;

    /// Evaluates the closed form on `times`, in parallel.
    fn sample(&self, times: &[T]) -> Result<Trajectory<T>> {
        let states = times.par_iter().map(|t| self.state(*t)).collect::<Result<Vec<_>>>()?;
        Trajectory::new(times.to_vec(), states)
    }
}

impl<T: Real, S: ClosedForm<T> + ?Sized> ClosedForm<T> for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        (**self).state(t)
    }
}

impl<T: Real, S: ClosedForm<T> + ?Sized> ClosedForm<T> for Box<S> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        (**self).state(t)
    }
}

impl<T: Real, S: ClosedForm<T> + ?Sized> ClosedForm<T> for std::sync::Arc<S> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        (**self).state(t)
    }
}

/// A constant solution, e.g. a state commuting with every `A^k`.
#[derive(Debug, Clone)]
pub struct Stationary<T>(pub ComplexMatrix<T>);

impl<T: Real> ClosedForm<T> for Stationary<T> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn state(&self, _t: T) -> Result<ComplexMatrix<T>> {
        Ok(self.0.clone())
    }
}

/// Block-diagonal combination of two solutions; it solves the family
/// equation for the block-diagonal `A (+) A'`.
#[derive(Debug, Clone)]
pub struct DirectSum<A, B>(pub A, pub B);

impl<T: Real, A: ClosedForm<T>, B: ClosedForm<T>> ClosedForm<T> for DirectSum<A, B> {
    fn dim(&self) -> usize {
        self.0.dim() + self.1.dim()
    }
    fn state(&self, t: T) -> Result<ComplexMatrix<T>> {
        Ok(direct_sum(&self.0.state(t)?, &self.1.state(t)?))
    }
}

/// `count` equally spaced points on `[t0, t1]`.
pub fn uniform_grid<T: Real>(t0: T, t1: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![t0],
        _ => {
            let step = (t1 - t0) / T::lit((count - 1) as f64);
            (0..count)
                .map(|k| {
                    if k + 1 == count {
                        t1
                    } else {
                        t0 + step * T::lit(k as f64)
                    }
                })
                .collect()
        }
    }
}

/// `max_t || (S(t+h) - S(t-h)) / 2h - rhs_family(S(t)) ||_max` over `times`.
pub fn equation_residual<T: Real, S: ClosedForm<T> + ?Sized>(
    fam: &EquationFamily<T>,
    sol: &S,
    times: &[T],
    h: T,
) -> Result<T> {
    let two_h = h + h;
    let per_t = times
        .par_iter()
        .map(|t| {
            let fd = (&sol.state(*t + h)? - &sol.state(*t - h)?).scale_real(T::one() / two_h);
            let exact = rhs_family(fam, &sol.state(*t)?)?;
            Ok(fd.max_diff(&exact))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(per_t.into_iter().fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn rejects_non_increasing_times() {
        let s = ComplexMatrix::<f64>::identity(2);
        assert!(Trajectory::new(vec![0.0, 0.0], vec![s.clone(), s.clone()]).is_err());
        assert!(Trajectory::new(vec![0.0], vec![s.clone(), s]).is_err());
    }

    #[test]
    fn csv_layouts() {
        let s = ComplexMatrix::<f64>::from_fn(2, |i, j| c(if i == j { 0.5 } else { 0.1 }, j as f64 - i as f64));
        let mut tr = Trajectory::new(vec![0.0, 0.5], vec![s.clone(), s]).unwrap();
        tr.add_expectation("id", &ComplexMatrix::identity(2)).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf, CsvMode::Observables).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,id");
        assert_eq!(
            text.lines().nth(2).unwrap(),
            "5.0000000000000000e-1,1.0000000000000000e0"
        );
        let mut buf = Vec::new();
        tr.write_csv(&mut buf, CsvMode::FullMatrix).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,re_1_1,im_1_1,re_1_2,im_1_2,re_2_1"));
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = uniform_grid(-10.0f64, 10.0, 201);
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], -10.0);
        assert_eq!(g[200], 10.0);
        assert!((g[100]).abs() < 1e-15);
    }
}
