use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};
use vn_core::dynamics::{
    casimirs, equation_residual, integrate_rk4, spin1_matrices, uniform_grid, ClosedForm, CsvMode, EquationFamily,
    Stationary, Trajectory,
};
use vn_core::elliptic::{extract_w, fit_w_equation, to_h_eigenbasis, verify_k1_identification, K1Outcome, WFit};
use vn_core::figures::{scattering_fits, spin_series, SinusoidFit};
use vn_core::laxdarboux::{normalize_to_density, similarity_rate, DarbouxConfig, LaxEigenpair};
use vn_core::linalg::json::{parse_matrix, parse_vector, vector_to_json, MatrixJson};
use vn_core::linalg::{eigenspaces, herm_eig, DensityMatrix, Hermitian};
use vn_core::seeds::{example3x3, example8x8, published_8x8, Strategy1Seed, Strategy1Solution, Strategy2Solution};
use vn_core::verify::{run_suite, Fault, Suite, VerifyOptions};
use vn_core::CMatrix;

use crate::complex::parse_complex;
use crate::output::{sidecar, write_csv, write_json};
use crate::{
    DarbouxArgs, Example, FaultArg, Gate, Grid, Mode, ReproduceArgs, SimulateArgs, SuiteArg, Target, VerifyArgs,
    WReportArgs,
};

/// Entry tolerance for the displayed eight-level matrix.
const DISPLAYED_MATRIX_TOL: f64 = 1e-12;

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_json_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

fn load_matrix(flag: &str, arg: &str) -> Result<CMatrix> {
    let text = read_json_arg(arg)?;
    parse_matrix(&text).with_context(|| format!("parsing {flag}"))
}

fn resolve_grid(g: &Grid, default: (f64, f64, f64)) -> Result<(f64, f64, f64)> {
    let t0 = g.t0.unwrap_or(default.0);
    let t1 = g.t1.unwrap_or(default.1);
    let dt = g.dt.unwrap_or(default.2);
    if !(t0.is_finite() && t1.is_finite() && dt.is_finite()) {
        bail!("grid values must be finite");
    }
    if dt <= 0.0 {
        bail!("need dt > 0 (got {dt})");
    }
    if t1 <= t0 {
        bail!("need t1 > t0 (got t0 = {t0}, t1 = {t1})");
    }
    Ok((t0, t1, dt))
}

fn grid_points(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let steps = ((t1 - t0) / dt - 1e-9).ceil().max(1.0) as usize;
    uniform_grid(t0, t1, steps + 1)
}

fn csv_mode(m: Mode) -> CsvMode {
    match m {
        Mode::Observables => CsvMode::Observables,
        Mode::FullMatrix => CsvMode::FullMatrix,
    }
}

/// Spin-1 expectations for three-level states and `Tr rho^k`, `k <= 3`.
fn annotate(traj: &mut Trajectory<f64>) -> Result<()> {
    if traj.dim() == 3 {
        let [jx, jy, jz] = spin1_matrices::<f64>();
        traj.add_expectation("Jx", jx.matrix())?;
        traj.add_expectation("Jy", jy.matrix())?;
        traj.add_expectation("Jz", jz.matrix())?;
    }
    let cs = traj
        .states()
        .iter()
        .map(|s| casimirs(s, 3))
        .collect::<vn_core::Result<Vec<_>>>()?;
    for k in 0..3 {
        traj.add_series(&format!("tr_rho{}", k + 1), cs.iter().map(|c| c[k]).collect())?;
    }
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let (t0, t1, dt) = resolve_grid(&args.grid, (0.0, 10.0, 1e-3))?;
    let a = Hermitian::new(load_matrix("--a", &args.a)?).context("--a")?;
    let rho0 = load_matrix("--rho0", &args.rho0)?;
    match args.gate {
        Gate::Hermitian => drop(Hermitian::new(rho0.clone()).context("--rho0")?),
        Gate::Density => drop(DensityMatrix::new(rho0.clone()).context("--rho0")?),
    }
    let fam = EquationFamily::new(args.n, a);
    let run = integrate_rk4(&fam, &rho0, t0, t1, dt)?;
    let mut traj = run.trajectory;
    annotate(&mut traj)?;
    write_csv(&args.out, &traj, csv_mode(args.mode))?;
    eprintln!(
        "simulate: n = {}, {} steps, final Casimir drift [{:.3e}, {:.3e}, {:.3e}], max [{:.3e}, {:.3e}, {:.3e}]",
        args.n,
        traj.len() - 1,
        run.casimir_drift[0],
        run.casimir_drift[1],
        run.casimir_drift[2],
        run.max_casimir_drift[0],
        run.max_casimir_drift[1],
        run.max_casimir_drift[2],
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Deserialize)]
struct Bundle {
    h: MatrixJson,
    xi0: MatrixJson,
    a: f64,
    phi0: Value,
}

/// First Lax eigenvector of `rho - mu A` accepted by `build`.
fn first_accepted<S>(
    rho: &CMatrix,
    a: &CMatrix,
    mu: Complex64,
    build: impl Fn(LaxEigenpair<f64>) -> vn_core::Result<S>,
) -> Result<S> {
    let lax = rho - &a.scale(mu);
    let mut last = None;
    for space in eigenspaces(&lax, 1e-8)? {
        match LaxEigenpair::from_eigenvalue(rho, a, mu, space.value).and_then(&build) {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    match last {
        Some(e) => Err(e).context("no Lax eigenvector gives a valid dressing"),
        None => bail!("rho - mu A has no eigenvalues"),
    }
}

type ProjectorAt = Box<dyn Fn(f64) -> vn_core::Result<CMatrix>>;

struct Dressing {
    source: String,
    family: EquationFamily<f64>,
    solution: Box<dyn ClosedForm<f64>>,
    projector: Option<(ProjectorAt, DarbouxConfig<f64>)>,
}

fn strategy1_dressing(
    source: String,
    seed: Strategy1Seed<f64>,
    mu: Complex64,
    phi0: Option<Value>,
) -> Result<Dressing> {
    let family = seed.family();
    if mu.im == 0.0 {
        return Ok(Dressing {
            source,
            family,
            solution: Box::new(seed.flow()?),
            projector: None,
        });
    }
    let sol = match phi0 {
        Some(v) => Strategy1Solution::new(seed, mu, parse_vector(&v).context("phi0")?)?,
        None => first_accepted(seed.xi0.matrix(), seed.h.matrix(), mu, |p| {
            Strategy1Solution::new(seed.clone(), mu, p.phi0)
        })?,
    };
    let cfg = *sol.config();
    let shared = std::sync::Arc::new(sol);
    let for_p = shared.clone();
    Ok(Dressing {
        source,
        family,
        solution: Box::new(shared),
        projector: Some((Box::new(move |t| for_p.internal_projector(t)), cfg)),
    })
}

fn build_dressing(args: &DarbouxArgs, mu: Complex64) -> Result<Dressing> {
    if let Some(spec) = &args.bundle {
        let b: Bundle = serde_json::from_str(&read_json_arg(spec)?).context("parsing --bundle")?;
        let h = Hermitian::new(b.h.to_matrix()?).context("bundle h")?;
        let xi0 = Hermitian::new(b.xi0.to_matrix()?).context("bundle xi0")?;
        let seed = Strategy1Seed::new(h, xi0, b.a)?;
        return strategy1_dressing("bundle".into(), seed, mu, Some(b.phi0));
    }
    match args.example.unwrap_or(Example::ThreeLevel) {
        Example::ThreeLevel => {
            let ex = example3x3::<f64>();
            let phi0 = (mu == ex.mu).then(|| vector_to_json(&ex.phi0));
            strategy1_dressing("3x3".into(), ex.seed()?, mu, phi0)
        }
        Example::EightLevel => {
            let ex = example8x8::<f64>()?;
            let seed = ex.seed()?;
            let family = seed.family();
            if mu.im == 0.0 {
                return Ok(Dressing {
                    source: "8x8".into(),
                    family,
                    solution: Box::new(Stationary(ex.xi.matrix().clone())),
                    projector: None,
                });
            }
            let sol = if mu == ex.mu {
                Strategy2Solution::new(seed, mu, ex.phi0.clone())?
            } else {
                first_accepted(ex.xi.matrix(), ex.h.matrix(), mu, |p| {
                    Strategy2Solution::new(seed.clone(), mu, p.phi0)
                })?
            };
            let cfg = *sol.config();
            let shared = std::sync::Arc::new(sol);
            let for_p = shared.clone();
            Ok(Dressing {
                source: "8x8".into(),
                family,
                solution: Box::new(shared),
                projector: Some((Box::new(move |t| for_p.projector(t)), cfg)),
            })
        }
    }
}

fn spectrum(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(herm_eig(m)?.values)
}

pub fn darboux(args: DarbouxArgs) -> Result<ExitCode> {
    let (t0, t1, dt) = resolve_grid(&args.grid, (-10.0, 10.0, 1e-2))?;
    let mu = parse_complex(args.mu.as_deref().unwrap_or("i")).context("--mu")?;
    let trivial = mu.im == 0.0;
    if trivial {
        eprintln!("warning: trivial transformation: mu = {mu} is real, so rho[1] = rho");
    }
    let d = build_dressing(&args, mu)?;
    let (normalized, shift) = normalize_to_density(&d.solution, &d.family)?;
    let times = grid_points(t0, t1, dt);
    let mut traj = normalized.sample(&times)?;
    annotate(&mut traj)?;
    write_csv(&args.out, &traj, csv_mode(args.mode))?;

    let first = spectrum(&traj.states()[0])?;
    let mut variation = 0.0f64;
    for s in traj.states() {
        for (x, y) in spectrum(s)?.iter().zip(&first) {
            variation = variation.max((x - y).abs());
        }
    }
    let stride = (times.len() / 200).max(1);
    let coarse: Vec<f64> = times.iter().copied().step_by(stride).collect();
    let residual = equation_residual(&d.family, &normalized, &coarse, 1e-5)?;
    let rate = match &d.projector {
        Some((p, cfg)) => {
            let mut worst = 0.0f64;
            for t in times.iter().copied().step_by((times.len() / 20).max(1)) {
                worst = worst.max(similarity_rate(p, cfg, t, 1e-5)?);
            }
            Some(worst)
        }
        None => None,
    };
    let report = json!({
        "source": d.source,
        "mu": [mu.re, mu.im],
        "trivial": trivial,
        "n": d.family.n(),
        "dim": d.family.dim(),
        "shift_lambda": shift.lambda,
        "rescale_y": shift.y,
        "spectrum": first,
        "spectrum_max_variation": variation,
        "equation_residual": residual,
        "max_dT_dt": rate,
        "samples": times.len(),
    });
    let path = sidecar(&args.out, "report.json");
    write_json(&path, &report)?;
    eprintln!(
        "darboux: {} samples, spectrum {:?} (variation {:.2e}), equation residual {:.2e}; report {}",
        times.len(),
        first,
        variation,
        residual,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn fit_json(f: &SinusoidFit<f64>) -> Value {
    json!({
        "offset": f.offset,
        "cos": f.cos,
        "sin": f.sin,
        "omega": f.omega,
        "stderr": f.stderr,
        "rms": f.rms,
        "max_abs": f.max_abs,
    })
}

pub fn reproduce(args: ReproduceArgs) -> Result<ExitCode> {
    match (args.example, args.target) {
        (Example::ThreeLevel, Target::Fig1 | Target::Fig2) => {
            let sol = example3x3::<f64>().density_solution()?;
            let (t0, t1) = if matches!(args.target, Target::Fig1) {
                (0.0, 10.0)
            } else {
                (-230.0, -220.0)
            };
            let traj = spin_series(&sol, t0, t1, 1001)?;
            write_csv(&args.out, &traj, CsvMode::Observables)?;
            let env = traj.observable("envelope").context("envelope column")?;
            let (lo, hi) = env
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(l, h), x| (l.min(*x), h.max(*x)));
            eprintln!("reproduce: envelope on [{t0}, {t1}] spans [{lo:.6e}, {hi:.6e}]");
        }
        (Example::ThreeLevel, Target::Fig3) => {
            let sol = example3x3::<f64>().density_solution()?;
            let s = scattering_fits(&sol, 12.0, 20.0, 0.01)?;
            let mut series = s.series.clone();
            let times = series.times().to_vec();
            series.add_series("fit_future", times.iter().map(|t| s.future.eval(*t)).collect())?;
            series.add_series("fit_past", times.iter().map(|t| s.past.eval(*t)).collect())?;
            write_csv(&args.out, &series, CsvMode::Observables)?;
            let fits = json!({
                "window_future": [12.0, 20.0],
                "window_past": [-20.0, -12.0],
                "future": fit_json(&s.future),
                "past": fit_json(&s.past),
                "separation": s.future.separation(&s.past),
            });
            write_json(&sidecar(&args.out, "fits.json"), &fits)?;
            eprintln!(
                "reproduce: <Jz> fits rms {:.2e} / {:.2e}, separation {:.3e}",
                s.future.rms,
                s.past.rms,
                s.future.separation(&s.past)
            );
        }
        (Example::ThreeLevel, Target::Matrix) => {
            let sol = example3x3::<f64>().density_solution()?;
            write_csv(&args.out, &sol.sample(&args.times)?, CsvMode::FullMatrix)?;
        }
        (Example::EightLevel, Target::Matrix) => {
            let sol = example8x8::<f64>()?.solution()?;
            let traj = sol.sample(&args.times)?;
            write_csv(&args.out, &traj, CsvMode::FullMatrix)?;
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            for (t, st) in traj.times().iter().zip(traj.states()) {
                let diff = st.max_diff(&published_8x8(*t));
                worst = worst.max(diff);
                rows.push(json!({"t": t, "max_abs_diff": diff}));
            }
            let pass = worst <= DISPLAYED_MATRIX_TOL;
            let report = json!({
                "entries_per_time": 64,
                "tolerance": DISPLAYED_MATRIX_TOL,
                "times": rows,
                "max_abs_diff": worst,
                "pass": pass,
            });
            write_json(&sidecar(&args.out, "comparison.json"), &report)?;
            eprintln!(
                "reproduce: displayed 8x8 matrix, max |diff| {worst:.3e} ({})",
                if pass { "pass" } else { "FAIL" }
            );
            if !pass {
                return Ok(ExitCode::from(1));
            }
        }
        (Example::EightLevel, _) => bail!("figure targets need the 3x3 example; use --target matrix for 8x8"),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let suite = match args.suite {
        SuiteArg::All => Suite::All,
        SuiteArg::Theorem1 => Suite::Theorem1,
        SuiteArg::Theorem2 => Suite::Theorem2,
        SuiteArg::Examples => Suite::Examples,
        SuiteArg::Elliptic => Suite::Elliptic,
        SuiteArg::Casimir => Suite::Casimir,
    };
    let opts = VerifyOptions {
        seed: args.seed,
        fault: args.fault.map(|FaultArg::CorruptProjector| Fault::CorruptProjector),
    };
    let report = run_suite(suite, &opts);
    match &args.out {
        Some(path) => write_json(path, &report)?,
        None => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    for c in report.failures() {
        eprintln!("[{}] {c}", c.suite);
    }
    let failed = report.failures().count();
    eprintln!("verify {suite}: {} checks, {failed} failed", report.checks.len());
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn w_report(args: WReportArgs) -> Result<ExitCode> {
    let (t0, t1, dt) = resolve_grid(&args.grid, (-8.0, 8.0, 1e-2))?;
    let (h, traj) = match (&args.a, &args.rho0) {
        (Some(a), Some(rho0)) => {
            let h = Hermitian::new(load_matrix("--a", a)?).context("--a")?;
            let rho0 = Hermitian::new(load_matrix("--rho0", rho0)?).context("--rho0")?;
            let run = integrate_rk4(&EquationFamily::new(1, h.clone()), rho0.matrix(), t0, t1, dt)?;
            (h, run.trajectory)
        }
        _ => {
            if args.example == Some(Example::EightLevel) {
                bail!("the W reduction needs a three-level solution");
            }
            let ex = example3x3::<f64>();
            let traj = ex.density_solution()?.sample(&grid_points(t0, t1, dt))?;
            (ex.h, traj)
        }
    };
    let (eig, tr) = to_h_eigenbasis(&h, &traj)?;
    let w = extract_w(&eig)?;
    let fit = fit_w_equation(&w)?;
    let k1 = verify_k1_identification(&w)?;
    let fit_json = match fit {
        WFit::Fit(f) => json!({"a": f.a, "b": f.b, "c": f.c, "residual": f.residual, "degenerate": false}),
        WFit::Degenerate => json!({"a": null, "b": null, "c": null, "residual": null, "degenerate": true}),
    };
    let k1_json = match k1 {
        K1Outcome::Fit(f) => json!({
            "alpha": f.alpha, "beta": f.beta, "gamma": f.gamma, "t0": f.t0,
            "misfit": f.misfit, "pass": f.pass, "iterations": f.iterations,
        }),
        K1Outcome::Degenerate => Value::Null,
    };
    let mut report = fit_json;
    report["k1_fit"] = k1_json;
    report["eigenvalues"] = json!(tr.eigenvalues);
    report["window"] = json!([t0, t1]);
    report["samples"] = json!(w.len());
    match &args.out {
        Some(path) => write_json(path, &report)?,
        None => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(ExitCode::SUCCESS)
}
