use num_complex::Complex;
use vn_core::dynamics::{integrate_rk4, uniform_grid, ClosedForm, EquationFamily};
use vn_core::elliptic::{
    complete_k, extract_w, fit_w_equation, jacobi_sn, off_diagonal_rhs, to_h_eigenbasis, verify_k1_identification,
    EigenbasisTransform, K1Outcome, WFit, WSeries,
};
use vn_core::linalg::{ComplexMatrix, Hermitian};
use vn_core::seeds::example3x3;

/// Incomplete integral of the first kind by composite Gauss-Legendre.
fn incomplete_f(phi: f64, k: f64) -> f64 {
    let nodes = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189),
        (-0.538_469_310_105_683, 0.478_628_670_499_366),
        (0.0, 0.568_888_888_888_889),
        (0.538_469_310_105_683, 0.478_628_670_499_366),
        (0.906_179_845_938_664, 0.236_926_885_056_189),
    ];
    let panels = 400;
    let h = phi / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = (p as f64 + 0.5) * h;
            nodes
                .iter()
                .map(|(x, w)| {
                    let th = mid + 0.5 * h * x;
                    w * 0.5 * h / (1.0 - k * k * th.sin().powi(2)).sqrt()
                })
                .sum::<f64>()
        })
        .sum()
}

/// `sin(phi)` where `F(phi, k) = u`, by bisection on `[0, pi/2]`.
fn sn_oracle(u: f64, k: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if incomplete_f(mid, k) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).sin()
}

#[test]
fn sn_matches_integral_inversion() {
    assert!((jacobi_sn(0.7, 0.5).unwrap() - sn_oracle(0.7, 0.5)).abs() < 1e-10);
    for (u, k) in [(0.3, 0.2), (1.1, 0.8), (1.5, 0.95)] {
        assert!(
            (jacobi_sn(u, k).unwrap() - sn_oracle(u, k)).abs() < 1e-10,
            "u={u} k={k}"
        );
    }
}

#[test]
fn sn_period_and_bound() {
    for k in [0.05, 0.3, 0.7, 0.9, 0.99] {
        let kk: f64 = complete_k(k).unwrap();
        for u in uniform_grid::<f64>(-5.0, 5.0, 41) {
            let s = jacobi_sn(u, k).unwrap();
            assert!(s * s <= 1.0 + 1e-15);
            assert!((jacobi_sn(u + 4.0 * kk, k).unwrap() - s).abs() < 1e-10, "u={u} k={k}");
        }
    }
}

fn three_level_w(t0: f64, t1: f64, count: usize) -> (WSeries<f64>, EigenbasisTransform<f64>) {
    let ex = example3x3::<f64>();
    let traj = ex
        .density_solution()
        .unwrap()
        .sample(&uniform_grid::<f64>(t0, t1, count))
        .unwrap();
    let (eig, tr) = to_h_eigenbasis(&ex.h, &traj).unwrap();
    (extract_w(&eig).unwrap(), tr)
}

#[test]
fn eigenbasis_of_three_level_hamiltonian() {
    let ex = example3x3::<f64>();
    let sol = ex.density_solution().unwrap();
    let tr = EigenbasisTransform::new(&ex.h).unwrap();
    let want = [1.0, -1.0, 0.5f64.sqrt()];
    for (g, w) in tr.eigenvalues.iter().zip(want) {
        assert!((g - w).abs() < 1e-14);
    }
    let h_eig = tr.apply(ex.h.matrix()).unwrap();
    assert!(h_eig.max_diff(&ComplexMatrix::from_real_diag(&want)) < 1e-14);
    let first = tr.apply(&sol.state(-6.0).unwrap()).unwrap();
    let h = 1e-5;
    for t in uniform_grid::<f64>(-6.0, 6.0, 49) {
        let rho = tr.apply(&sol.state(t).unwrap()).unwrap();
        let plus = tr.apply(&sol.state(t + h).unwrap()).unwrap();
        let minus = tr.apply(&sol.state(t - h).unwrap()).unwrap();
        for k in 0..3 {
            assert!((rho[(k, k)] - first[(k, k)]).norm() < 1e-12);
        }
        let rhs = off_diagonal_rhs(&tr, &rho).unwrap();
        for (slot, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            let fd = (plus[(i, j)] - minus[(i, j)]) / Complex::new(2.0 * h, 0.0);
            assert!((fd - rhs[slot]).norm() < 1e-6, "t={t} slot={slot}");
        }
    }
}

#[test]
fn w_is_a_tanh_square_dip() {
    let (w, _) = three_level_w(-8.0, 8.0, 1601);
    let alpha = 1.0 / (3.0 * 2f64.sqrt());
    for (t, x) in w.times.iter().zip(&w.w) {
        let want = (alpha * t).tanh().powi(2) / 9.0;
        assert!((x - want).abs() < 1e-13, "t={t}");
    }
}

#[test]
fn w_equation_fit_on_three_level_solution() {
    let (w, _) = three_level_w(-8.0, 8.0, 1601);
    match fit_w_equation(&w).unwrap() {
        WFit::Fit(f) => {
            assert!(f.residual <= 1e-5, "{f:?}");
            // Symbolic oracle for (1/9) tanh^2(t / (3 sqrt 2)).
            assert!((f.a - 3.0).abs() < 1e-4, "{f:?}");
            assert!((f.b + 4.0 / 9.0).abs() < 1e-5, "{f:?}");
            assert!((f.c - 1.0 / 81.0).abs() < 1e-6, "{f:?}");
        }
        WFit::Degenerate => panic!("degenerate"),
    }
}

#[test]
fn synthetic_tanh_square_fit() {
    let t = uniform_grid::<f64>(-4.0, 4.0, 801);
    let w: Vec<f64> = t.iter().map(|x| x.tanh().powi(2)).collect();
    let s = WSeries::new(t, w).unwrap();
    let WFit::Fit(f) = fit_w_equation::<f64>(&s).unwrap() else {
        panic!()
    };
    assert!(f.residual <= 1e-6);
    // d^2/dt^2 tanh^2 = 2 - 8 W + 6 W^2.
    assert!(
        (f.a - 6.0).abs() < 1e-5 && (f.b + 8.0).abs() < 1e-5 && (f.c - 2.0).abs() < 1e-6,
        "{f:?}"
    );
}

#[test]
fn k1_identification() {
    let (w, _) = three_level_w(-20.0, 20.0, 2001);
    match verify_k1_identification(&w).unwrap() {
        K1Outcome::Fit(f) => {
            assert!(f.pass, "{f:?}");
            assert!((f.alpha - 1.0 / (3.0 * 2f64.sqrt())).abs() < 1e-6);
            assert!((f.beta - 9.0).abs() < 1e-4);
        }
        K1Outcome::Degenerate => panic!("degenerate"),
    }
    let t = uniform_grid::<f64>(-20.0, 20.0, 2001);
    let w: Vec<f64> = t
        .iter()
        .map(|x| jacobi_sn::<f64>(0.5 * x, 0.9).unwrap().powi(2) / 9.0)
        .collect();
    match verify_k1_identification(&WSeries::new(t, w).unwrap()).unwrap() {
        K1Outcome::Fit(f) => assert!(!f.pass && f.misfit > 1e-3, "{f:?}"),
        K1Outcome::Degenerate => panic!("degenerate"),
    }
}

#[test]
fn w_equation_on_integrated_generic_trajectories() {
    let hs: [[f64; 3]; 2] = [[0.3, -1.2, 0.8], [1.0, 0.1, -0.45]];
    for (k, diag) in hs.iter().enumerate() {
        let h = Hermitian::new(ComplexMatrix::from_real_diag(diag)).unwrap();
        let fam = EquationFamily::new(1, h.clone());
        let rho0 = ComplexMatrix::from_rows(vec![
            vec![
                Complex::new(0.4, 0.0),
                Complex::new(0.1, 0.05),
                Complex::new(-0.08, 0.12),
            ],
            vec![
                Complex::new(0.1, -0.05),
                Complex::new(0.35, 0.0),
                Complex::new(0.07, 0.02),
            ],
            vec![
                Complex::new(-0.08, -0.12),
                Complex::new(0.07, -0.02),
                Complex::new(0.25, 0.0),
            ],
        ])
        .unwrap();
        let out = integrate_rk4(&fam, &rho0, 0.0, 20.0, 1e-2).unwrap();
        let (eig, _) = to_h_eigenbasis(&h, &out.trajectory).unwrap();
        let w = extract_w(&eig).unwrap();
        match fit_w_equation(&w).unwrap() {
            WFit::Fit(f) => assert!(f.residual <= 1e-4, "case {k}: {f:?}"),
            WFit::Degenerate => panic!("degenerate"),
        }
    }
}
