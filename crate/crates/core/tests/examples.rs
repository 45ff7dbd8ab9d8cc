use num_complex::Complex;
use vn_core::dynamics::{equation_residual, uniform_grid, ClosedForm};
use vn_core::laxdarboux::{
    darboux_rho, hermitian_projector, lax_residuals, similarity_t, verify_theorem1_chain, DarbouxConfig, LaxPropagator,
};
use vn_core::linalg::{commutator, herm_eig, ComplexMatrix, ComplexVector};
use vn_core::seeds::{example3x3, example8x8, published_8x8, Strategy1Solution};
use vn_core::Error;

fn sorted_eigs(m: &ComplexMatrix<f64>) -> Vec<f64> {
    herm_eig(m).unwrap().values
}

#[test]
fn three_level_fixture_data() {
    let ex = example3x3::<f64>();
    let x = ex.xi0.matrix();
    let recomputed = &(x * x) - x;
    assert!(recomputed.max_diff(ex.delta.matrix()) < 1e-15);
    assert!(commutator(ex.h.matrix(), ex.delta.matrix()).unwrap().is_zero(1e-15));
    assert!(ex.phi1.inner(&ex.phi2).norm() < 1e-16);
    let lax = x - &ex.h.scale(ex.mu);
    for v in [&ex.phi1, &ex.phi2, &ex.phi0] {
        let r = lax.mat_vec(v).sub(&v.scale(ex.z_minus)).norm();
        assert!(r < 1e-15, "residual {r}");
    }
}

#[test]
fn three_level_dressing_matches_closed_form() {
    let ex = example3x3::<f64>();
    let sol = ex.solution().unwrap();
    for t in [-300.0, -40.0, -3.3, 0.0, 1.0, 17.5, 300.0] {
        let got = sol.internal(t).unwrap();
        assert!(got.max_diff(&ex.internal_closed_form(t)) < 1e-13, "t = {t}");
    }
    let at0 = sol.internal(0.0).unwrap();
    for k in 0..3 {
        assert!((at0[(k, k)] - Complex::new(0.5, 0.0)).norm() < 1e-15);
    }
    assert!((at0.trace().re - 1.5).abs() < 1e-15);
    let s8 = 8f64.sqrt();
    assert!((at0[(0, 2)] - Complex::new(-1.0 / s8, -1.0 / s8)).norm() < 1e-15);
    assert!((at0[(1, 2)] - Complex::new(0.5, 0.0)).norm() < 1e-15);
}

#[test]
fn three_level_spectrum_and_density() {
    let ex = example3x3::<f64>();
    let sol = ex.solution().unwrap();
    let s2 = 2f64.sqrt();
    let want = [(1.0 - s2) / 2.0, 0.5, (1.0 + s2) / 2.0];
    for t in [-7.0, 0.0, 2.5, 9.0] {
        for (g, w) in sorted_eigs(&sol.state(t).unwrap()).iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }
    let rho = ex.density_solution().unwrap();
    for t in [-5.0, 0.0, 7.0] {
        let st = rho.state(t).unwrap();
        for (g, w) in sorted_eigs(&st).iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
            assert!((g - w).abs() < 1e-12);
        }
        let u = ex.h.exp_scaled_for_test(-2.0 / 3.0 * t);
        let want = &(&u * &ex.rho_int(t)) * &u.adjoint();
        assert!(st.max_diff(&want) < 1e-12, "t = {t}");
    }
}

trait ExpH {
    fn exp_scaled_for_test(&self, s: f64) -> ComplexMatrix<f64>;
}

impl ExpH for vn_core::linalg::Hermitian<f64> {
    fn exp_scaled_for_test(&self, s: f64) -> ComplexMatrix<f64> {
        herm_eig(self).unwrap().exp_scaled(Complex::new(0.0, s))
    }
}

#[test]
fn dressed_solutions_solve_the_equation() {
    let ex = example3x3::<f64>();
    let sol = ex.solution().unwrap();
    let grid = uniform_grid(-10.0, 10.0, 201);
    assert!(equation_residual(&ex.family(), &sol, &grid, 1e-5).unwrap() < 1e-6);
    assert!(equation_residual(&ex.family(), &ex.density_solution().unwrap(), &grid, 1e-5).unwrap() < 1e-6);
    let e8 = example8x8::<f64>().unwrap();
    let s8 = e8.solution().unwrap();
    assert!(equation_residual(&e8.family(), &s8, &grid, 1e-5).unwrap() < 1e-6);
    assert!(equation_residual(&e8.family(), &e8.density_solution().unwrap(), &grid, 1e-5).unwrap() < 1e-6);
}

#[test]
fn lax_pairs_hold_along_the_seed_flows() {
    let ex = example3x3::<f64>();
    let sol = ex.solution().unwrap();
    let flow = sol.seed_flow();
    let lax = sol.lax();
    for t in [-2.0, 0.0, 0.7, 3.0] {
        let r = lax_residuals(
            &ex.family(),
            &flow.state(t).unwrap(),
            Some(&lax as &dyn LaxPropagator<f64>),
            t,
        )
        .unwrap();
        assert!(r.spatial < 1e-10 && r.temporal < 1e-8, "{r:?}");
    }
    let e8 = example8x8::<f64>().unwrap();
    let s8 = e8.solution().unwrap();
    let lax = s8.lax();
    for t in [-0.5, 0.0, 0.4] {
        let r = lax_residuals(&e8.family(), e8.xi.matrix(), Some(&lax as &dyn LaxPropagator<f64>), t).unwrap();
        assert!(r.spatial < 1e-10 && r.temporal < 1e-7, "{r:?}");
    }
    assert!(matches!(
        lax_residuals(&e8.family(), e8.xi.matrix(), None, 0.0),
        Err(Error::NoPropagator)
    ));
}

#[test]
fn eight_level_values() {
    let e8 = example8x8::<f64>().unwrap();
    let anti = &(e8.xi.matrix() * e8.h.matrix()) + &(e8.h.matrix() * e8.xi.matrix());
    assert!(anti.is_zero(1e-15));
    let lax = e8.xi.matrix() - &e8.h.scale(Complex::new(0.0, 1.0));
    assert!(lax.mat_vec(&e8.phi0).norm() < 1e-15);
    let s8 = e8.solution().unwrap();
    assert!(s8.pair().z.norm() < 1e-15);
    let at0 = s8.state(0.0).unwrap();
    assert!((at0[(0, 0)] - Complex::new(1.0, 0.0)).norm() < 1e-15);
    assert!((at0[(0, 1)] - Complex::new(0.0, 0.5)).norm() < 1e-15);
    assert!((at0[(0, 3)] - Complex::new(-0.5, 0.0)).norm() < 1e-15);
    for t in [-230.0, -3.0, 1.0, 40.0, 300.0] {
        let st = s8.state(t).unwrap();
        assert!(st.max_diff(&published_8x8(t)) < 1e-12, "t = {t}");
        let e = sorted_eigs(&st);
        for (g, w) in e.iter().zip([-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0]) {
            assert!((g - w).abs() < 1e-12);
        }
    }
    let rho = e8.density_solution().unwrap();
    let st = rho.state(0.3).unwrap();
    assert!((st.trace().re - 1.0).abs() < 1e-14);
    assert!(sorted_eigs(&st)[0].abs() < 1e-13);
}

#[test]
fn proof_chain_on_examples() {
    let ex = example3x3::<f64>();
    let cfg = DarbouxConfig::hermitian(ex.mu);
    let report = verify_theorem1_chain(ex.xi0.matrix(), ex.h.matrix(), &ex.phi0, &ex.phi0, &cfg).unwrap();
    assert!(report.max_residual() < 1e-13);
    let e8 = example8x8::<f64>().unwrap();
    let report = verify_theorem1_chain(e8.xi.matrix(), e8.h.matrix(), &e8.phi0, &e8.phi0, &cfg).unwrap();
    assert!(report.max_residual() < 1e-13);
    let bad = ex.phi0.add(&ComplexVector::basis(3, 1).scale(Complex::new(0.3, 0.0)));
    match verify_theorem1_chain(ex.xi0.matrix(), ex.h.matrix(), &bad, &bad, &cfg) {
        Err(Error::ChainStep { step, .. }) => assert!(step.starts_with("ket eigen-equation")),
        other => panic!("expected a chain failure, got {other:?}"),
    }
}

#[test]
fn similarity_reproduces_darboux_on_example() {
    let ex = example3x3::<f64>();
    let cfg = DarbouxConfig::hermitian(ex.mu);
    let p = hermitian_projector(&ex.phi0).unwrap();
    for k in 0..3 {
        for j in 0..3 {
            assert!(p[(k, j)].norm() > 1e-3);
        }
    }
    let rho1 = darboux_rho(ex.xi0.matrix(), ex.h.matrix(), &p, &cfg).unwrap();
    let s = similarity_t(&p, &cfg).unwrap();
    assert!(rho1.max_diff(&(&(&s.t * ex.xi0.matrix()) * &s.t_inv)) < 1e-14);
}

#[test]
fn delta_eigenvector_rejected() {
    let ex = example3x3::<f64>();
    let r = Strategy1Solution::new(ex.seed().unwrap(), ex.mu, ex.phi1.clone());
    assert!(matches!(r, Err(Error::Precondition { .. })), "{r:?}");
}
