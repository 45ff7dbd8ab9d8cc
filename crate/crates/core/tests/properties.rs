use num_complex::Complex;
use proptest::prelude::*;
use vn_core::dynamics::{casimirs, effective_hamiltonian, integrate_rk4, EquationFamily, PolynomialF};
use vn_core::elliptic::{complete_k, jacobi_sn};
use vn_core::laxdarboux::{
    darboux_rho, hermitian_projector, projector, seed_with_lax_vector, similarity_t, DarbouxConfig,
};
use vn_core::linalg::json::{matrix_to_json, parse_matrix};
use vn_core::linalg::{commutator, herm_eig, ComplexMatrix, ComplexVector, Hermitian};

type C = Complex<f64>;

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |v| {
        ComplexMatrix::from_fn(n, |i, j| C::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1])).hermitize()
    })
}

fn vector(n: usize) -> impl Strategy<Value = ComplexVector<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * n)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.05)
        .prop_map(|v| ComplexVector::from_vec(v.chunks(2).map(|c| C::new(c[0], c[1])).collect()))
}

fn spectral() -> impl Strategy<Value = C> {
    (-1.0f64..1.0, 0.3f64..1.5, any::<bool>()).prop_map(|(re, im, neg)| C::new(re, if neg { -im } else { im }))
}

fn eigs(m: &ComplexMatrix<f64>) -> Vec<f64> {
    herm_eig(m).unwrap().values
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Dimension plus a Hermitian pair, a ket and a spectral parameter.
fn instance() -> impl Strategy<Value = (ComplexMatrix<f64>, ComplexMatrix<f64>, ComplexVector<f64>, C, f64)> {
    (2usize..=5).prop_flat_map(|n| (hermitian(n), hermitian(n), vector(n), spectral(), -1.0f64..1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projector_is_idempotent(
        (phi, chi) in (2usize..=6).prop_flat_map(|n| (vector(n), vector(n)))
            .prop_filter("overlap", |(p, c)| c.inner(p).norm() > 0.2 * p.norm() * c.norm())
    ) {
        let p = projector(&phi, &chi).unwrap();
        prop_assert!((&p * &p).max_diff(&p) < 1e-10);
        prop_assert!((p.trace() - C::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn similarity_factor_inverts(phi in (2usize..=6).prop_flat_map(vector), mu in spectral(), nu in spectral()) {
        let p = hermitian_projector(&phi).unwrap();
        let s = similarity_t(&p, &DarbouxConfig::general(mu, nu)).unwrap();
        let id = ComplexMatrix::identity(p.dim());
        prop_assert!((&s.t * &s.t_inv).max_diff(&id) < 1e-10);
        prop_assert!((&s.t_inv * &s.t).max_diff(&id) < 1e-10);
    }

    #[test]
    fn hermitian_dressing_is_isospectral((a, b, phi, mu, r) in instance()) {
        let (rho, pair) = seed_with_lax_vector(&a, &phi, mu, r, &b).unwrap();
        let cfg = DarbouxConfig::hermitian(mu);
        let p = hermitian_projector(&pair.phi0).unwrap();
        let dressed = darboux_rho(&rho, &a, &p, &cfg).unwrap();
        prop_assert!(dressed.hermiticity_defect() < 1e-10);
        prop_assert!(max_gap(&eigs(&dressed), &eigs(&rho)) < 1e-9);
        let s = similarity_t(&p, &cfg).unwrap();
        prop_assert!(dressed.max_diff(&(&(&s.t * &rho) * &s.t_inv)) < 1e-10);
        let (c0, c1) = (casimirs(&rho, 4).unwrap(), casimirs(&dressed, 4).unwrap());
        for (x, y) in c0.iter().zip(&c1) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn effective_hamiltonian_identity(
        (rho, h) in (2usize..=5).prop_flat_map(|n| (hermitian(n), hermitian(n))),
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..=5),
        center in -1.0f64..1.0,
    ) {
        let f = PolynomialF::new(center, coeffs);
        let h = Hermitian::new(h).unwrap();
        let heff = effective_hamiltonian(&h, &rho, &f).unwrap();
        let left = commutator(&heff, &rho).unwrap();
        let right = commutator(h.matrix(), &f.eval_matrix(&rho)).unwrap();
        prop_assert!(left.max_diff(&right) < 1e-10);
    }

    #[test]
    fn integration_keeps_casimirs(
        (a, rho0) in (2usize..=4).prop_flat_map(|n| (hermitian(n), hermitian(n))),
        n in 1u32..=3,
    ) {
        let fam = EquationFamily::new(n, Hermitian::new(a.scale_real(0.5)).unwrap());
        let rho0 = rho0.scale_real(0.5);
        let run = integrate_rk4(&fam, &rho0, 0.0, 1.0, 1e-3).unwrap();
        prop_assert!(run.max_casimir_drift.iter().all(|d| *d < 1e-8));
        let last = run.trajectory.states().last().unwrap();
        prop_assert!(max_gap(&eigs(last), &eigs(&rho0)) < 1e-8);
    }

    #[test]
    fn sn_is_odd_bounded_and_periodic(u in -6.0f64..6.0, k in 0.0f64..0.999) {
        let s = jacobi_sn(u, k).unwrap();
        prop_assert!(s.abs() <= 1.0 + 1e-15);
        prop_assert!((jacobi_sn(-u, k).unwrap() + s).abs() < 1e-13);
        let kk = complete_k(k).unwrap();
        prop_assert!((jacobi_sn(u + 4.0 * kk, k).unwrap() - s).abs() < 1e-10);
        prop_assert!((jacobi_sn(u + 2.0 * kk, k).unwrap() + s).abs() < 1e-10);
    }

    #[test]
    fn matrix_json_round_trip(m in (1usize..=5).prop_flat_map(hermitian)) {
        prop_assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
    }
}
