use vn_core::figures::{amplitude_comparison, scattering_fits};
use vn_core::seeds::example3x3;

#[test]
fn envelope_windows() {
    let sol = example3x3::<f64>().density_solution().unwrap();
    let cmp = amplitude_comparison(&sol, (0.0, 10.0), (-230.0, -220.0), 1001).unwrap();
    println!("{cmp:?}");
    assert!((cmp.log10_ratio - 22.0).abs() <= 1.0);
    assert!(cmp.late_decreasing && cmp.early_increasing);
}

#[test]
fn asymptotic_oscillations_differ() {
    let sol = example3x3::<f64>().density_solution().unwrap();
    let s = scattering_fits(&sol, 12.0, 20.0, 0.01).unwrap();
    println!("{:?}\n{:?}", s.future, s.past);
    assert!(s.future.rms <= 1e-3 && s.past.rms <= 1e-3);
    assert!(s.future.separation(&s.past) > 10.0);
    assert!((s.future.omega - 4.0 / 3.0).abs() < 1e-2);
}
