use modphi::law::{CustomLawSpec, ReferenceLaw};
use modphi::special::{gaussian_tail, integrate, log_gaussian_tail, mills, normal_pdf};
use modphi::{Error, Law};
use num_complex::Complex;
use proptest::prelude::*;
use std::sync::Arc;

#[test]
fn gaussian_saddle_closed_form() {
    let law = Law::gaussian(0.0, 1.0).unwrap();
    let p = law.solve_saddle(2.0).unwrap();
    assert!((p.h - 2.0).abs() < 1e-12);
    assert!((p.f - 2.0).abs() < 1e-12);
    assert!((p.fpp - 1.0).abs() < 1e-12);
}

#[test]
fn poisson_saddle_at_mean_and_at_e() {
    let law = Law::poisson(1.0).unwrap();
    let p = law.solve_saddle(1.0).unwrap();
    assert_eq!(p.h, 0.0);
    assert_eq!(p.f, 0.0);
    let p = law.solve_saddle(std::f64::consts::E).unwrap();
    assert!((p.h - 1.0).abs() < 1e-12);
    assert!((p.f - 1.0).abs() < 1e-12);
}

#[test]
fn legendre_grid_values() {
    let g = Law::gaussian(0.0, 1.0).unwrap();
    let f: Vec<f64> = g.legendre_grid(&[-1.0, 0.0, 1.0]).unwrap().iter().map(|p| p.f).collect();
    assert!((f[0] - 0.5).abs() < 1e-12 && f[1] == 0.0 && (f[2] - 0.5).abs() < 1e-12);
    let p = Law::poisson(1.0).unwrap().legendre_grid(&[0.5]).unwrap();
    assert!((p[0].f - (0.5 * 0.5f64.ln() + 0.5)).abs() < 1e-12);
    assert!((p[0].f - 0.153426).abs() < 1e-6);
    let p = Law::poisson(2.0).unwrap().legendre_grid(&[2.0]).unwrap();
    assert_eq!(p[0].f, 0.0);
}

#[test]
fn out_of_range_reports_index() {
    let p = Law::poisson(1.0).unwrap();
    match p.legendre_grid(&[1.0, 0.5, -0.5]) {
        Err(Error::OutOfRange { index: Some(2), .. }) => {}
        other => panic!("{other:?}"),
    }
    let e = Law::exponential(1.0).unwrap();
    assert!(matches!(e.solve_saddle(0.2), Err(Error::OutOfRange { .. })));
    assert!(e.solve_saddle(50.0).is_ok());
}

#[test]
fn gaussian_tail_values() {
    assert_eq!(gaussian_tail(0.0), 0.5);
    let q = integrate(&normal_pdf, 1.0, 40.0, 1e-15);
    assert!((gaussian_tail(1.0) - q).abs() < 1e-14 * q);
    assert!((gaussian_tail(1.0) - 0.158655253931).abs() < 1e-12);
    for &a in &[3.0, 6.0, 9.0] {
        let q = integrate(&normal_pdf, a, a + 40.0, 1e-15);
        assert!((gaussian_tail(a) / q - 1.0).abs() < 1e-13, "{a}");
    }
    for &a in &[40.0, 100.0, 1000.0] {
        let r = (log_gaussian_tail(a) + 0.5 * a * a).exp() * a * std::f64::consts::TAU.sqrt();
        assert!((r - 1.0).abs() < 2.0 / (a * a));
        assert!((mills(a) * a * std::f64::consts::TAU.sqrt() - 1.0).abs() < 2.0 / (a * a));
    }
}

#[test]
fn custom_law_without_jet_uses_cauchy_derivatives() {
    let law = ReferenceLaw::<f64>::custom(
        "poisson3",
        Arc::new(|z: Complex<f64>| (z.exp() - 1.0) * 3.0),
        f64::INFINITY,
        Some(1.0),
    )
    .unwrap();
    let j = law.jet(0.7);
    for d in &j[1..] {
        assert!((d - 3.0 * 0.7f64.exp()).abs() < 1e-11, "{d}");
    }
    let p = law.solve_saddle(7.0).unwrap();
    assert!((p.h - (7.0f64 / 3.0).ln()).abs() < 1e-12);
}

#[test]
fn custom_law_from_file_format() {
    let spec =
        CustomLawSpec::from_toml("name = \"p2\"\neta = \"2*exp(z) - 2\"\nstrip = \"inf\"\nlattice_span = 1\n").unwrap();
    let law = spec.build().unwrap();
    assert!(law.is_lattice());
    assert!((law.mean() - 2.0).abs() < 1e-15);
    let p = law.solve_saddle(4.0).unwrap();
    assert!((p.f - (4.0 * 2f64.ln() - 2.0)).abs() < 1e-12);
    assert!(CustomLawSpec::from_toml("eta = \"exp(z)\"").unwrap().build().is_err());
}

#[test]
fn single_precision_solver() {
    let law = ReferenceLaw::<f32>::poisson(1.0).unwrap();
    let p = law.solve_saddle(std::f32::consts::E).unwrap();
    assert!((p.h - 1.0).abs() < 1e-5);
    assert!((p.f - 1.0).abs() < 1e-5);
}

fn laws() -> Vec<Law> {
    vec![
        Law::gaussian(0.3, 2.0).unwrap(),
        Law::poisson(1.5).unwrap(),
        Law::bernoulli(0.3).unwrap(),
        Law::exponential(1.0).unwrap(),
    ]
}

proptest! {
    #[test]
    fn involution_and_curvature(which in 0usize..4, u in 0.02f64..0.98) {
        let law = &laws()[which];
        // sample x inside the image of η' on a bounded window
        let (lo, hi) = match which { 0 => (-5.0, 5.0), 1 => (0.05, 10.0), 2 => (0.01, 0.99), _ => (0.55, 8.0) };
        let x = lo + (hi - lo) * u;
        let p = law.solve_saddle(x).unwrap();
        let j = law.jet(p.fp);
        prop_assert!((j[1] - x).abs() <= 1e-10 * x.abs().max(1.0));
        prop_assert!((p.fpp * j[2] - 1.0).abs() < 1e-8);
        prop_assert!(p.f >= 0.0);
    }

    #[test]
    fn tail_symmetry(a in -8.0f64..8.0) {
        prop_assert!((gaussian_tail(a) + gaussian_tail(-a) - 1.0).abs() < 1e-13);
    }
}

#[test]
fn rate_is_convex_on_grids() {
    for (law, lo, hi) in [
        (Law::poisson(1.0).unwrap(), 0.05, 6.0),
        (Law::bernoulli(0.5).unwrap(), 0.02, 0.98),
        (Law::exponential(2.0).unwrap(), 0.3, 5.0),
    ] {
        let xs: Vec<f64> = (0..200).map(|i| lo + (hi - lo) * i as f64 / 199.0).collect();
        let f: Vec<f64> = law.legendre_grid(&xs).unwrap().iter().map(|p| p.f).collect();
        for w in f.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-9);
        }
    }
}
