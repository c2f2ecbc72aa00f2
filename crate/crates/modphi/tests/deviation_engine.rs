use modphi::deviation::*;
use modphi::limiting::BarnesKind;
use modphi::special::{barnes_log_g, gaussian_tail, ln_gamma, normal_cdf};
use modphi::{Cumulants, Error, Law, Model, Psi};
use proptest::prelude::*;

fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    (k as f64 * lambda.ln() - lambda - statrs::function::gamma::ln_gamma(k as f64 + 1.0)).exp()
}

fn poisson_sf(lambda: f64, k0: u64) -> f64 {
    (k0..k0 + 2000).map(|k| poisson_pmf(lambda, k)).sum()
}

fn poisson_model(t: f64, psi: Psi) -> Model {
    Model::new(Law::poisson(1.0).unwrap(), t, psi).unwrap()
}

#[test]
fn poisson_point_mass_at_mean() {
    let m = poisson_model(100.0, Psi::constant());
    let e = lattice_point_mass(&m, 1.0, 0).unwrap();
    assert!((e.prob - 0.039_894_2).abs() < 1e-7);
    let exact = poisson_pmf(100.0, 100);
    assert!((exact - 0.039_860_9).abs() < 1e-7);
    assert!((e.prob / exact - 1.000_84).abs() < 1e-5);
    // the first correction is −1/(12 t x) here, matching Stirling
    let e1 = lattice_point_mass(&m, 1.0, 1).unwrap();
    assert!((e1.correction - (1.0 - 1.0 / 1200.0)).abs() < 1e-12);
    assert!((e1.prob / exact - 1.0).abs() < 1e-5);
}

#[test]
fn gaussian_first_correction_vanishes() {
    let law = Law::gaussian(0.0, 1.0).unwrap();
    let eta = law.jet(0.8);
    let a1 = a1_closed_form(&eta, &[1.0, 0.0, 0.0]);
    assert_eq!(a1, 0.0);
}

#[test]
fn first_correction_improves_poisson_masses() {
    for &(t, k) in &[(50.0, 80u64), (200.0, 260), (30.0, 12)] {
        let m = poisson_model(t, Psi::constant());
        let x = k as f64 / t;
        let exact = poisson_pmf(t, k);
        let r0 = lattice_point_mass(&m, x, 0).unwrap().prob / exact;
        let r1 = lattice_point_mass(&m, x, 1).unwrap().prob / exact;
        assert!((r1 - 1.0).abs() < 0.2 * (r0 - 1.0).abs(), "{t} {k} {r0} {r1}");
    }
}

#[test]
fn cycles_point_mass_closed_form() {
    let n = 1.0e6f64;
    let t = n.ln();
    let k = 20.0;
    let x = k / t;
    let m = poisson_model(t, Psi::inv_gamma_exp());
    let e = lattice_point_mass(&m, x, 0).unwrap();
    let want = (-(x * x.ln() - x + 1.0) * n.ln()).exp() / ((std::f64::consts::TAU * x * t).sqrt() * ln_gamma(x).exp());
    assert!((e.prob / want - 1.0).abs() < 1e-10);
    let tail = lattice_tail(&m, x).unwrap();
    assert!((tail.prob / e.prob - x / (x - 1.0)).abs() < 1e-10);
}

#[test]
fn poisson_tail_at_twice_the_mean() {
    let m = poisson_model(100.0, Psi::constant());
    let e = lattice_tail(&m, 2.0).unwrap();
    let want = (-100.0 * (2.0 * 2f64.ln() - 1.0)).exp() * 2.0 / (std::f64::consts::TAU * 200.0).sqrt();
    assert!((e.prob / want - 1.0).abs() < 1e-10);
    let exact = poisson_sf(100.0, 200);
    assert!((e.prob / exact - 1.0).abs() < 0.03);
    let e1 = lattice_tail_order(&m, 2.0, 1).unwrap();
    assert!((e1.prob / exact - 1.0).abs() < (e.prob / exact - 1.0).abs());
}

#[test]
fn lattice_tail_rejects_mean_and_non_lattice() {
    let m = poisson_model(100.0, Psi::constant());
    assert!(matches!(lattice_tail(&m, 1.0), Err(Error::OutOfRange { .. })));
    assert!(matches!(lattice_tail(&m, 0.5), Err(Error::OutOfRange { .. })));
    assert!(lattice_tail(&m, 1.0001).unwrap().flags.contains(&"near_mean".to_string()));
    let g = Model::new(Law::gaussian(0.0, 1.0).unwrap(), 10.0, Psi::constant()).unwrap();
    assert_eq!(lattice_point_mass(&g, 1.0, 0), Err(Error::NotLattice));
    assert_eq!(nonlattice_tail(&m, 2.0), Err(Error::IsLattice));
}

#[test]
fn gaussian_nonlattice_tail() {
    let m = Model::new(Law::gaussian(0.0, 1.0).unwrap(), 100.0, Psi::constant()).unwrap();
    let e = nonlattice_tail(&m, 0.5).unwrap();
    let want = (-12.5f64).exp() / (0.5 * (200.0 * std::f64::consts::PI).sqrt());
    assert!((e.prob / want - 1.0).abs() < 1e-12);
    let exact = gaussian_tail(5.0);
    assert!((e.prob / exact - 1.0).abs() < 1.0 / (100.0 * 0.25));
    let lower = nonlattice_tail(&m, -0.5).unwrap();
    assert!((lower.prob / e.prob - 1.0).abs() < 1e-12);
    assert!(lower.flags.contains(&"lower_tail".to_string()));
}

#[test]
fn symplectic_display() {
    let n = 1.0e8f64;
    let t = (n / 2.0).ln();
    let x = 1.3;
    let m = Model::new(Law::gaussian(0.0, 1.0).unwrap(), t, Psi::barnes(BarnesKind::Symplectic)).unwrap();
    let e = nonlattice_tail(&m, x).unwrap();
    let ratio = (barnes_log_g(1.5f64).unwrap() - barnes_log_g(1.5 + x).unwrap()).exp();
    let want = (-t * x * x / 2.0).exp() * ratio / (x * (std::f64::consts::TAU * t).sqrt());
    assert!((e.prob / want - 1.0).abs() < 1e-12);
}

#[test]
fn crossover_limits() {
    let m = Model::new(Law::poisson(1.0).unwrap(), 1e8, Psi::constant()).unwrap();
    let e = crossover_tail(&m, 0.0).unwrap();
    assert_eq!(e.prob, 0.5);
    assert_eq!(e.regime, Regime::Clt);
    let e = crossover_tail(&m, 1.0).unwrap();
    assert!((e.prob / gaussian_tail(1.0) - 1.0).abs() < 1e-3);
    let t = 1e8f64;
    let y = t.powf(1.0 / 3.0);
    let e = crossover_tail(&m, y).unwrap();
    assert_eq!(e.regime, Regime::Crossover);
    let x = 1.0 + y / t.sqrt();
    let lp = m.law.solve_saddle(x).unwrap();
    let log_nl = -t * lp.f - (lp.h * (std::f64::consts::TAU * t * x).sqrt()).ln();
    assert!((e.log_prob - log_nl).abs() < 0.05);
}

#[test]
fn crossover_matches_nonlattice_in_overlap() {
    for law in [Law::exponential(1.0).unwrap(), Law::gaussian(0.0, 2.0).unwrap()] {
        for &t in &[1e3, 1e4] {
            let m = Model::new(law.clone(), t, Psi::constant()).unwrap();
            let v = law.variance();
            for &y in &[t.powf(0.2), t.powf(0.3), t.powf(0.4)] {
                let x = law.mean() + y * (v / t).sqrt();
                let c = crossover_tail(&m, y).unwrap().log_prob;
                let n = nonlattice_tail(&m, x).unwrap().log_prob;
                let r = (c - n).exp();
                assert!((0.8..=1.25).contains(&r), "{t} {y} {r}");
            }
        }
    }
}

#[test]
fn cumulant_moderate_gaussian_limit() {
    let cm = Cumulants { alpha_n: 1e4, beta_n: 1.0, sigma2: 1.0, l: 0.0, k4: None };
    let y = 2.5f64;
    let e = cumulant_moderate(&cm, y * 100.0).unwrap();
    let want = (-y * y / 2.0).exp() / (y * std::f64::consts::TAU.sqrt());
    assert!((e.prob / want - 1.0).abs() < 1e-12);
    // agrees with the two leading factors of the crossover form for a Gaussian model
    let m = Model::new(Law::gaussian(0.0, 1.0).unwrap(), 1e4, Psi::constant()).unwrap();
    let c = crossover_tail(&m, y).unwrap();
    let beta = y;
    let lead = (-c.exponent_rate).exp() / (beta * std::f64::consts::TAU.sqrt());
    assert!((e.prob / lead - 1.0).abs() < 1e-10);
    assert!(e.flags.is_empty());
    assert!(cumulant_moderate(&cm, 10.0).unwrap().flags.contains(&"below_window".to_string()));
    let bad = Cumulants { sigma2: 0.0, ..cm };
    assert_eq!(cumulant_moderate(&bad, 200.0), Err(Error::NonPositiveVariance));
}

#[test]
fn cumulant_moderate_variants() {
    let cm = Cumulants { alpha_n: 1e4, beta_n: 1.0, sigma2: 2.0, l: 0.9, k4: None };
    let t = 350.0;
    let up = cumulant_moderate(&cm, t).unwrap();
    let lo = cumulant_moderate_lower(&cm, t).unwrap();
    let two = cumulant_moderate_two_sided(&cm, t).unwrap();
    assert!((two.prob - (up.prob + lo.prob)).abs() < 1e-12 * two.prob);
    let uni = cumulant_moderate_uniform(&cm, t).unwrap();
    let u = t / 100.0;
    assert!((uni.prob / (gaussian_tail(u) * up.correction) - 1.0).abs() < 1e-12);
}

#[test]
fn petrov_examples() {
    assert_eq!(petrov_coefficients(&[1.0, 0.0, 0.0], 4).unwrap(), vec![-0.5, 0.0, 0.0]);
    assert!((petrov_coefficients(&[1.0f64, 6.0], 3).unwrap()[1] - 1.0).abs() < 1e-15);
    assert!((petrov_coefficients(&[1.0f64, 1.0, 27.0], 4).unwrap()[2] - 1.0).abs() < 1e-15);
    assert_eq!(petrov_coefficients(&[1.0, 1.0, 1.0, 1.0], 5), Err(Error::UnsupportedOrder(5)));
}

proptest! {
    #[test]
    fn petrov_agrees_with_series_reversion(k3 in -3.0f64..3.0, k4 in -5.0f64..5.0) {
        let a = petrov_coefficients(&[1.0, k3, k4], 4).unwrap();
        let b = legendre_series(&[1.0, k3, k4], 4);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn lattice_tail_over_point_mass(x in 1.05f64..4.0) {
        let m = poisson_model(50.0, Psi::inv_gamma_exp());
        let x = (50.0 * x).round() / 50.0;
        let p = lattice_point_mass(&m, x, 0).unwrap();
        let t = lattice_tail(&m, x).unwrap();
        let h = m.law.solve_saddle(x).unwrap().h;
        prop_assert!((t.prob / p.prob - 1.0 / (1.0 - (-h).exp())).abs() < 1e-12 * t.prob / p.prob);
    }

    #[test]
    fn borel_half_line_is_nonlattice_tail(b in 1.1f64..5.0) {
        let m = Model::new(Law::exponential(1.0).unwrap(), 40.0, Psi::exp_monomial(0.5, 3)).unwrap();
        let bb = borel_bound(&m, &[(b, f64::INFINITY)]).unwrap();
        let nl = nonlattice_tail(&m, b).unwrap();
        prop_assert!((bb.prob_bound / nl.prob - 1.0).abs() < 1e-12);
        prop_assert!(bb.lower_tight);
    }

    #[test]
    fn berry_esseen_stays_in_unit_interval(x in -8.0f64..8.0, t in 25.0f64..500.0) {
        let m = Model::new(Law::exponential(1.0).unwrap(), t, Psi::constant()).unwrap();
        let g = berry_esseen_cdf(&m, x).unwrap();
        prop_assert!((-1e-3..=1.0 + 1e-3).contains(&g));
    }
}

#[test]
fn borel_examples() {
    let m = Model::new(Law::gaussian(0.0, 1.0).unwrap(), 50.0, Psi::constant()).unwrap();
    let one = borel_bound(&m, &[(1.0, f64::INFINITY)]).unwrap();
    let two = borel_bound(&m, &[(f64::NEG_INFINITY, -1.0), (1.0, f64::INFINITY)]).unwrap();
    assert_eq!(two.minimizers.len(), 2);
    assert!((two.constant / one.constant - 2.0).abs() < 1e-12);
    let inf = borel_bound(&m, &[(-0.5, 0.5)]).unwrap();
    assert!(inf.constant.is_infinite());
    let near = borel_bound(&m, &[(f64::NEG_INFINITY, -3.0), (1.0, 2.0)]).unwrap();
    assert_eq!(near.minimizers, vec![1.0]);
    let single = borel_bound(&m, &[(1.0, 1.0)]).unwrap();
    assert!(!single.lower_tight);
    let e = Model::new(Law::exponential(1.0).unwrap(), 50.0, Psi::constant()).unwrap();
    assert_eq!(borel_bound(&e, &[(0.1, 0.2)]), Err(Error::NotAdmissible));
}

#[test]
fn berry_esseen_basics_and_gamma_sums() {
    let g = Model::new(Law::gaussian(0.0, 1.0).unwrap(), 30.0, Psi::constant()).unwrap();
    for x in [-2.0, 0.0, 1.3] {
        assert!((berry_esseen_cdf(&g, x).unwrap() - normal_cdf(x)).abs() < 1e-15);
    }
    let m = Model::new(Law::exponential(1.0).unwrap(), 100.0, Psi::constant()).unwrap();
    assert!((berry_esseen_cdf(&m, 40.0).unwrap() - 1.0).abs() < 1e-12);
    let (mut d_g, mut d_phi) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let x = -4.0 + 8.0 * i as f64 / 199.0;
        let exact = statrs::function::gamma::gamma_lr(100.0, 100.0 + 10.0 * x);
        d_g = d_g.max((exact - berry_esseen_cdf(&m, x).unwrap()).abs());
        d_phi = d_phi.max((exact - normal_cdf(x)).abs());
    }
    assert!(d_phi >= 3.0 * d_g, "{d_phi} {d_g}");
}
