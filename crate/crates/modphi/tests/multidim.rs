use modphi::deviation::{nonlattice_tail, ModPhiModel};
use modphi::law::ReferenceLaw;
use modphi::limiting::LimitingFunction;
use modphi::multidim::*;
use modphi::Error;
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::{E, PI, TAU};
use std::sync::Arc;

fn one() -> VecFn {
    Arc::new(|_: &[f64]| 1.0)
}

fn walk_psi() -> VecFn {
    Arc::new(|z: &[f64]| dwalk_kurtosis_psi(2, z).unwrap())
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn bessel_i0(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= (x / 2.0) * (x / 2.0) / (k as f64 * k as f64);
        sum += term;
    }
    sum
}

#[test]
fn full_circle_is_exactly_exponential() {
    for &(t, b) in &[(10.0, 1.0), (50.0, 0.7), (3.0, 2.0)] {
        let m = MultiModGaussianModel::isotropic(2, t, one()).unwrap();
        let s = ConicSector::Planar { theta1: 0.0, theta2: TAU, b };
        let est = conic_probability(&m, &s).unwrap();
        let exact = (-t * b * b / 2.0).exp();
        assert!((est.prob / exact - 1.0).abs() < 1e-10, "{} {}", est.prob, exact);
    }
}

#[test]
fn one_dimensional_points_match_nonlattice_tail() {
    let t = 200.0;
    let psi = LimitingFunction::exp_monomial(-0.25, 4);
    let vec_psi: VecFn = Arc::new(|z: &[f64]| (-z[0].powi(4) / 96.0).exp());
    let m = MultiModGaussianModel::isotropic(1, t, vec_psi).unwrap();
    let one_d = ModPhiModel::new(ReferenceLaw::gaussian(0.0, 1.0).unwrap(), t, psi).unwrap();
    for &b in &[0.5, 1.0, 1.5] {
        let c = conic_probability(&m, &ConicSector::Points { b, both_sides: false }).unwrap();
        let n = nonlattice_tail(&one_d, b).unwrap();
        assert!((c.log_prob - n.log_prob).abs() < 1e-8, "b={b}: {} {}", c.log_prob, n.log_prob);
        let two = conic_probability(&m, &ConicSector::Points { b, both_sides: true }).unwrap();
        assert!((two.prob / c.prob - 2.0).abs() < 1e-10);
    }
}

#[test]
fn walk_sector_matches_angular_display() {
    let n: f64 = 10_000.0;
    let t = n.sqrt();
    let m = MultiModGaussianModel::isotropic(2, t, walk_psi()).unwrap();
    for &(r, t1, t2) in &[(0.3, 0.0, PI / 4.0), (0.25, 0.2, 2.9), (0.35, 1.0, 1.3)] {
        let est = conic_probability(&m, &ConicSector::Planar { theta1: t1, theta2: t2, b: r }).unwrap();
        let f = |th: f64| {
            let (x, y) = (r * f64::cos(th), r * f64::sin(th));
            (-(x.powi(4) + y.powi(4) + 6.0 * x * x * y * y) / 96.0).exp()
        };
        let display = (-t * r * r / 2.0).exp() / TAU * simpson(f, t1, t2, 2000);
        assert!((est.prob / display - 1.0).abs() < 1e-9);
    }
}

#[test]
fn sectors_are_additive() {
    let m = MultiModGaussianModel::isotropic(2, 30.0, walk_psi()).unwrap();
    let b = 2.0;
    let p = |a: f64, c: f64| sector_integral(&m, &ConicSector::Planar { theta1: a, theta2: c, b }).unwrap().0;
    let whole = p(0.1, 4.0);
    let parts = p(0.1, 1.7) + p(1.7, 2.2) + p(2.2, 4.0);
    assert!((whole - parts).abs() < 1e-9 * whole);
}

#[test]
fn spherical_sectors_in_three_dimensions() {
    let m = MultiModGaussianModel::isotropic(3, 20.0, one()).unwrap();
    let b = 1.5;
    let all = ConicSector::Spherical { d: 3, b, indicator: Arc::new(|_: &[f64]| true) };
    let (area, ok) = sector_integral(&m, &all).unwrap();
    assert!(ok);
    assert!((area - 4.0 * PI * b * b).abs() < 1e-8);
    // a cap with smooth boundary in the angular grid: the upper hemisphere
    let half = ConicSector::Spherical { d: 3, b, indicator: Arc::new(|u: &[f64]| u[0] > 0.0) };
    let (h, _) = sector_integral(&m, &half).unwrap();
    assert!((h / area - 0.5).abs() < 1e-6);
    // leading order of P[chi_3 ≥ b√t] is √(2/π) s e^{−s²/2}
    let est = conic_probability(&m, &all).unwrap();
    let s = b * 20f64.sqrt();
    let asym = (2.0 / PI).sqrt() * s * (-s * s / 2.0).exp();
    assert!((est.prob / asym - 1.0).abs() < 1e-8);
}

#[test]
fn anisotropic_scaling_matrix() {
    let a = vec![vec![2.0, 0.0], vec![0.0, 0.5]];
    let psi: VecFn = Arc::new(|x: &[f64]| (0.1 * x[0]).exp());
    let m = MultiModGaussianModel::new(a, 10.0, psi).unwrap();
    let (v, _) = sector_integral(&m, &ConicSector::Planar { theta1: 0.0, theta2: TAU, b: 1.0 }).unwrap();
    // x = A⁻¹u, so ψ = exp(0.05 cos θ) and the integral is 2π I₀(0.05)
    assert!((v - TAU * bessel_i0(0.05)).abs() < 1e-10);
}

#[test]
fn degenerate_and_invalid_sectors() {
    let m = MultiModGaussianModel::isotropic(2, 10.0, one()).unwrap();
    assert!(matches!(
        conic_probability(&m, &ConicSector::Planar { theta1: 1.0, theta2: 1.0, b: 1.0 }),
        Err(Error::DegenerateSector)
    ));
    assert!(conic_probability(&m, &ConicSector::Planar { theta1: 0.0, theta2: 7.0, b: 1.0 }).is_err());
    assert!(conic_probability(&m, &ConicSector::Planar { theta1: 0.0, theta2: 1.0, b: 0.0 }).is_err());
    let m3 = MultiModGaussianModel::isotropic(3, 10.0, one()).unwrap();
    let empty = ConicSector::Spherical { d: 3, b: 1.0, indicator: Arc::new(|_: &[f64]| false) };
    assert!(matches!(conic_probability(&m3, &empty), Err(Error::DegenerateSector)));
    assert!(MultiModGaussianModel::new(vec![vec![1.0, 2.0], vec![2.0, 1.0]], 1.0, one()).is_err());
    assert!(MultiModGaussianModel::new(vec![vec![1.0, 0.1], vec![0.0, 1.0]], 1.0, one()).is_err());
    let bad: VecFn = Arc::new(|_: &[f64]| 2.0);
    assert!(MultiModGaussianModel::isotropic(2, 1.0, bad).is_err());
}

#[test]
fn angle_density_examples() {
    assert!((walk2d_angle_density(1e-3, 0.7) - 1.0 / TAU).abs() < 1e-12);
    let r = 96f64.powf(0.25);
    let ratio = walk2d_angle_density(r, 0.0) / walk2d_angle_density(r, PI / 4.0);
    assert!((ratio - E).abs() < 1e-12);
    for &r in &[0.5, 1.0, 2.0, 3.0] {
        let total = simpson(|th| walk2d_angle_density(r, th), 0.0, TAU, 4000);
        assert!((total - 1.0).abs() < 1e-10);
        // ∫ exp(−a sin²2θ) over a period is 2π e^{−a/2} I₀(a/2)
        let a = r.powi(4) / 96.0;
        let z = TAU * (-a / 2.0).exp() * bessel_i0(a / 2.0);
        assert!((walk2d_normalizer(r) / z - 1.0).abs() < 1e-10);
    }
}

#[test]
fn theoretical_bins_sum_to_one() {
    let b = walk2d_theoretical_bins(1.5, 36);
    assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    for i in 0..9 {
        assert!((b[i] - b[i + 9]).abs() < 1e-12);
        assert!((b[i] - b[8 - i]).abs() < 1e-12);
    }
}

#[test]
fn kurtosis_psi_values() {
    assert_eq!(dwalk_kurtosis_psi(2, &[0.0, 0.0]).unwrap(), 1.0);
    let z1: f64 = 1.7;
    assert!((dwalk_kurtosis_psi(2, &[z1, 0.0]).unwrap() - (-z1.powi(4) / 96.0).exp()).abs() < 1e-15);
    assert!(dwalk_kurtosis_psi(1, &[1.0]).is_err());
    assert!(dwalk_kurtosis_psi(3, &[1.0, 2.0]).is_err());
}

// fourth joint cumulant of a step by direct expectation over the 2d equally likely steps
fn brute_kappa4(z: &[f64]) -> f64 {
    let d = z.len();
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for i in 0..d {
        for s in [-1.0, 1.0] {
            let v = s * z[i];
            m2 += v * v / (2 * d) as f64;
            m4 += v.powi(4) / (2 * d) as f64;
        }
    }
    m4 - 3.0 * m2 * m2
}

#[test]
fn planar_step_cumulants() {
    // κ⁴ on e₁⊗⁴, e₂⊗⁴ and the mixed term (by polarization)
    assert!((brute_kappa4(&[1.0, 0.0]) + 0.25).abs() < 1e-15);
    assert!((brute_kappa4(&[0.0, 1.0]) + 0.25).abs() < 1e-15);
    let mixed = (brute_kappa4(&[1.0, 1.0]) + brute_kappa4(&[1.0, -1.0])
        - 2.0 * brute_kappa4(&[1.0, 0.0])
        - 2.0 * brute_kappa4(&[0.0, 1.0]))
        / 12.0;
    assert!((mixed + 0.25).abs() < 1e-15);
}

proptest! {
    #[test]
    fn kurtosis_psi_is_exp_of_kappa4(d in 2usize..6, seed in proptest::collection::vec(-2.0f64..2.0, 6)) {
        let z = &seed[..d];
        let lhs = dwalk_kurtosis_psi(d, z).unwrap().ln();
        prop_assert!((lhs - brute_kappa4(z) / 24.0).abs() < 1e-12);
    }

    #[test]
    fn angle_density_symmetries(r in 0.1f64..4.0, th in 0.0f64..TAU) {
        let f = walk2d_angle_density(r, th);
        prop_assert!((f - walk2d_angle_density(r, th + PI / 2.0)).abs() < 1e-12);
        prop_assert!((f - walk2d_angle_density(r, -th)).abs() < 1e-12);
    }
}

#[test]
fn unconditioned_walk_is_rotation_invariant() {
    let h = walk2d_conditional_mc(400, 0.0, 100_000, 11, 36, DEFAULT_BUDGET).unwrap();
    let (stat, dof) = h.rotation_chi_square();
    let p = 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat);
    assert!(p > 0.01, "chi2={stat} dof={dof} p={p}");
    assert_eq!(h.accepted, h.counts.iter().sum::<u64>());
}

#[test]
fn conditioned_quadrant_masses_agree() {
    let h = walk2d_conditional_mc(400, 0.4, 200_000, 5, 36, DEFAULT_BUDGET).unwrap();
    let q1: u64 = h.counts[0..9].iter().sum();
    let q2: u64 = h.counts[9..18].iter().sum();
    let n = h.accepted as f64;
    let (p1, p2) = (q1 as f64 / n, q2 as f64 / n);
    let se = (p1 * (1.0 - p1) / n + p2 * (1.0 - p2) / n).sqrt();
    assert!((p1 - p2).abs() < 3.0 * se, "{p1} {p2} {se}");
}

#[test]
fn sampling_is_reproducible_across_thread_counts() {
    let a = walk2d_conditional_mc(100, 0.2, 20_000, 42, 8, DEFAULT_BUDGET).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| walk2d_conditional_mc(100, 0.2, 20_000, 42, 8, DEFAULT_BUDGET).unwrap());
    assert_eq!(a, b);
    let c = walk2d_conditional_mc(100, 0.2, 20_000, 43, 8, DEFAULT_BUDGET).unwrap();
    assert_ne!(a.counts, c.counts);
}

#[test]
fn sampler_errors() {
    assert!(matches!(walk2d_conditional_mc(400, 0.1, 1000, 1, 36, 1e5), Err(Error::BudgetExceeded { .. })));
    assert!(matches!(walk2d_conditional_mc(100, 5.0, 100, 1, 36, DEFAULT_BUDGET), Err(Error::ZeroAcceptance)));
    assert!(walk2d_conditional_mc(50, 0.1, 100, 1, 36, DEFAULT_BUDGET).is_err());
    assert!(walk2d_conditional_mc(100, 0.1, 100, 1, 30, DEFAULT_BUDGET).is_err());
}

#[test]
fn estimator_variance_scales_inversely_with_trials() {
    let sizes = [500u64, 2000, 8000];
    let reps = 60;
    let mut pts = Vec::new();
    for &m in &sizes {
        let est: Vec<f64> = (0..reps)
            .map(|s| {
                let h = walk2d_conditional_mc(100, 0.0, m, 1000 + s, 4, DEFAULT_BUDGET).unwrap();
                h.counts[0] as f64 / h.accepted as f64
            })
            .collect();
        let mean = est.iter().sum::<f64>() / reps as f64;
        let var = est.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        pts.push(((m as f64).ln(), var.ln()));
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope =
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 1.0).abs() < 0.2, "slope {slope}");
}
