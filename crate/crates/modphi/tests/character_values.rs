use modphi::characters::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn omega_q() -> ThomaParameter<BigRational> {
    ThomaParameter::new(vec![q(3, 5), q(3, 10)], vec![]).unwrap()
}

fn hook_dim(lambda: &[usize]) -> u128 {
    let n: usize = lambda.iter().sum();
    let mut hooks = 1u128;
    for (i, &row) in lambda.iter().enumerate() {
        for j in 0..row {
            let below = lambda[i + 1..].iter().filter(|&&r| r > j).count();
            hooks *= (row - j + below) as u128;
        }
    }
    (1..=n as u128).product::<u128>() / hooks
}

#[test]
fn power_sums() {
    let w = ThomaParameter::new(vec![0.6f64, 0.3], vec![]).unwrap();
    assert_eq!(w.power_sum(1), 1.0);
    assert!((w.power_sum(2) - 0.45).abs() < 1e-15);
    let b = ThomaParameter::new(vec![], vec![0.4f64]).unwrap();
    assert!((b.power_sum(4) + 0.4f64.powi(4)).abs() < 1e-15);
    assert!((b.power_sum(3) - 0.064).abs() < 1e-15);
    assert_eq!(w.tau(&[1, 1, 1]), 1.0);
    assert!((w.tau(&[2, 2]) - 0.45f64.powi(2)).abs() < 1e-15);
    assert!(ThomaParameter::new(vec![0.3f64, 0.6], vec![]).is_err());
    assert!(ThomaParameter::new(vec![0.7f64], vec![0.4]).is_err());
    assert!((ThomaParameter::new(vec![0.5f64], vec![0.2]).unwrap().gamma() - 0.3).abs() < 1e-15);
}

#[test]
fn small_character_tables() {
    // S(3): rows (3), (2,1), (1,1,1); columns (3), (2,1), (1,1,1)
    let t = CharacterTable::new(3).unwrap();
    let got: Vec<Vec<i64>> = (0..3).map(|l| (0..3).map(|m| t.value(l, m)).collect()).collect();
    assert_eq!(got, vec![vec![1, 1, 1], vec![-1, 0, 2], vec![1, -1, 1]]);
    assert_eq!(character(&[2, 2], &[2, 2]).unwrap(), 2);
    assert_eq!(character(&[3, 1], &[2, 2]).unwrap(), -1);
    assert_eq!(character(&[2, 1, 1], &[4]).unwrap(), 1);
}

#[test]
fn dimensions_match_hook_lengths_and_rows_are_orthonormal() {
    for n in 1..=10 {
        let t = CharacterTable::new(n).unwrap();
        let parts = t.partitions();
        for (l, lambda) in parts.iter().enumerate() {
            assert_eq!(t.dim(l) as u128, hook_dim(lambda), "{lambda:?}");
        }
        if n <= 8 {
            let nf: u128 = (1..=n as u128).product();
            for a in 0..parts.len() {
                for b in 0..parts.len() {
                    let s: i128 = (0..parts.len())
                        .map(|m| (t.value(a, m) as i128) * (t.value(b, m) as i128) * (nf / z_mu(&parts[m])) as i128)
                        .sum();
                    assert_eq!(s, if a == b { nf as i128 } else { 0 });
                }
            }
        }
    }
    assert!(matches!(CharacterTable::new(13), Err(modphi::Error::TooLarge(_))));
}

#[test]
fn two_point_measure_and_trivial_trace() {
    let w = ThomaParameter::new(vec![q(1, 2)], vec![q(1, 4)]).unwrap();
    let p2 = w.power_sum(2);
    let m = central_measure(&w, 2).unwrap();
    assert_eq!(m[0], (vec![2], (BigRational::one() + &p2) / q(2, 1)));
    assert_eq!(m[1], (vec![1, 1], (BigRational::one() - &p2) / q(2, 1)));
    let one = ThomaParameter::new(vec![q(1, 1)], vec![]).unwrap();
    for n in 1..=8 {
        let m = central_measure(&one, n).unwrap();
        assert_eq!(m[0].1, BigRational::one());
        assert!(m[1..].iter().all(|(_, p)| p.is_zero()));
        let k = char_cumulants_exact(&one, &[2], n.max(2), 2).unwrap();
        assert!(k[1].is_zero());
    }
}

#[test]
fn first_cumulant_is_the_trace() {
    let w = ThomaParameter::new(vec![q(1, 2), q(1, 5)], vec![q(1, 6)]).unwrap();
    for n in 1..=8 {
        for k in 1..=n {
            for rho in partitions(k) {
                let c = char_cumulants_exact(&w, &rho, n, 1).unwrap();
                assert_eq!(c[0], w.tau(&rho), "n={n} rho={rho:?}");
            }
        }
    }
}

#[test]
fn sigma2_and_degenerate_case() {
    let w = ThomaParameter::new(vec![0.6f64, 0.3], vec![]).unwrap();
    let c = sigma2_l_char(&w, 2).unwrap();
    assert!((c.sigma2 - 0.162).abs() < 1e-14 && !c.degenerate);
    let e = ThomaParameter::new(vec![q(1, 2), q(1, 2)], vec![]).unwrap();
    let d = sigma2_l_char(&e, 2).unwrap();
    assert!(d.sigma2.is_zero() && d.degenerate);
    let (s, _) = general_mu_limits(&w, &[1]).unwrap();
    assert!(s.abs() < 1e-15);
}

#[test]
fn cycle_limits_reduce_to_the_closed_forms() {
    let w = omega_q();
    for k in 2..=5 {
        let c = sigma2_l_char(&w, k).unwrap();
        let (s, l) = general_mu_limits(&w, &[k]).unwrap();
        assert_eq!(s, c.sigma2);
        assert_eq!(l, c.l);
    }
}

#[test]
fn interpolated_leading_coefficients_are_the_limits() {
    let w = omega_q();
    // (ρ, r, n-range): degree of (n↓k)^r κ^(r) is rk − r + 1
    let cases: [(&[usize], usize, std::ops::RangeInclusive<usize>); 6] = [
        (&[2], 2, 2..=6),
        (&[2], 3, 2..=7),
        (&[3], 2, 3..=9),
        (&[2, 1], 2, 3..=9),
        (&[2, 1], 3, 3..=11),
        (&[2, 2], 2, 4..=12),
    ];
    for (rho, r, range) in cases {
        let ns: Vec<usize> = range.collect();
        let interp = char_polynomiality_check(&w, rho, r, &ns).unwrap();
        assert!(interp.residual.is_zero(), "{rho:?} r={r}");
        let (s, l) = general_mu_limits(&w, rho).unwrap();
        let expect = if r == 2 { s } else { l };
        let deg = r * rho.iter().sum::<usize>() + 1 - r;
        assert_eq!(interp.coeffs.len(), deg + 1);
        assert_eq!(interp.coeffs[deg], expect, "{rho:?} r={r}");
    }
    assert!(matches!(
        char_polynomiality_check(&w, &[2], 2, &[2, 3, 4, 5]),
        Err(modphi::Error::InsufficientPoints { needed: 5, got: 4 })
    ));
}

#[test]
fn variance_trend_and_bound() {
    let w = ThomaParameter::new(vec![0.6f64, 0.3], vec![]).unwrap();
    let mut last = 0.0;
    for n in [6, 8, 10] {
        let k = char_cumulants_exact(&w, &[2], n, 4).unwrap();
        let nk2 = n as f64 * k[1];
        assert!(n == 6 || nk2 < last);
        last = nk2;
        for r in 1..=4 {
            assert!(k[r - 1].abs() <= char_cumulant_bound(2, n, r) + 1e-12);
        }
    }
    // the 1/n correction is still large here: (n↓2)²κ² = 0.162n³ + 1.109n² − 1.271n
    assert!((last - (16.2 + 11.09 - 1.271) / 81.0).abs() < 1e-12, "{last}");
}

#[test]
fn bound_holds_for_several_cycle_types() {
    let w = ThomaParameter::new(vec![q(1, 3), q(1, 4)], vec![q(1, 5)]).unwrap();
    for n in 4..=10 {
        for rho in [vec![2], vec![3], vec![2, 2], vec![4]] {
            let k: usize = rho.iter().sum();
            if k > n {
                continue;
            }
            let c = char_cumulants_exact(&w, &rho, n, 3).unwrap();
            for r in 1..=3 {
                assert!(c[r - 1].to_f64().unwrap().abs() <= char_cumulant_bound(k, n, r) + 1e-12);
            }
        }
    }
}

#[test]
fn two_sided_display() {
    let w = ThomaParameter::new(vec![0.6f64, 0.3], vec![]).unwrap();
    let c = sigma2_l_char(&w, 2).unwrap();
    let (n, x) = (10_000, 2.0);
    let e = character_deviation(&w, 2, n, x).unwrap();
    let expect = 2.0 * (-x * x / (2.0 * c.sigma2)).exp() / (2.0 * std::f64::consts::PI * x * x / c.sigma2).sqrt()
        * (c.l * x.powi(3) / (6.0 * c.sigma2.powi(3) * 100.0)).cosh();
    assert!((e.prob / expect - 1.0).abs() < 1e-12);
    let flat = ThomaParameter::new(vec![0.5f64, 0.5], vec![]).unwrap();
    assert!(character_deviation(&flat, 2, n, x).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn measures_are_probabilities(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, d in 0.0f64..1.0) {
        let mut alpha = vec![a, b * (1.0 - a)];
        alpha.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let rest = 1.0 - alpha[0] - alpha[1];
        let beta = vec![c * rest * d.max(0.5), c * rest * (1.0 - d.max(0.5))];
        let w = ThomaParameter::new(alpha, beta).unwrap();
        let m = central_measure(&w, 8).unwrap();
        let total: f64 = m.iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(m.iter().all(|(_, p)| *p >= -1e-12 && *p <= 1.0 + 1e-12));
    }
}
