use super::ExactDistribution;
use crate::deviation::ModPhiModel;
use crate::error::{Error, Result};
use crate::law::ReferenceLaw;
use crate::limiting::LimitingFunction;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const MAX_CYCLES_N: usize = 1_000_000;
pub const MAX_CYCLES_RATIONAL_N: usize = 500;

pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

/// Law of the number of cycles of a uniform permutation of size n, as a
/// convolution of Bernoulli(1/i), truncated where the masses underflow.
pub fn cycles_exact(n: usize) -> Result<ExactDistribution> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    if n > MAX_CYCLES_N {
        return Err(Error::TooLarge(format!("n = {n} exceeds {MAX_CYCLES_N}")));
    }
    let kcap = n.min((10.0 * (n as f64).ln() + 40.0) as usize);
    let mut dp = vec![0.0; kcap + 1];
    dp[1] = 1.0;
    for i in 2..=n {
        let p = 1.0 / i as f64;
        let top = i.min(kcap);
        for k in (1..=top).rev() {
            dp[k] = dp[k] * (1.0 - p) + dp[k - 1] * p;
        }
    }
    let total: f64 = dp.iter().sum();
    for m in dp.iter_mut() {
        *m /= total;
    }
    ExactDistribution::new(0, 1, dp)
}

/// Exact masses |s(n,k)|/n! for k = 0..=n.
pub fn cycles_exact_rational(n: usize) -> Result<Vec<BigRational>> {
    if n > MAX_CYCLES_RATIONAL_N {
        return Err(Error::TooLarge(format!("n = {n} exceeds {MAX_CYCLES_RATIONAL_N}")));
    }
    let mut c = vec![BigInt::one()];
    for i in 1..=n {
        let mut next = vec![BigInt::zero(); i + 1];
        for k in 0..i {
            next[k + 1] += &c[k];
            next[k] += &c[k] * BigInt::from(i - 1);
        }
        c = next;
    }
    let fact: BigInt = (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    Ok(c.into_iter().map(|x| BigRational::new(x, fact.clone())).collect())
}

/// ∏_{i ≤ n} (1 + (e^z − 1)/i)
pub fn cycles_mgf(n: usize, z: Complex64) -> Complex64 {
    let u = z.exp() - 1.0;
    (1..=n).map(|i| (u / i as f64 + 1.0).ln()).sum::<Complex64>().exp()
}

/// mgf · e^{−(e^z−1) log n}, which tends to 1/Γ(e^z).
pub fn cycles_psi_n(n: usize, z: Complex64) -> Complex64 {
    let u = z.exp() - 1.0;
    cycles_mgf(n, z) * (-u * (n as f64).ln()).exp()
}

/// Mod-Poisson model with t_n = log n and ψ = 1/Γ(e^z).
pub fn cycles_model(n: usize) -> Result<ModPhiModel<f64>> {
    if n < 2 {
        return Err(Error::Invalid("need n ≥ 2 so that log n > 0".into()));
    }
    ModPhiModel::new(ReferenceLaw::poisson(1.0)?, (n as f64).ln(), LimitingFunction::inv_gamma_exp())
}
