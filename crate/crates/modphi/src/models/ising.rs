use super::ExactDistribution;
use crate::deviation::CumulantModel;
use crate::error::{Error, Result};

pub const MAX_ISING_N: usize = 4000;

/// Eigenvalues cosh z ± √(sinh²z + e^{−2β}) of the transfer matrix.
pub fn ising_eigenvalues(beta: f64, z: f64) -> (f64, f64) {
    let s = (z.sinh().powi(2) + (-2.0 * beta).exp()).sqrt();
    (z.cosh() + s, z.cosh() - s)
}

fn log_trace(n: usize, beta: f64, z: f64) -> f64 {
    let (lp, lm) = ising_eigenvalues(beta, z);
    n as f64 * lp.ln() + (lm / lp).powi(n as i32).ln_1p()
}

/// log E[e^{z M_n}] on the ring of n spins with weight e^{−β·#disagreements}.
pub fn ising_log_mgf(n: usize, beta: f64, z: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Invalid("the ring needs n ≥ 3".into()));
    }
    Ok(log_trace(n, beta, z) - log_trace(n, beta, 0.0))
}

pub fn ising_mgf(n: usize, beta: f64, z: f64) -> Result<f64> {
    ising_log_mgf(n, beta, z).map(f64::exp)
}

/// Exact law of M_n on {−n, −n+2, …, n} by a transfer DP conditioned on the first spin.
pub fn ising_exact(n: usize, beta: f64) -> Result<ExactDistribution> {
    if n < 3 {
        return Err(Error::Invalid("the ring needs n ≥ 3".into()));
    }
    if n > MAX_ISING_N {
        return Err(Error::TooLarge(format!("n = {n} exceeds {MAX_ISING_N}")));
    }
    let w = (-beta).exp();
    let scale = 1.0 / (1.0 + w);
    let mut total = vec![0.0; n + 1];
    for first_up in [false, true] {
        // index = number of + spins so far
        let mut up = vec![0.0; n + 1];
        let mut down = vec![0.0; n + 1];
        if first_up {
            up[1] = 1.0;
        } else {
            down[0] = 1.0;
        }
        for i in 2..=n {
            for j in (0..=i).rev() {
                let nu = if j > 0 { (up[j - 1] + down[j - 1] * w) * scale } else { 0.0 };
                let nd = (down[j] + up[j] * w) * scale;
                up[j] = nu;
                down[j] = nd;
            }
        }
        for j in 0..=n {
            total[j] += if first_up { up[j] + down[j] * w } else { down[j] + up[j] * w };
        }
    }
    let z: f64 = total.iter().sum();
    ExactDistribution::new(-(n as i64), 2, total.into_iter().map(|m| m / z).collect())
}

/// Cumulant scheme κ²(M_n) ≈ e^β n, κ⁴(M_n) ≈ −(3e^{3β} − e^β) n, κ³ = 0.
pub fn ising_cumulant_model(n: usize, beta: f64) -> CumulantModel<f64> {
    CumulantModel {
        alpha_n: n as f64,
        beta_n: 1.0,
        sigma2: beta.exp(),
        l: 0.0,
        k4: Some(-(3.0 * (3.0 * beta).exp() - beta.exp())),
    }
}
