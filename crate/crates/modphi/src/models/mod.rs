//! Concrete models with exact oracles.

pub mod cycles;
pub mod iid;
pub mod ising;
pub mod omega;
pub mod pb;
pub mod series;
pub mod wperm;
pub mod zeros;

pub use cycles::*;
pub use iid::*;
pub use ising::*;
pub use omega::*;
pub use pb::*;
pub use series::Series;
pub use wperm::*;
pub use zeros::*;

use crate::error::{Error, Result};

/// Law on the grid offset + step·i with explicit masses.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    pub offset: i64,
    pub step: i64,
    pub masses: Vec<f64>,
}

impl ExactDistribution {
    pub fn new(offset: i64, step: i64, masses: Vec<f64>) -> Result<Self> {
        if step <= 0 {
            return Err(Error::Invalid("support step must be positive".into()));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::Invalid("masses must be finite and nonnegative".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("masses sum to {total}")));
        }
        Ok(Self { offset, step, masses })
    }

    pub fn point_mass(x: i64) -> Self {
        Self { offset: x, step: 1, masses: vec![1.0] }
    }

    pub fn value(&self, i: usize) -> i64 {
        self.offset + self.step * i as i64
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses.iter().enumerate().map(move |(i, &m)| (self.value(i), m))
    }

    fn index_at_or_above(&self, x: i64) -> usize {
        if x <= self.offset {
            return 0;
        }
        let d = x - self.offset;
        ((d + self.step - 1) / self.step) as usize
    }

    pub fn pmf(&self, x: i64) -> f64 {
        let d = x - self.offset;
        if d < 0 || d % self.step != 0 {
            return 0.0;
        }
        self.masses.get((d / self.step) as usize).copied().unwrap_or(0.0)
    }

    /// P[X ≥ x], summed from the far end.
    pub fn sf(&self, x: i64) -> f64 {
        let i = self.index_at_or_above(x);
        if i >= self.masses.len() {
            return 0.0;
        }
        self.masses[i..].iter().rev().sum()
    }

    /// P[X ≤ x]
    pub fn cdf(&self, x: i64) -> f64 {
        let i = self.index_at_or_above(x + 1).min(self.masses.len());
        self.masses[..i].iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.support().map(|(x, m)| x as f64 * m).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.support().map(|(x, m)| (x as f64 - mu).powi(2) * m).sum()
    }

    /// log E[e^{zX}] by log-sum-exp.
    pub fn log_mgf(&self, z: f64) -> f64 {
        let terms: Vec<f64> = self.support().filter(|&(_, m)| m > 0.0).map(|(x, m)| m.ln() + z * x as f64).collect();
        let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
    }

    pub fn mgf(&self, z: f64) -> f64 {
        self.log_mgf(z).exp()
    }
}

/// Bernoulli(p_k) convolution by dynamic programming; masses on 0..=len.
pub fn bernoulli_convolution(p: &[f64]) -> Vec<f64> {
    let mut dp = vec![0.0; p.len() + 1];
    dp[0] = 1.0;
    for (i, &pk) in p.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            dp[k] = dp[k] * (1.0 - pk) + dp[k - 1] * pk;
        }
        dp[0] *= 1.0 - pk;
    }
    dp
}
