use super::{bernoulli_convolution, ExactDistribution};
use crate::deviation::{lattice_tail, DeviationEstimate, ModPhiModel};
use crate::error::{Error, Result};
use crate::law::ReferenceLaw;
use crate::limiting::LimitingFunction;

/// Below this value of t_n the estimate is flagged as outside its regime.
pub const SMALL_T: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct PoissonBernoulli {
    pub p: Vec<f64>,
    pub dist: ExactDistribution,
    pub t_n: f64,
    pub psi: LimitingFunction<f64>,
}

/// Σ_k B(p_k) against the Poisson(Σ p_k) reference.
pub fn poisson_bernoulli(p: &[f64]) -> Result<PoissonBernoulli> {
    if let Some((i, &bad)) = p.iter().enumerate().find(|(_, &x)| !(0.0..1.0).contains(&x)) {
        return Err(Error::OutOfRange { value: bad, index: Some(i) });
    }
    let dist = ExactDistribution::new(0, 1, bernoulli_convolution(p))?;
    let t_n = p.iter().sum();
    Ok(PoissonBernoulli { p: p.to_vec(), dist, t_n, psi: LimitingFunction::poisson_bernoulli(p.to_vec()) })
}

impl PoissonBernoulli {
    /// Estimate of P[X ≥ x t_n] (x t_n an integer).
    pub fn tail_estimate(&self, x: f64) -> Result<DeviationEstimate<f64>> {
        if !(self.t_n > 0.0) {
            return Err(Error::Invalid("all p_k vanish, the law is a point mass at 0".into()));
        }
        let model = ModPhiModel::new(ReferenceLaw::poisson(1.0)?, self.t_n, self.psi.clone())?;
        let mut e = lattice_tail(&model, x)?;
        if self.t_n < SMALL_T {
            e.flags.push("t_n_small".to_string());
        }
        Ok(e)
    }
}
