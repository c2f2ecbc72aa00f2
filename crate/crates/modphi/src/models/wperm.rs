use super::series::Series;
use crate::error::{Error, Result};
use crate::special::ln_gamma;

pub const MAX_WPERM_N: usize = 4000;

/// Cycle weights θ_m: a finite table for m = 1..=len, then a constant tail θ.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSpec {
    pub table: Vec<f64>,
    pub tail: f64,
}

impl ThetaSpec {
    pub fn constant(theta: f64) -> Self {
        Self { table: vec![], tail: theta }
    }

    pub fn theta(&self, m: usize) -> f64 {
        self.table.get(m - 1).copied().unwrap_or(self.tail)
    }

    /// K = Σ_m (θ_m − θ)/m, so that g_Θ(t) = θ log(1/(1−t)) + K + o(1).
    pub fn k_constant(&self) -> f64 {
        self.table.iter().enumerate().map(|(i, &t)| (t - self.tail) / (i + 1) as f64).sum()
    }
}

#[derive(Clone, Debug)]
pub struct WeightedPerm {
    pub spec: ThetaSpec,
    pub n_max: usize,
    g: Series<f64>,
    h: Vec<f64>,
}

impl WeightedPerm {
    pub fn new(spec: ThetaSpec, n_max: usize) -> Result<Self> {
        if n_max > MAX_WPERM_N {
            return Err(Error::TooLarge(format!("n_max = {n_max} exceeds {MAX_WPERM_N}")));
        }
        if spec.table.iter().any(|&t| !(t >= 0.0)) || !(spec.tail > 0.0) {
            return Err(Error::NonPositiveWeights);
        }
        let g = Series::new((0..=n_max).map(|m| if m == 0 { 0.0 } else { spec.theta(m) / m as f64 }).collect(), n_max);
        let h = g.exp()?.coeffs().to_vec();
        Ok(Self { spec, n_max, g, h })
    }

    /// h_n = [tⁿ] exp(g_Θ(t))
    pub fn h(&self, n: usize) -> f64 {
        self.h[n]
    }

    pub fn h_list(&self) -> &[f64] {
        &self.h
    }

    /// h_n / (e^K n^{θ−1} / Γ(θ))
    pub fn h_ratio(&self, n: usize) -> f64 {
        let theta = self.spec.tail;
        let asym = (self.spec.k_constant() + (theta - 1.0) * (n as f64).ln() - ln_gamma(theta)).exp();
        self.h[n] / asym
    }

    /// E_Θ[e^{w X_n}] for every n ≤ n_max: [tⁿ] exp(e^w g_Θ(t)) / h_n.
    pub fn mgf_all(&self, w: f64) -> Result<Vec<f64>> {
        let b = self.g.scale(&w.exp()).exp()?;
        (0..=self.n_max)
            .map(|n| if self.h[n] == 0.0 { Err(Error::ZeroPartitionFunction(n)) } else { Ok(b.coeff(n) / self.h[n]) })
            .collect()
    }

    pub fn mgf(&self, n: usize, w: f64) -> Result<f64> {
        if n > self.n_max {
            return Err(Error::OutOfRange { value: n as f64, index: Some(n) });
        }
        let b = self.g.scale(&w.exp()).exp()?;
        if self.h[n] == 0.0 {
            return Err(Error::ZeroPartitionFunction(n));
        }
        Ok(b.coeff(n) / self.h[n])
    }

    /// mgf · e^{−(e^w−1)(K + θ log n)}, which tends to Γ(θ)/Γ(θe^w).
    pub fn psi_n(&self, n: usize, w: f64) -> Result<f64> {
        let k = self.spec.k_constant();
        Ok(self.mgf(n, w)? * (-(w.exp() - 1.0) * (k + self.spec.tail * (n as f64).ln())).exp())
    }
}
