use crate::deviation::{lattice_point_mass, lattice_tail, nonlattice_tail, ModPhiModel};
use crate::error::{Error, Result};
use crate::law::ReferenceLaw;
use crate::limiting::LimitingFunction;
use crate::special::ln_gamma;

#[derive(Clone, Debug)]
pub enum IidLaw {
    Bernoulli(f64),
    /// Exponential(1)
    Exponential,
    /// Any reference law; no exact oracle.
    Custom(ReferenceLaw<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub estimate: f64,
    pub log_estimate: f64,
    pub exact: Option<f64>,
    pub log_exact: Option<f64>,
    pub ratio: Option<f64>,
}

impl Comparison {
    fn new(log_estimate: f64, log_exact: Option<f64>) -> Self {
        Self {
            estimate: log_estimate.exp(),
            log_estimate,
            exact: log_exact.map(f64::exp),
            log_exact,
            ratio: log_exact.map(|e| (log_estimate - e).exp()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BahadurRao {
    pub n: usize,
    pub x: f64,
    /// Point mass P[S_n = nx] (lattice laws only).
    pub point: Option<Comparison>,
    /// P[S_n ≥ nx]
    pub tail: Comparison,
}

pub fn binomial_log_pmf(n: usize, q: f64, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
        + k as f64 * q.ln()
        + (n - k) as f64 * (-q).ln_1p()
}

/// log P[Bin(n,q) ≥ k], summing the decreasing upper terms by their ratio.
pub fn binomial_log_sf(n: usize, q: f64, k: usize) -> f64 {
    let lead = binomial_log_pmf(n, q, k);
    let r = q / (1.0 - q);
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in k..n {
        term *= (n - j) as f64 / (j + 1) as f64 * r;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    lead + sum.ln()
}

/// log P[Gamma(n,1) ≥ y] = log(e^{−y} Σ_{k<n} y^k/k!).
pub fn gamma_log_sf(n: usize, y: f64) -> f64 {
    let top = (n - 1) as f64;
    let lead = -y + top * y.ln() - ln_gamma(top + 1.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in (1..n).rev() {
        term *= k as f64 / y;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    lead + sum.ln()
}

/// Precise deviations of an i.i.d. sum S_n at level nx (ψ ≡ 1, t_n = n) against exact laws.
pub fn bahadur_rao_check(n: usize, x: f64, law: &IidLaw) -> Result<BahadurRao> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let reference = match law {
        IidLaw::Bernoulli(q) => ReferenceLaw::bernoulli(*q)?,
        IidLaw::Exponential => ReferenceLaw::exponential(1.0)?,
        IidLaw::Custom(l) => l.clone(),
    };
    let mean = reference.mean();
    if !(x > mean) {
        return Err(Error::OutOfRange { value: x, index: None });
    }
    let model = ModPhiModel::new(reference, n as f64, LimitingFunction::constant())?;
    match law {
        IidLaw::Bernoulli(q) => {
            let k = (n as f64 * x).round();
            if (k - n as f64 * x).abs() > 1e-9 || k > n as f64 {
                return Err(Error::OutOfRange { value: x, index: None });
            }
            let k = k as usize;
            let pm = lattice_point_mass(&model, x, 0)?;
            let tl = lattice_tail(&model, x)?;
            Ok(BahadurRao {
                n,
                x,
                point: Some(Comparison::new(pm.log_prob, Some(binomial_log_pmf(n, *q, k)))),
                tail: Comparison::new(tl.log_prob, Some(binomial_log_sf(n, *q, k))),
            })
        }
        IidLaw::Exponential => {
            let tl = nonlattice_tail(&model, x)?;
            Ok(BahadurRao {
                n,
                x,
                point: None,
                tail: Comparison::new(tl.log_prob, Some(gamma_log_sf(n, n as f64 * x))),
            })
        }
        IidLaw::Custom(l) => {
            let tl = if l.is_lattice() { lattice_tail(&model, x)? } else { nonlattice_tail(&model, x)? };
            Ok(BahadurRao { n, x, point: None, tail: Comparison::new(tl.log_prob, None) })
        }
    }
}
