use crate::error::{Error, Result};
use crate::limiting::{weierstrass_integers_closed, weierstrass_product, IndexSet};
use crate::special::EULER_GAMMA;
use num_complex::Complex64;

pub const MAX_SIEVE: usize = 100_000_000;
/// Meissel–Mertens constant B₁ = γ + Σ_p (log(1 − 1/p) + 1/p).
pub const MERTENS_B1: f64 = 0.261_497_212_847_642_8;
/// Truncation of the prime product in the comparison display.
pub const PRIME_PRODUCT_CUTOFF: usize = 2_000_000;

/// ω(k) for 0 ≤ k ≤ n (ω(0) = ω(1) = 0).
pub fn omega_sieve(n: usize) -> Result<Vec<u8>> {
    if n > MAX_SIEVE {
        return Err(Error::TooLarge(format!("sieve bound {n} exceeds {MAX_SIEVE}")));
    }
    let mut w = vec![0u8; n + 1];
    for p in 2..=n {
        if w[p] == 0 {
            let mut m = p;
            while m <= n {
                w[m] += 1;
                m += p;
            }
        }
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaStats {
    pub n: usize,
    /// histogram[m] = #{1 ≤ k ≤ n : ω(k) = m}
    pub histogram: Vec<u64>,
}

impl OmegaStats {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("sieve bound must be positive".into()));
        }
        let w = omega_sieve(n)?;
        let mut histogram = vec![0u64; 16];
        for &x in &w[1..] {
            histogram[x as usize] += 1;
        }
        while histogram.len() > 1 && *histogram.last().unwrap() == 0 {
            histogram.pop();
        }
        Ok(Self { n, histogram })
    }

    /// (1/N) Σ_{k ≤ N} e^{z ω(k)}
    pub fn empirical_mgf(&self, z: f64) -> f64 {
        self.histogram.iter().enumerate().map(|(m, &c)| c as f64 * (z * m as f64).exp()).sum::<f64>() / self.n as f64
    }

    pub fn mean(&self) -> f64 {
        self.histogram.iter().enumerate().map(|(m, &c)| (m as u64 * c) as f64).sum::<f64>() / self.n as f64
    }

    /// #{k ≤ N : ω(k) ≥ m}
    pub fn tail_count(&self, m: usize) -> u64 {
        self.histogram.iter().skip(m).sum()
    }
}

/// e^{(log log N + c)(e^z−1)} Π_P(e^z−1) Π_ℕ*(e^z−1), with c = γ as displayed or
/// c = B₁ when `mertens` is set (the constant matching the Selberg–Delange main term).
pub fn omega_display(n: f64, z: f64, mertens: bool) -> Result<f64> {
    if !(n > std::f64::consts::E) {
        return Err(Error::Invalid("need N > e so that log log N is defined".into()));
    }
    let x = z.exp_m1();
    let c = if mertens { MERTENS_B1 } else { EULER_GAMMA };
    let pp = weierstrass_product(x, IndexSet::Primes, PRIME_PRODUCT_CUTOFF)?.value;
    let pn = weierstrass_integers_closed(Complex64::new(x, 0.0)).re;
    Ok(((n.ln().ln() + c) * x).exp() * pp * pn)
}
