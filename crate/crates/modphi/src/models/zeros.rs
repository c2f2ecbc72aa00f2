use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

const ZEROS_CHUNK: u64 = 4096;
const P_FLOOR: f64 = 1e-18;

/// r² with h = 4π r²/(1−r²).
pub fn hyperbolic_r2(h: f64) -> f64 {
    h / (h + 4.0 * PI)
}

fn check(h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Invalid(format!("hyperbolic area {h} must be positive")));
    }
    Ok(hyperbolic_r2(h))
}

/// log E[e^{z N/h^{1/3}}] = Σ_k log(1 + r^{2k}(e^{z/h^{1/3}} − 1)).
pub fn hyperbolic_zeros_cgf(h: f64, z: f64) -> Result<f64> {
    let r2 = check(h)?;
    let u = (z / h.cbrt()).exp_m1();
    let mut p = r2;
    let mut s = 0.0;
    while p >= P_FLOOR {
        s += (p * u).ln_1p();
        p *= r2;
    }
    Ok(s)
}

/// E[N] = r²/(1−r²) = h/4π
pub fn hyperbolic_zeros_mean(h: f64) -> f64 {
    h / (4.0 * PI)
}

/// Draws of N = Σ_k B(r^{2k}) by jumping between successes: with Λ the prefix sums of
/// −log(1−p_k), the next success after index j is the first m with Λ(m) − Λ(j) ≥ Exp(1).
pub fn sample_nh(h: f64, draws: u64, seed: u64) -> Result<Vec<u64>> {
    let r2 = check(h)?;
    let mut lambda = vec![0.0];
    let mut p = r2;
    while p >= P_FLOOR {
        let last = *lambda.last().unwrap();
        lambda.push(last - (-p).ln_1p());
        p *= r2;
    }
    let chunks = draws.div_ceil(ZEROS_CHUNK);
    let out: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let m = ZEROS_CHUNK.min(draws - c * ZEROS_CHUNK);
            (0..m)
                .map(|_| {
                    let mut pos = 0usize;
                    let mut count = 0u64;
                    loop {
                        let e = -(1.0 - rng.gen::<f64>()).ln();
                        let target = lambda[pos] + e;
                        let next = pos + lambda[pos..].partition_point(|&l| l < target);
                        if next >= lambda.len() {
                            break;
                        }
                        count += 1;
                        pos = next;
                    }
                    count
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// Coefficient of z³ in the cgf, read off its odd part: the even part carries an O(1)
/// variance correction (Var N = h/8π + 1/4 + O(1/h)) of the same size as the cubic term.
pub fn hyperbolic_cubic_coefficient(h: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::Invalid("z must be nonzero".into()));
    }
    let odd = (hyperbolic_zeros_cgf(h, z)? - hyperbolic_zeros_cgf(h, -z)?) / 2.0;
    Ok((odd - hyperbolic_zeros_mean(h) * z / h.cbrt()) / z.powi(3))
}
