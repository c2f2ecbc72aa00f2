//! d-dimensional mod-Gaussian conic estimates and the planar random-walk
//! symmetry breaking at the critical scale.

use crate::deviation::{DeviationEstimate, Regime};
use crate::error::{Error, Result};
use crate::special::{gauss_legendre, integrate};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

pub type VecFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type Indicator = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Default cap on sampled elementary events.
pub const DEFAULT_BUDGET: f64 = 1e10;

#[derive(Clone)]
pub struct MultiModGaussianModel {
    pub d: usize,
    pub a: Vec<Vec<f64>>,
    pub t_n: f64,
    pub psi: VecFn,
    a_inv: Vec<Vec<f64>>,
}

#[derive(Clone)]
pub enum ConicSector {
    /// The points ±b (or +b only) of the real line.
    Points { b: f64, both_sides: bool },
    /// Planar sector {R e^{iθ}: R ≥ b, θ ∈ (θ₁, θ₂)}.
    Planar { theta1: f64, theta2: f64, b: f64 },
    /// Cone over a region of the unit sphere in ℝ^d given by an indicator.
    Spherical { d: usize, b: f64, indicator: Indicator },
}

impl ConicSector {
    pub fn dimension(&self) -> usize {
        match self {
            ConicSector::Points { .. } => 1,
            ConicSector::Planar { .. } => 2,
            ConicSector::Spherical { d, .. } => *d,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            ConicSector::Points { b, .. } | ConicSector::Planar { b, .. } | ConicSector::Spherical { b, .. } => *b,
        }
    }
}

fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let v = a[i][i] - s;
                if v <= 0.0 {
                    return None;
                }
                l[i][j] = v.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, p);
        inv.swap(c, p);
        let d = m[c][c];
        for j in 0..n {
            m[c][j] /= d;
            inv[c][j] /= d;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                for j in 0..n {
                    m[r][j] -= f * m[c][j];
                    inv[r][j] -= f * inv[c][j];
                }
            }
        }
    }
    inv
}

impl MultiModGaussianModel {
    pub fn new(a: Vec<Vec<f64>>, t_n: f64, psi: VecFn) -> Result<Self> {
        let d = a.len();
        if d == 0 || a.iter().any(|r| r.len() != d) {
            return Err(Error::Invalid("scaling matrix must be square".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if (a[i][j] - a[j][i]).abs() > 1e-12 * (a[i][j].abs() + a[j][i].abs()).max(1.0) {
                    return Err(Error::Invalid("scaling matrix must be symmetric".into()));
                }
            }
        }
        if cholesky(&a).is_none() {
            return Err(Error::Invalid("scaling matrix must be positive definite".into()));
        }
        if !(t_n > 0.0) {
            return Err(Error::Invalid("t_n must be positive".into()));
        }
        if (psi(&vec![0.0; d]) - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid("psi(0) must equal 1".into()));
        }
        let a_inv = invert(&a);
        Ok(Self { d, a, t_n, psi, a_inv })
    }

    pub fn isotropic(d: usize, t_n: f64, psi: VecFn) -> Result<Self> {
        let a = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::new(a, t_n, psi)
    }

    fn psi_on_sphere(&self, b: f64, u: &[f64]) -> f64 {
        let x: Vec<f64> = (0..self.d).map(|i| b * (0..self.d).map(|j| self.a_inv[i][j] * u[j]).sum::<f64>()).collect();
        (self.psi)(&x)
    }
}

/// Surface integral ∫_S ψ dμ over the sphere of radius b, together with a convergence flag.
pub fn sector_integral(model: &MultiModGaussianModel, sector: &ConicSector) -> Result<(f64, bool)> {
    let b = sector.radius();
    if !(b > 0.0) {
        return Err(Error::Invalid("sector radius must be positive".into()));
    }
    if sector.dimension() != model.d {
        return Err(Error::Invalid("sector dimension differs from the model".into()));
    }
    match sector {
        ConicSector::Points { b, both_sides } => {
            let mut s = model.psi_on_sphere(*b, &[1.0]);
            if *both_sides {
                s += model.psi_on_sphere(*b, &[-1.0]);
            }
            Ok((s, true))
        }
        ConicSector::Planar { theta1, theta2, b } => {
            let w = theta2 - theta1;
            if !(w > 0.0) {
                return Err(Error::DegenerateSector);
            }
            if w > TAU + 1e-12 {
                return Err(Error::Invalid("sector wider than 2π".into()));
            }
            let f = |th: f64| model.psi_on_sphere(*b, &[th.cos(), th.sin()]);
            Ok((b * integrate(&f, *theta1, *theta2, 1e-10), true))
        }
        ConicSector::Spherical { d, b, indicator } => {
            let mut prev = f64::NAN;
            let mut n = 16;
            let mut mass;
            loop {
                let (val, m) = spherical_product_quadrature(*d, n, &|u| {
                    if indicator(u) {
                        (model.psi_on_sphere(*b, u), 1.0)
                    } else {
                        (0.0, 0.0)
                    }
                });
                mass = m;
                let val = val * b.powi(*d as i32 - 1);
                if (val - prev).abs() <= 1e-6 * val.abs() {
                    return if mass == 0.0 { Err(Error::DegenerateSector) } else { Ok((val, true)) };
                }
                prev = val;
                n *= 2;
                if (n as f64).powi(*d as i32 - 1) > 4e6 {
                    break;
                }
            }
            if mass == 0.0 {
                return Err(Error::DegenerateSector);
            }
            Ok((prev, false))
        }
    }
}

/// Product Gauss–Legendre rule on S^{d−1} in hyperspherical coordinates.
/// Returns (∫ f.0 dΩ, ∫ f.1 dΩ).
fn spherical_product_quadrature(d: usize, n: usize, f: &dyn Fn(&[f64]) -> (f64, f64)) -> (f64, f64) {
    let (x, w) = gauss_legendre(n);
    let k = d - 1;
    let mut idx = vec![0usize; k];
    let mut acc = (0.0, 0.0);
    let mut u = vec![0.0; d];
    loop {
        // angles φ_1..φ_{k−1} ∈ [0, π], φ_k ∈ [0, 2π)
        let mut weight = 1.0;
        let mut sprod = 1.0;
        for (j, &i) in idx.iter().enumerate() {
            let last = j == k - 1;
            let (lo, hi) = if last { (0.0, TAU) } else { (0.0, PI) };
            let phi = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x[i];
            weight *= 0.5 * (hi - lo) * w[i];
            if last {
                u[j] = sprod * phi.cos();
                u[j + 1] = sprod * phi.sin();
            } else {
                u[j] = sprod * phi.cos();
                weight *= phi.sin().powi((k - 1 - j) as i32);
                sprod *= phi.sin();
            }
        }
        let v = f(&u);
        acc.0 += weight * v.0;
        acc.1 += weight * v.1;
        let mut j = 0;
        loop {
            if j == k {
                return acc;
            }
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// (t/2π)^{d/2} e^{−t b²/2} ∫_S ψ/(t b) dμ
pub fn conic_probability(model: &MultiModGaussianModel, sector: &ConicSector) -> Result<DeviationEstimate<f64>> {
    let (integral, converged) = sector_integral(model, sector)?;
    if integral == 0.0 {
        return Err(Error::DegenerateSector);
    }
    let t = model.t_n;
    let b = sector.radius();
    let d = model.d as f64;
    let leading = (t / TAU).powf(d / 2.0) * integral / (t * b);
    let mut flags = vec!["conic".to_string()];
    if !converged {
        flags.push("quadrature_not_converged".to_string());
    }
    let rate = t * b * b / 2.0;
    let log_prob = -rate + leading.ln();
    Ok(DeviationEstimate {
        regime: Regime::NonlatticeTail,
        log_prob,
        prob: log_prob.exp(),
        leading,
        correction: 1.0,
        exponent_rate: rate,
        flags,
    })
}

/// exp(−r⁴ sin²(2θ)/96), the planar walk limiting function on the circle of radius r.
pub fn walk2d_psi_polar(r: f64, theta: f64) -> f64 {
    let s = (2.0 * theta).sin();
    (-r.powi(4) * s * s / 96.0).exp()
}

/// Normalized angular density F(r, θ) on [0, 2π).
pub fn walk2d_angle_density(r: f64, theta: f64) -> f64 {
    walk2d_psi_polar(r, theta) / walk2d_normalizer(r)
}

pub fn walk2d_normalizer(r: f64) -> f64 {
    // four identical quarter periods of sin²(2θ)
    4.0 * integrate(&|th| walk2d_psi_polar(r, th), 0.0, PI / 2.0, 1e-12)
}

/// Limiting angle law of θ_n given ‖S_n‖ ≥ r n^{3/4} for the simple walk (step covariance I/2):
/// the saddle point sits at radius 2r, so the density is F(2r, θ).
pub fn walk2d_conditional_density(r: f64, theta: f64) -> f64 {
    walk2d_angle_density(2.0 * r, theta)
}

/// Mass of F(2r, ·) in each of `bins` equal bins of [0, 2π).
pub fn walk2d_theoretical_bins(r: f64, bins: usize) -> Vec<f64> {
    let z = walk2d_normalizer(2.0 * r);
    (0..bins)
        .map(|i| {
            let a = TAU * i as f64 / bins as f64;
            let b = TAU * (i + 1) as f64 / bins as f64;
            integrate(&|th| walk2d_psi_polar(2.0 * r, th), a, b, 1e-12) / z
        })
        .collect()
}

/// Simple-walk fourth-cumulant limiting function exp(κ⁴(⟨z, step⟩)/24) in ℤ^d.
pub fn dwalk_kurtosis_psi(d: usize, z: &[f64]) -> Result<f64> {
    if d < 2 || z.len() != d {
        return Err(Error::Invalid("need d ≥ 2 and a d-vector".into()));
    }
    let s2: f64 = z.iter().map(|x| x * x).sum();
    let s4: f64 = z.iter().map(|x| x.powi(4)).sum();
    let df = d as f64;
    Ok(((s4 / df - 3.0 * s2 * s2 / (df * df)) / 24.0).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkHistogram {
    pub n: usize,
    pub r: f64,
    pub trials: u64,
    pub seed: u64,
    pub accepted: u64,
    pub counts: Vec<u64>,
}

impl WalkHistogram {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.accepted as f64).collect()
    }

    /// Total-variation distance to a reference bin distribution.
    pub fn total_variation(&self, reference: &[f64]) -> f64 {
        0.5 * self.frequencies().iter().zip(reference).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }

    /// Pearson statistic for invariance under rotation by π/2, with its degrees of freedom.
    pub fn rotation_chi_square(&self) -> (f64, usize) {
        let q = self.counts.len() / 4;
        let mut stat = 0.0;
        let mut dof = 0;
        for i in 0..q {
            let c: Vec<f64> = (0..4).map(|k| self.counts[i + k * q] as f64).collect();
            let mean = c.iter().sum::<f64>() / 4.0;
            if mean > 0.0 {
                stat += c.iter().map(|x| (x - mean).powi(2) / mean).sum::<f64>();
                dof += 3;
            }
        }
        (stat, dof)
    }
}

const WALK_CHUNK: u64 = 4096;

/// Angle bin of a nonzero lattice point; bins must be a multiple of 4 so that
/// rotation by π/2 permutes bins exactly.
fn angle_bin(mut x: i64, mut y: i64, bins: usize) -> usize {
    let mut q = 0;
    // rotate into x > 0, y ≥ 0
    while !(x > 0 && y >= 0) {
        let (nx, ny) = (y, -x);
        x = nx;
        y = ny;
        q += 1;
    }
    let per = bins / 4;
    let th = (y as f64).atan2(x as f64);
    let k = ((th / (PI / 2.0)) * per as f64).floor() as usize;
    q * per + k.min(per - 1)
}

/// Rejection sampling of θ_n given ‖S_n‖ ≥ r n^{3/4} (and S_n ≠ 0).
pub fn walk2d_conditional_mc(
    n: usize,
    r: f64,
    trials: u64,
    seed: u64,
    bins: usize,
    budget: f64,
) -> Result<WalkHistogram> {
    if n < 100 {
        return Err(Error::Invalid("the walk needs n ≥ 100 steps".into()));
    }
    if bins == 0 || bins % 4 != 0 {
        return Err(Error::Invalid("bins must be a positive multiple of 4".into()));
    }
    if !(r >= 0.0) {
        return Err(Error::Invalid("r must be nonnegative".into()));
    }
    let needed = trials as f64 * n as f64;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, limit: budget });
    }
    let thr2 = r * r * (n as f64).powf(1.5);
    let chunks = trials.div_ceil(WALK_CHUNK);
    let (counts, accepted) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let m = WALK_CHUNK.min(trials - c * WALK_CHUNK);
            let mut counts = vec![0u64; bins];
            let mut acc = 0u64;
            for _ in 0..m {
                let (mut x, mut y) = (0i64, 0i64);
                let mut left = n;
                while left > 0 {
                    let mut bits = rng.next_u64();
                    let take = left.min(32);
                    for _ in 0..take {
                        match bits & 3 {
                            0 => x += 1,
                            1 => x -= 1,
                            2 => y += 1,
                            _ => y -= 1,
                        }
                        bits >>= 2;
                    }
                    left -= take;
                }
                let norm2 = (x * x + y * y) as f64;
                if norm2 >= thr2 && (x, y) != (0, 0) {
                    acc += 1;
                    counts[angle_bin(x, y, bins)] += 1;
                }
            }
            (counts, acc)
        })
        .reduce(
            || (vec![0u64; bins], 0u64),
            |(mut a, x), (b, y)| {
                for (p, q) in a.iter_mut().zip(b) {
                    *p += q;
                }
                (a, x + y)
            },
        );
    if accepted == 0 {
        return Err(Error::ZeroAcceptance);
    }
    Ok(WalkHistogram { n, r, trials, seed, accepted, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_rotate_exactly() {
        for &(x, y) in &[(3i64, 0i64), (5, 2), (1, 7), (4, 4)] {
            let b = angle_bin(x, y, 36);
            assert_eq!(angle_bin(-y, x, 36), (b + 9) % 36);
            assert_eq!(angle_bin(-x, -y, 36), (b + 18) % 36);
        }
        assert_eq!(angle_bin(1, 0, 36), 0);
        assert_eq!(angle_bin(0, 1, 36), 9);
    }
}
