//! Central measures on integer partitions from Thoma parameters, random
//! normalized character values and their cumulant limits.
//!
//! Every routine is generic over the field `T`, so the same code runs in `f64`
//! and exactly in `BigRational`.

use crate::deviation::{DeviationEstimate, Regime};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::{Arc, Mutex, OnceLock};

pub const MAX_CHAR_N: usize = 12;

pub trait Field: Clone + Num + FromPrimitive + ToPrimitive + PartialOrd + Debug + Send + Sync {}
impl<T: Clone + Num + FromPrimitive + ToPrimitive + PartialOrd + Debug + Send + Sync> Field for T {}

fn from_i<T: Field>(x: i64) -> T {
    T::from_i64(x).expect("integer fits the field")
}

fn powi<T: Field>(x: &T, k: usize) -> T {
    (0..k).fold(T::one(), |a, _| a * x.clone())
}

/// Point ω = (α, β) of the Thoma simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct ThomaParameter<T> {
    alpha: Vec<T>,
    beta: Vec<T>,
}

impl<T: Field> ThomaParameter<T> {
    pub fn new(alpha: Vec<T>, beta: Vec<T>) -> Result<Self> {
        for (name, s) in [("alpha", &alpha), ("beta", &beta)] {
            if s.iter().any(|x| *x < T::zero()) || s.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::Invalid(format!("{name} must be non-increasing and nonnegative")));
            }
        }
        let total = alpha.iter().chain(&beta).fold(T::zero(), |a, x| a + x.clone());
        if total > T::one() {
            return Err(Error::Invalid("Σα + Σβ must not exceed 1".into()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn beta(&self) -> &[T] {
        &self.beta
    }

    /// γ = 1 − Σα − Σβ
    pub fn gamma(&self) -> T {
        self.alpha.iter().chain(&self.beta).fold(T::one(), |a, x| a - x.clone())
    }

    /// p₁ = 1, p_k = Σ α_i^k + (−1)^{k−1} Σ β_i^k.
    pub fn power_sum(&self, k: usize) -> T {
        assert!(k >= 1, "power sums start at k = 1");
        if k == 1 {
            return T::one();
        }
        let a = self.alpha.iter().fold(T::zero(), |s, x| s + powi(x, k));
        let b = self.beta.iter().fold(T::zero(), |s, x| s + powi(x, k));
        if k % 2 == 1 {
            a + b
        } else {
            a - b
        }
    }

    /// p_μ = ∏ p_{μ_i}
    pub fn power_sum_partition(&self, mu: &[usize]) -> T {
        mu.iter().fold(T::one(), |a, &m| a * self.power_sum(m))
    }

    /// τ_ω on a permutation of the given cycle type.
    pub fn tau(&self, cycle_type: &[usize]) -> T {
        self.power_sum_partition(cycle_type)
    }
}

impl ThomaParameter<f64> {
    pub fn to_f64(&self) -> Self {
        self.clone()
    }
}

impl ThomaParameter<BigRational> {
    pub fn to_f64(&self) -> ThomaParameter<f64> {
        let f = |v: &[BigRational]| v.iter().map(|x| x.to_f64().unwrap()).collect();
        ThomaParameter { alpha: f(&self.alpha), beta: f(&self.beta) }
    }
}

/// Partitions of n in reverse lexicographic order, (n) first.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            go(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn is_partition(lambda: &[usize]) -> bool {
    lambda.iter().all(|&x| x > 0) && lambda.windows(2).all(|w| w[0] >= w[1])
}

/// z_μ = ∏ i^{m_i} m_i!
pub fn z_mu(mu: &[usize]) -> u128 {
    let mut mult: HashMap<usize, u32> = HashMap::new();
    for &m in mu {
        *mult.entry(m).or_insert(0) += 1;
    }
    mult.iter().fold(1u128, |acc, (&i, &m)| acc * (i as u128).pow(m) * (1..=m as u128).product::<u128>())
}

/// Character table of S(n) by Murnaghan–Nakayama on β-sets (beads on an abacus).
#[derive(Clone, Debug)]
pub struct CharacterTable {
    n: usize,
    parts: Vec<Vec<usize>>,
    /// chi[λ][μ]
    chi: Vec<Vec<i64>>,
}

fn beta_set(lambda: &[usize]) -> u32 {
    let l = lambda.len();
    lambda.iter().enumerate().fold(0u32, |acc, (i, &x)| acc | 1 << (x + l - 1 - i))
}

fn mn(beads: u32, mu: &[usize], memo: &mut HashMap<(u32, Vec<usize>), i64>) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    if let Some(&v) = memo.get(&(beads, mu.to_vec())) {
        return v;
    }
    let r = mu[0];
    let mut total = 0;
    let mut b = beads;
    while b != 0 {
        let pos = b.trailing_zeros() as usize;
        b &= b - 1;
        // move a bead from pos to pos − r: removes a rim hook of length r
        if pos >= r && beads >> (pos - r) & 1 == 0 {
            let between = (beads >> (pos - r + 1)) & ((1u32 << (r - 1)) - 1);
            let sign = if between.count_ones() % 2 == 0 { 1 } else { -1 };
            total += sign * mn(beads & !(1 << pos) | 1 << (pos - r), &mu[1..], memo);
        }
    }
    memo.insert((beads, mu.to_vec()), total);
    total
}

/// χ^λ(μ) for a single pair.
pub fn character(lambda: &[usize], mu: &[usize]) -> Result<i64> {
    let n: usize = lambda.iter().sum();
    if !is_partition(lambda) || !is_partition(mu) || mu.iter().sum::<usize>() != n {
        return Err(Error::Invalid("λ and μ must be partitions of the same n".into()));
    }
    if n > 2 * MAX_CHAR_N {
        return Err(Error::TooLarge(format!("n = {n}")));
    }
    Ok(mn(beta_set(lambda), mu, &mut HashMap::new()))
}

impl CharacterTable {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_CHAR_N {
            return Err(Error::TooLarge(format!("n = {n} exceeds {MAX_CHAR_N}")));
        }
        let parts = partitions(n);
        let chi = parts
            .iter()
            .map(|l| {
                let mut memo = HashMap::new();
                let b = beta_set(l);
                parts.iter().map(|m| mn(b, m, &mut memo)).collect()
            })
            .collect();
        Ok(Self { n, parts, chi })
    }

    /// Shared, lazily built table for each n.
    pub fn cached(n: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::new(n)?);
        cache.lock().unwrap().insert(n, t.clone());
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn index(&self, lambda: &[usize]) -> Option<usize> {
        self.parts.iter().position(|p| p == lambda)
    }

    pub fn value(&self, lambda: usize, mu: usize) -> i64 {
        self.chi[lambda][mu]
    }

    /// dim λ = χ^λ(1ⁿ)
    pub fn dim(&self, lambda: usize) -> i64 {
        self.chi[lambda][self.parts.len() - 1]
    }
}

/// Spectral measure P_{ω,n}[λ] = dim λ Σ_μ z_μ^{−1} p_μ(ω) χ^λ(μ).
pub fn central_measure<T: Field>(omega: &ThomaParameter<T>, n: usize) -> Result<Vec<(Vec<usize>, T)>> {
    let table = CharacterTable::cached(n)?;
    let weights: Vec<T> =
        table.parts.iter().map(|mu| omega.power_sum_partition(mu) / T::from_u128(z_mu(mu)).unwrap()).collect();
    let tol = T::from_f64(-1e-12).unwrap_or_else(T::zero);
    table
        .parts
        .iter()
        .enumerate()
        .map(|(l, lambda)| {
            let s =
                weights.iter().enumerate().fold(T::zero(), |acc, (m, w)| acc + w.clone() * from_i(table.value(l, m)));
            let mass = s * from_i(table.dim(l));
            if mass < tol {
                return Err(Error::NotPositive(mass.to_f64().unwrap_or(f64::NAN)));
            }
            Ok((lambda.clone(), mass))
        })
        .collect()
}

/// Cycle type ρ completed with fixed points to a partition of n.
fn pad(rho: &[usize], n: usize) -> Result<Vec<usize>> {
    let k: usize = rho.iter().sum();
    if !is_partition(rho) || k > n {
        return Err(Error::Invalid(format!("cycle type {rho:?} does not fit in S({n})")));
    }
    let mut mu: Vec<usize> = rho.iter().copied().filter(|&x| x > 1).collect();
    mu.resize(mu.len() + n - mu.iter().sum::<usize>(), 1);
    Ok(mu)
}

/// Law of X_ρ(λ) = χ̂^λ(ρ) under the central measure: pairs (value, mass).
pub fn character_value_law<T: Field>(omega: &ThomaParameter<T>, rho: &[usize], n: usize) -> Result<Vec<(T, T)>> {
    let table = CharacterTable::cached(n)?;
    let m = table.index(&pad(rho, n)?).expect("padded cycle type is a partition");
    let measure = central_measure(omega, n)?;
    Ok(measure
        .into_iter()
        .enumerate()
        .map(|(l, (_, p))| (from_i::<T>(table.value(l, m)) / from_i(table.dim(l)), p))
        .collect())
}

/// κ¹..κ^r (r ≤ 4) of X_ρ by direct summation over λ ⊢ n.
pub fn char_cumulants_exact<T: Field>(omega: &ThomaParameter<T>, rho: &[usize], n: usize, r: usize) -> Result<Vec<T>> {
    if r == 0 || r > 4 {
        return Err(Error::UnsupportedOrder(r));
    }
    let law = character_value_law(omega, rho, n)?;
    let mean = law.iter().fold(T::zero(), |a, (x, p)| a + x.clone() * p.clone());
    let central =
        |j: usize| law.iter().fold(T::zero(), |a, (x, p)| a + powi(&(x.clone() - mean.clone()), j) * p.clone());
    let (c2, c3, c4) = (central(2), central(3), central(4));
    let mut out = vec![mean, c2.clone(), c3, c4 - from_i::<T>(3) * c2.clone() * c2];
    out.truncate(r);
    Ok(out)
}

/// |κ^(r)(X_ρ)| ≤ r^{r−2} (2k²/n)^{r−1} with k = |ρ|.
pub fn char_cumulant_bound(k: usize, n: usize, r: usize) -> f64 {
    (r as f64).powi(r as i32 - 2) * (2.0 * (k * k) as f64 / n as f64).powi(r as i32 - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharConstants<T> {
    pub sigma2: T,
    pub l: T,
    /// σ² ≤ 1e−14: the mod-Gaussian statement degenerates.
    pub degenerate: bool,
}

/// σ² = k²(p_{2k−1} − p_k²), L = k³((3k−2)p_{3k−2} − (6k−3)p_{2k−1}p_k + (3k−1)p_k³).
pub fn sigma2_l_char<T: Field>(omega: &ThomaParameter<T>, k: usize) -> Result<CharConstants<T>> {
    if k < 2 {
        return Err(Error::OutOfRange { value: k as f64, index: None });
    }
    let p = |j| omega.power_sum(j);
    let kk = from_i::<T>(k as i64);
    let pk = p(k);
    let sigma2 = kk.clone() * kk.clone() * (p(2 * k - 1) - pk.clone() * pk.clone());
    let l = kk.clone()
        * kk.clone()
        * kk
        * (from_i::<T>(3 * k as i64 - 2) * p(3 * k - 2) - from_i::<T>(6 * k as i64 - 3) * p(2 * k - 1) * pk.clone()
            + from_i::<T>(3 * k as i64 - 1) * pk.clone() * pk.clone() * pk);
    let degenerate = sigma2 <= T::from_f64(1e-14).unwrap_or_else(T::zero);
    Ok(CharConstants { sigma2, l, degenerate })
}

fn without(mu: &[usize], drop: &[usize]) -> Vec<usize> {
    mu.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, &x)| x).collect()
}

fn p_of<T: Field>(omega: &ThomaParameter<T>, parts: impl IntoIterator<Item = usize>) -> T {
    parts.into_iter().fold(T::one(), |a, m| a * omega.power_sum(m))
}

/// lim n·κ(X_μ, X_ν) = Σ_{i,j} μ_i ν_j (p_{(μ⋈ν)(i,j)} − p_{μ⊔ν}).
pub fn limit_covariance<T: Field>(omega: &ThomaParameter<T>, mu: &[usize], nu: &[usize]) -> T {
    let disjoint = p_of(omega, mu.iter().chain(nu).copied());
    let mut s = T::zero();
    for (i, &a) in mu.iter().enumerate() {
        for (j, &b) in nu.iter().enumerate() {
            let joined = p_of(omega, without(mu, &[i]).into_iter().chain(without(nu, &[j])).chain([a + b - 1]));
            s = s + from_i::<T>((a * b) as i64) * (joined - disjoint.clone());
        }
    }
    s
}

/// lim n²·κ(X_μ, X_ν, X_δ), summing the three families of connecting graphs.
pub fn limit_third_cumulant<T: Field>(omega: &ThomaParameter<T>, mu: &[usize], nu: &[usize], delta: &[usize]) -> T {
    let all = |a: &[usize], b: &[usize], c: &[usize]| p_of(omega, a.iter().chain(b).chain(c).copied());
    // p of (a ⋈ b)(i, j) ⊔ c
    let join2 = |a: &[usize], i: usize, b: &[usize], j: usize, c: &[usize]| {
        p_of(
            omega,
            without(a, &[i]).into_iter().chain(without(b, &[j])).chain(c.iter().copied()).chain([a[i] + b[j] - 1]),
        )
    };
    let join3 = |a: &[usize], i: usize, b: &[usize], j: usize, c: &[usize], k: usize| {
        p_of(
            omega,
            without(a, &[i])
                .into_iter()
                .chain(without(b, &[j]))
                .chain(without(c, &[k]))
                .chain([a[i] + b[j] + c[k] - 2]),
        )
    };
    let mut s = T::zero();
    let rotations: [[&[usize]; 3]; 3] = [[mu, nu, delta], [nu, delta, mu], [delta, mu, nu]];
    for [a, b, c] in rotations {
        let base = all(a, b, c);
        for i in 0..a.len() {
            for j in 0..b.len() {
                for k in 0..c.len() {
                    let w = (a[i] * b[j] * (b[j] - 1) * c[k]) as i64;
                    if w != 0 {
                        let term = base.clone() + join3(a, i, b, j, c, k) - join2(a, i, b, j, c) - join2(b, j, c, k, a);
                        s = s + from_i::<T>(w) * term;
                    }
                }
                for jj in 0..b.len() {
                    if jj == j {
                        continue;
                    }
                    for l in 0..c.len() {
                        let w = (a[i] * b[j] * b[jj] * c[l]) as i64;
                        let rest: Vec<usize> = without(b, &[j, jj]);
                        let double = p_of(
                            omega,
                            without(a, &[i])
                                .into_iter()
                                .chain(rest)
                                .chain(without(c, &[l]))
                                .chain([a[i] + b[j] - 1, b[jj] + c[l] - 1]),
                        );
                        let term = base.clone() + double - join2(a, i, b, j, c) - join2(b, jj, c, l, a);
                        s = s + from_i::<T>(w) * term;
                    }
                }
            }
        }
    }
    let base = all(mu, nu, delta);
    for i in 0..mu.len() {
        for j in 0..nu.len() {
            for k in 0..delta.len() {
                let w = (mu[i] * nu[j] * delta[k]) as i64;
                let term = from_i::<T>(2) * base.clone() + join3(mu, i, nu, j, delta, k)
                    - join2(mu, i, nu, j, delta)
                    - join2(nu, j, delta, k, mu)
                    - join2(mu, i, delta, k, nu);
                s = s + from_i::<T>(w) * term;
            }
        }
    }
    s
}

/// (σ²(μ), L(μ)): limits of n·κ²(X_μ) and n²·κ³(X_μ).
pub fn general_mu_limits<T: Field>(omega: &ThomaParameter<T>, mu: &[usize]) -> Result<(T, T)> {
    if !is_partition(mu) || mu.is_empty() {
        return Err(Error::Invalid(format!("{mu:?} is not a partition")));
    }
    if mu.iter().sum::<usize>() > MAX_CHAR_N {
        return Err(Error::TooLarge(format!("|μ| = {}", mu.iter().sum::<usize>())));
    }
    Ok((limit_covariance(omega, mu, mu), limit_third_cumulant(omega, mu, mu, mu)))
}

fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n as i64 - i as i64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharInterpolation {
    /// Power-basis coefficients of (n↓k)^r κ^(r)(X_ρ), fitted on all but the last n.
    pub coeffs: Vec<BigRational>,
    pub held_out: usize,
    pub residual: BigRational,
}

/// Exact interpolation of (n↓k)^r κ^(r)(X_ρ), a polynomial of degree ≤ rk − r + 1.
pub fn char_polynomiality_check(
    omega: &ThomaParameter<BigRational>,
    rho: &[usize],
    r: usize,
    n_list: &[usize],
) -> Result<CharInterpolation> {
    let k: usize = rho.iter().sum();
    let deg = r * k + 1 - r;
    if n_list.len() < deg + 2 {
        return Err(Error::InsufficientPoints { needed: deg + 2, got: n_list.len() });
    }
    let values: Vec<BigRational> = n_list
        .iter()
        .map(|&n| {
            let kr = char_cumulants_exact(omega, rho, n, r)?.pop().unwrap();
            Ok(kr * BigRational::from_integer(falling(n, k).pow(r as u32)))
        })
        .collect::<Result<_>>()?;
    let m = n_list.len() - 1;
    let xs: Vec<BigRational> = n_list[..m].iter().map(|&n| BigRational::from_integer(BigInt::from(n))).collect();
    let coeffs = lagrange(&xs, &values[..m]);
    let x = BigRational::from_integer(BigInt::from(n_list[m]));
    let at = coeffs.iter().rev().fold(BigRational::zero(), |acc, a| acc * &x + a);
    Ok(CharInterpolation { coeffs, held_out: n_list[m], residual: at - &values[m] })
}

fn lagrange(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let m = xs.len();
    let mut coeffs = vec![BigRational::zero(); m];
    for i in 0..m {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..m {
            if j != i {
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (d, a) in basis.iter().enumerate() {
                    next[d + 1] += a;
                    next[d] -= a * &xs[j];
                }
                basis = next;
                denom *= &xs[i] - &xs[j];
            }
        }
        for (d, a) in basis.iter().enumerate() {
            coeffs[d] += a * &ys[i] / &denom;
        }
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    coeffs
}

/// Two-sided estimate of P[|X_k − p_k| ≥ n^{−1/2} x]:
/// 2e^{−x²/2σ²} / √(2π x²/σ²) · cosh(L x³ / (6σ⁶ n^{1/2})).
pub fn character_deviation(omega: &ThomaParameter<f64>, k: usize, n: usize, x: f64) -> Result<DeviationEstimate<f64>> {
    let c = sigma2_l_char(omega, k)?;
    if c.degenerate {
        return Err(Error::NonPositiveVariance);
    }
    if !(x > 0.0) {
        return Err(Error::Invalid("x must be positive".into()));
    }
    let s2 = c.sigma2;
    let mut flags = vec!["two_sided".to_string()];
    if x < 1.0 {
        flags.push("below_window".into());
    }
    if x > (n as f64).powf(0.25) {
        flags.push("beyond_window".into());
    }
    let rate = x * x / (2.0 * s2);
    let leading = 2.0 / (2.0 * PI * x * x / s2).sqrt();
    let correction = (c.l * x.powi(3) / (6.0 * s2.powi(3) * (n as f64).sqrt())).cosh();
    let log_prob = -rate + leading.ln() + correction.ln();
    Ok(DeviationEstimate {
        regime: Regime::CumulantModerate,
        log_prob,
        prob: log_prob.exp(),
        leading,
        correction,
        exponent_rate: rate,
        flags,
    })
}
