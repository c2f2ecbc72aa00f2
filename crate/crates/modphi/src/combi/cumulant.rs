use super::setpart::{set_partitions, MAX_PARTITION_SIZE};
use crate::deviation::CumulantModel;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// Largest underlying sample space, in bits, for exhaustive families.
pub const MAX_FAMILY_BITS: u32 = 20;

/// Exact access to mixed moments E[Y_{i₁}⋯Y_{i_k}] (indices may repeat).
pub trait MomentOracle {
    fn n_vars(&self) -> usize;
    fn expect(&self, indices: &[usize]) -> BigRational;
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mask_members(mask: usize, r: usize) -> Vec<usize> {
    (0..r).filter(|i| mask >> i & 1 == 1).collect()
}

/// Σ_π μ(π) ∏_B m(B) over set partitions of the positions in `mask`;
/// `m` is indexed by position masks.
fn mobius_sum(m: &[BigRational], mask: usize, r: usize, signed: bool) -> BigRational {
    let members = mask_members(mask, r);
    let mut total = BigRational::zero();
    for p in set_partitions(members.len()) {
        let mut term = if signed { rat(p.mobius()) } else { BigRational::one() };
        for b in p.blocks() {
            let sub: usize = b.iter().map(|&i| 1usize << members[i]).sum();
            term *= &m[sub];
        }
        total += term;
    }
    total
}

/// Mixed moments of every subset of the given positions, indexed by mask (mask 0 ↦ 1).
pub fn subset_moments<O: MomentOracle + ?Sized>(oracle: &O, indices: &[usize]) -> Result<Vec<BigRational>> {
    let r = indices.len();
    if r > MAX_PARTITION_SIZE {
        return Err(Error::TooManyVariables(r));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= oracle.n_vars()) {
        return Err(Error::OutOfRange { value: bad as f64, index: Some(bad) });
    }
    Ok((0..1usize << r)
        .map(|mask| {
            let sel: Vec<usize> = mask_members(mask, r).iter().map(|&i| indices[i]).collect();
            if sel.is_empty() {
                BigRational::one()
            } else {
                oracle.expect(&sel)
            }
        })
        .collect())
}

/// Joint cumulants of every nonempty subset from the mask-indexed moments.
pub fn cumulants_from_moments(moments: &[BigRational]) -> Vec<BigRational> {
    let r = moments.len().trailing_zeros() as usize;
    (0..moments.len())
        .map(|mask| if mask == 0 { BigRational::zero() } else { mobius_sum(moments, mask, r, true) })
        .collect()
}

/// Mixed moments from mask-indexed joint cumulants: E[∏_S] = Σ_π ∏_B κ(B).
pub fn moments_from_cumulants(kappas: &[BigRational]) -> Vec<BigRational> {
    let r = kappas.len().trailing_zeros() as usize;
    (0..kappas.len())
        .map(|mask| if mask == 0 { BigRational::one() } else { mobius_sum(kappas, mask, r, false) })
        .collect()
}

/// κ(Y_{i₁}, …, Y_{i_r}) = Σ_π μ(π) ∏_B E[∏_{i∈B} Y_i].
pub fn joint_cumulant<O: MomentOracle + ?Sized>(oracle: &O, indices: &[usize]) -> Result<BigRational> {
    if indices.is_empty() {
        return Err(Error::Invalid("a cumulant needs at least one variable".into()));
    }
    let m = subset_moments(oracle, indices)?;
    Ok(mobius_sum(&m, (1 << indices.len()) - 1, indices.len(), true))
}

/// Univariate cumulants κ₁..κ_r from power moments m₁..m_r.
pub fn cumulants_from_power_moments(m: &[BigRational]) -> Vec<BigRational> {
    let r = m.len();
    let mut k: Vec<BigRational> = Vec::with_capacity(r);
    // κ_n = m_n − Σ_{j=1}^{n−1} C(n−1, j−1) κ_j m_{n−j}
    for n in 1..=r {
        let mut v = m[n - 1].clone();
        let mut c = BigInt::one();
        for j in 1..n {
            v -= BigRational::from_integer(c.clone()) * &k[j - 1] * &m[n - j - 1];
            c = c * BigInt::from(n - j) / BigInt::from(j);
        }
        k.push(v);
    }
    k
}

/// Power moments m₁..m_r from cumulants κ₁..κ_r.
pub fn power_moments_from_cumulants(k: &[BigRational]) -> Vec<BigRational> {
    let r = k.len();
    let mut m: Vec<BigRational> = Vec::with_capacity(r);
    for n in 1..=r {
        let mut v = k[n - 1].clone();
        let mut c = BigInt::one();
        for j in 1..n {
            v += BigRational::from_integer(c.clone()) * &k[j - 1] * &m[n - j - 1];
            c = c * BigInt::from(n - j) / BigInt::from(j);
        }
        m.push(v);
    }
    m
}

/// Explicit finite probability space.
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    pub probs: Vec<BigRational>,
    /// values[ω][α]
    pub values: Vec<Vec<BigRational>>,
}

impl FiniteSpace {
    pub fn new(probs: Vec<BigRational>, values: Vec<Vec<BigRational>>) -> Result<Self> {
        if probs.len() != values.len() || probs.is_empty() {
            return Err(Error::Invalid("one value row per outcome".into()));
        }
        let n = values[0].len();
        if values.iter().any(|v| v.len() != n) {
            return Err(Error::Invalid("ragged value table".into()));
        }
        if probs.iter().any(|p| p.is_negative()) || probs.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::Invalid("probabilities must be nonnegative and sum to 1".into()));
        }
        Ok(Self { probs, values })
    }

    /// Uniform measure on the given outcomes.
    pub fn uniform(values: Vec<Vec<BigRational>>) -> Result<Self> {
        let p = BigRational::new(BigInt::one(), BigInt::from(values.len().max(1)));
        Self::new(vec![p; values.len()], values)
    }
}

impl MomentOracle for FiniteSpace {
    fn n_vars(&self) -> usize {
        self.values.first().map_or(0, |v| v.len())
    }

    fn expect(&self, indices: &[usize]) -> BigRational {
        self.probs.iter().zip(&self.values).map(|(p, v)| indices.iter().fold(p.clone(), |acc, &i| acc * &v[i])).sum()
    }
}

/// Variable Y_α(ω) = f_α(ω)/denom on ω ∈ {0,1}^bits.
pub type BitVar = Arc<dyn Fn(u32) -> i64 + Send + Sync>;

/// Family {Y_α} on i.i.d. Bernoulli(p) bits, with a simple dependency graph and bound A.
#[derive(Clone)]
pub struct DependencyFamily {
    pub name: String,
    bits: u32,
    p: BigRational,
    denom: i64,
    vars: Vec<BitVar>,
    adj: Vec<Vec<bool>>,
    bound_a: BigRational,
}

impl std::fmt::Debug for DependencyFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DependencyFamily({}, N={}, D={}, bits={})", self.name, self.vars.len(), self.max_degree(), self.bits)
    }
}

impl DependencyFamily {
    pub fn new(
        name: &str,
        bits: u32,
        p: BigRational,
        denom: i64,
        vars: Vec<BitVar>,
        edges: &[(usize, usize)],
        bound_a: BigRational,
    ) -> Result<Self> {
        if bits > MAX_FAMILY_BITS {
            return Err(Error::TooLarge(format!("sample space 2^{bits} exceeds 2^{MAX_FAMILY_BITS}")));
        }
        if !(p.is_positive() && p < BigRational::one()) {
            return Err(Error::Invalid("bit probability must lie in (0,1)".into()));
        }
        if denom <= 0 {
            return Err(Error::Invalid("denominator must be positive".into()));
        }
        let n = vars.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::OutOfRange { value: a.max(b) as f64, index: Some(a.max(b)) });
            }
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        Ok(Self { name: name.to_string(), bits, p, denom, vars, adj, bound_a })
    }

    /// Y_i = b_i b_{i+1} ⋯ b_{i+w−1}; (w−1)-dependent chain with A = 1.
    pub fn sliding_window(n: usize, w: usize, p: BigRational) -> Result<Self> {
        if w == 0 {
            return Err(Error::Invalid("window must be positive".into()));
        }
        let bits = (n + w - 1) as u32;
        let vars: Vec<BitVar> = (0..n)
            .map(|i| {
                let m = ((1u32 << w) - 1) << i;
                Arc::new(move |o: u32| i64::from(o & m == m)) as BitVar
            })
            .collect();
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n.min(i + w)).map(move |j| (i, j))).collect();
        Self::new(&format!("window(n={n},w={w})"), bits, p, 1, vars, &edges, BigRational::one())
    }

    /// Groups sharing a common bit: Y_α = 2 b_{g(α)} c_α − 1 ∈ {−1, 1}, complete within groups.
    pub fn clique_structured(groups: &[usize], p: BigRational) -> Result<Self> {
        let g = groups.len();
        let n: usize = groups.iter().sum();
        let bits = (g + n) as u32;
        let mut vars: Vec<BitVar> = Vec::new();
        let mut edges = Vec::new();
        let mut start = 0;
        for (k, &size) in groups.iter().enumerate() {
            for a in 0..size {
                let alpha = start + a;
                let shared = 1u32 << k;
                let own = 1u32 << (g + alpha);
                vars.push(Arc::new(move |o: u32| if o & shared != 0 && o & own != 0 { 1 } else { -1 }));
                for b in a + 1..size {
                    edges.push((alpha, start + b));
                }
            }
            start += size;
        }
        Self::new(&format!("cliques({groups:?})"), bits, p, 1, vars, &edges, BigRational::one())
    }

    /// Fixed collection of 50 families used by the acceptance suite:
    /// 2-dependent-style sliding windows (w ≤ 3) and clique-structured groups.
    pub fn standard_collection() -> Vec<Self> {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let ps = [q(1, 2), q(1, 3), q(2, 3), q(1, 5), q(3, 4)];
        let mut out = Vec::new();
        for (k, n) in (4..=14).enumerate() {
            for w in 1..=3 {
                out.push(Self::sliding_window(n, w, ps[(k + w) % 5].clone()).expect("valid window"));
            }
        }
        let groups: [&[usize]; 17] = [
            &[2, 2],
            &[3, 1],
            &[4],
            &[2, 2, 2],
            &[3, 3],
            &[1, 1, 1, 1],
            &[5, 2],
            &[2, 3, 2],
            &[4, 4],
            &[6, 2],
            &[3, 3, 3],
            &[2, 2, 2, 2],
            &[5, 5],
            &[7, 3],
            &[4, 4, 4],
            &[3, 3, 3, 3],
            &[6, 6],
        ];
        for (k, g) in groups.iter().enumerate() {
            out.push(Self::clique_structured(g, ps[k % 5].clone()).expect("valid groups"));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn bound_a(&self) -> &BigRational {
        &self.bound_a
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|r| r.iter().filter(|&&x| x).count()).max().unwrap_or(0)
    }

    fn weights(&self) -> Vec<BigRational> {
        let q = BigRational::one() - &self.p;
        (0..=self.bits)
            .map(|k| {
                let mut w = BigRational::one();
                for _ in 0..k {
                    w *= &self.p;
                }
                for _ in k..self.bits {
                    w *= &q;
                }
                w
            })
            .collect()
    }

    /// Exact law of X = Σ_α Y_α as (value, probability) pairs sorted by value.
    pub fn sum_distribution(&self) -> Vec<(BigRational, BigRational)> {
        let mut tally: HashMap<i64, Vec<u64>> = HashMap::new();
        for o in 0..(1u32 << self.bits) {
            let x: i64 = self.vars.iter().map(|f| f(o)).sum();
            tally.entry(x).or_insert_with(|| vec![0; self.bits as usize + 1])[o.count_ones() as usize] += 1;
        }
        let w = self.weights();
        let mut out: Vec<(BigRational, BigRational)> = tally
            .into_iter()
            .map(|(x, counts)| {
                let p: BigRational = counts
                    .iter()
                    .zip(&w)
                    .filter(|(c, _)| **c > 0)
                    .map(|(c, w)| BigRational::from_integer(BigInt::from(*c)) * w)
                    .sum();
                (BigRational::new(BigInt::from(x), BigInt::from(self.denom)), p)
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Exact κ^(r)(Σ_α Y_α).
    pub fn sum_cumulant(&self, r: usize) -> BigRational {
        self.sum_cumulants(r).pop().unwrap_or_else(BigRational::zero)
    }

    /// κ^(1..=r)(Σ_α Y_α).
    pub fn sum_cumulants(&self, r: usize) -> Vec<BigRational> {
        let dist = self.sum_distribution();
        let m: Vec<BigRational> = (1..=r)
            .map(|k| {
                dist.iter()
                    .map(|(x, p)| {
                        let mut v = p.clone();
                        for _ in 0..k {
                            v *= x;
                        }
                        v
                    })
                    .sum()
            })
            .collect();
        cumulants_from_power_moments(&m)
    }

    /// Spot-check the dependency-graph property on random separated splits.
    pub fn check_dependency_graph(&self, trials: usize, seed: u64) -> bool {
        let n = self.len();
        if n < 2 {
            return true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tried = 0;
        let mut attempts = 0;
        while tried < trials && attempts < 50 * trials {
            attempts += 1;
            let mut v1 = Vec::new();
            let mut v2 = Vec::new();
            for a in 0..n {
                match rng.gen_range(0..4) {
                    0 => v1.push(a),
                    1 => v2.push(a),
                    _ => {}
                }
            }
            if v1.is_empty() || v2.is_empty() || v1.len() + v2.len() > 8 {
                continue;
            }
            if v1.iter().any(|&a| v2.iter().any(|&b| self.adj[a][b])) {
                continue;
            }
            tried += 1;
            let both: Vec<usize> = v1.iter().chain(&v2).copied().collect();
            if self.expect(&both) != self.expect(&v1) * self.expect(&v2) {
                return false;
            }
        }
        true
    }
}

impl MomentOracle for DependencyFamily {
    fn n_vars(&self) -> usize {
        self.vars.len()
    }

    fn expect(&self, indices: &[usize]) -> BigRational {
        let mut by_weight = vec![0i128; self.bits as usize + 1];
        for o in 0..(1u32 << self.bits) {
            let prod: i128 = indices.iter().map(|&i| self.vars[i](o) as i128).product();
            by_weight[o.count_ones() as usize] += prod;
        }
        let w = self.weights();
        let num: BigRational = by_weight
            .iter()
            .zip(&w)
            .filter(|(s, _)| **s != 0)
            .map(|(s, w)| BigRational::from_integer(BigInt::from(*s)) * w)
            .sum();
        let mut den = BigInt::one();
        for _ in indices {
            den *= self.denom;
        }
        num / BigRational::from_integer(den)
    }
}

/// 2^{r−1} r^{r−2} N (D+1)^{r−1} A^r, exactly.
pub fn cumulant_bound_exact(n: usize, d: usize, a: &BigRational, r: usize) -> BigRational {
    assert!(r >= 1);
    let mut b = BigRational::from_integer(BigInt::from(n) * BigInt::from(2u32).pow(r as u32 - 1));
    b *= BigRational::from_integer(BigInt::from(d + 1).pow(r as u32 - 1));
    if r >= 2 {
        b *= BigRational::from_integer(BigInt::from(r).pow(r as u32 - 2));
    } else {
        b /= BigRational::from_integer(BigInt::from(r));
    }
    for _ in 0..r {
        b *= a;
    }
    b
}

pub fn cumulant_bound(n: usize, d: usize, a: f64, r: usize) -> f64 {
    let r_f = r as f64;
    2f64.powi(r as i32 - 1) * r_f.powi(r as i32 - 2) * n as f64 * ((d + 1) as f64).powi(r as i32 - 1) * a.powi(r as i32)
}

/// Joint variant: 2^{r−1} r^{r−2} |V₁| (D₂+1)⋯(D_r+1) A^r.
pub fn joint_cumulant_bound(v1: usize, degrees: &[usize], a: f64, r: usize) -> Result<f64> {
    if degrees.len() + 1 != r {
        return Err(Error::Invalid(format!("need D₂..D_r ({} values)", r.saturating_sub(1))));
    }
    let prod: f64 = degrees.iter().map(|&d| (d + 1) as f64).product();
    Ok(2f64.powi(r as i32 - 1) * (r as f64).powi(r as i32 - 2) * v1 as f64 * prod * a.powi(r as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub r: usize,
    pub kappa: BigRational,
    pub bound: BigRational,
    pub ok: bool,
}

/// Exact κ^(r)(Σ Y_α) against the dependency-graph bound.
pub fn verify_bound(family: &DependencyFamily, r: usize) -> Result<BoundCheck> {
    if r == 0 {
        return Err(Error::Invalid("order must be positive".into()));
    }
    let kappa = family.sum_cumulant(r);
    let bound = cumulant_bound_exact(family.len(), family.max_degree(), family.bound_a(), r);
    let ok = kappa.abs() <= bound;
    Ok(BoundCheck { r, kappa, bound, ok })
}

/// Mod-Gaussian parameters for a sparse dependency graph: α_n = N/D, β_n = D,
/// σ² = (D/N) κ²(X/D) and L = (D/N) κ³(X/D).
pub fn sparse_graph_scheme(n: f64, d: f64, kappa2: f64, kappa3: f64) -> Result<CumulantModel<f64>> {
    if !(n > 0.0 && d > 0.0) {
        return Err(Error::Invalid("N and D must be positive".into()));
    }
    let sigma2 = d / n * kappa2 / (d * d);
    if !(sigma2 > 0.0) {
        return Err(Error::NonPositiveVariance);
    }
    let l = d / n * kappa3 / (d * d * d);
    Ok(CumulantModel { alpha_n: n / d, beta_n: d, sigma2, l, k4: None })
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Cubic constant of the standardized limit exp(L z³/6): (D/N) κ³(X/D) / σ³.
pub fn standardized_cubic(model: &CumulantModel<f64>) -> f64 {
    model.l / model.sigma2.powf(1.5)
}
