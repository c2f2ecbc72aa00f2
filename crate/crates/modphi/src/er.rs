//! Subgraph counts in G(n, p): arrangement counting, exact cumulants, Monte Carlo
//! estimates and the moderate-deviation constants.

use crate::combi::{cumulants_from_power_moments, set_partitions};
use crate::deviation::{DeviationEstimate, Regime};
use crate::error::{Error, Result};
use crate::special::{gaussian_tail, mills};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;

pub const MAX_BRUTE_N: usize = 6;
pub const MAX_COUNT_N: usize = 5000;

/// Simple loopless pattern γ on vertices 0..k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternGraph {
    k: usize,
    edges: Vec<(usize, usize)>,
}

impl PatternGraph {
    pub fn new(k: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= k || b >= k {
                return Err(Error::OutOfRange { value: a.max(b) as f64, index: Some(a.max(b)) });
            }
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Invalid("pattern must be simple and loopless".into()));
            }
        }
        if k == 0 {
            return Err(Error::Invalid("pattern needs a vertex".into()));
        }
        Ok(Self { k, edges: edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect() })
    }

    pub fn edge() -> Self {
        Self { k: 2, edges: vec![(0, 1)] }
    }

    pub fn triangle() -> Self {
        Self { k: 3, edges: vec![(0, 1), (1, 2), (0, 2)] }
    }

    /// Path on three vertices.
    pub fn path3() -> Self {
        Self { k: 3, edges: vec![(0, 1), (1, 2)] }
    }

    /// "1-2,2-3" with 1-based labels.
    pub fn parse(s: &str) -> Result<Self> {
        let g = crate::combi::MultiGraph::parse_edges(s, None)?;
        Self::new(g.vertex_count(), g.edges().to_vec())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Largest union of r arrangements whose edge sets are linked: k + (r−1)(k−2).
    pub fn cumulant_degree(&self, r: usize) -> usize {
        self.k + (r - 1) * self.k.saturating_sub(2)
    }
}

/// Simple graph stored as adjacency bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, adj: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// G(n, p) from a seeded stream; each pair (u < v) consumes one 32-bit draw,
    /// compared against ⌊p·2³²⌋.
    pub fn sample_gnp(n: usize, p: f64, rng: &mut impl RngCore) -> Self {
        let mut g = Self::empty(n);
        if p == 0.5 {
            // one random bit per pair, written a word at a time into the upper triangle
            for u in 0..n {
                for k in (u + 1) / 64..g.words {
                    let mut w = rng.next_u64();
                    let lo = k * 64;
                    if lo <= u {
                        w &= !((2u64 << (u - lo)).wrapping_sub(1));
                    }
                    if lo + 64 > n {
                        w &= (1u64 << (n - lo)) - 1;
                    }
                    g.adj[u * g.words + k] = w;
                }
            }
            for u in 0..n {
                for k in 0..g.words {
                    let mut w = g.adj[u * g.words + k];
                    while w != 0 {
                        let v = k * 64 + w.trailing_zeros() as usize;
                        w &= w - 1;
                        if v > u {
                            g.adj[v * g.words + u / 64] |= 1 << (u % 64);
                        }
                    }
                }
            }
            return g;
        }
        let thr = (p.clamp(0.0, 1.0) * 4_294_967_296.0) as u64;
        let mut buf = 0u64;
        let mut have = 0;
        for u in 0..n {
            for v in u + 1..n {
                if have == 0 {
                    buf = rng.next_u64();
                    have = 2;
                }
                let draw = buf & 0xffff_ffff;
                buf >>= 32;
                have -= 1;
                if draw < thr {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Build from a mask over the pairs (0,1), (0,2), …, (n−2,n−1) in lexicographic order.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Self::empty(n);
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    g.add_edge(u, v);
                }
                bit += 1;
            }
        }
        g
    }
}

/// Number of arrangements (a₁,…,a_k) of distinct vertices with γ ⊆ Γ[a₁,…,a_k].
pub fn count_copies(g: &Graph, pattern: &PatternGraph) -> Result<u64> {
    if g.n > MAX_COUNT_N {
        return Err(Error::TooLarge(format!("graph on {} vertices", g.n)));
    }
    if *pattern == PatternGraph::triangle() {
        return Ok(6 * triangle_count(g));
    }
    if *pattern == PatternGraph::edge() {
        return Ok(2 * g.edge_count() as u64);
    }
    // backtracking over injective maps, checking edges to earlier pattern vertices
    let back: Vec<Vec<usize>> = (0..pattern.k)
        .map(|i| {
            pattern
                .edges
                .iter()
                .filter_map(|&(a, b)| {
                    if b == i && a < i {
                        Some(a)
                    } else if a == i && b < i {
                        Some(b)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let mut image = vec![0usize; pattern.k];
    let mut used = vec![false; g.n];
    fn go(i: usize, g: &Graph, back: &[Vec<usize>], image: &mut [usize], used: &mut [bool]) -> u64 {
        if i == back.len() {
            return 1;
        }
        let mut total = 0;
        for v in 0..g.n {
            if !used[v] && back[i].iter().all(|&j| g.has_edge(image[j], v)) {
                used[v] = true;
                image[i] = v;
                total += go(i + 1, g, back, image, used);
                used[v] = false;
            }
        }
        total
    }
    Ok(go(0, g, &back, &mut image, &mut used))
}

/// Unordered triangles.
pub fn triangle_count(g: &Graph) -> u64 {
    let mut t = 0u64;
    for u in 0..g.n {
        let ru = g.row(u);
        for k in (u + 1) / 64..g.words {
            let mut w = ru[k];
            if k * 64 <= u {
                w &= !((2u64 << (u - k * 64)).wrapping_sub(1));
            }
            while w != 0 {
                let v = k * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                // common neighbours above v
                let rv = g.row(v);
                for j in v / 64..g.words {
                    let mut c = ru[j] & rv[j];
                    if j * 64 <= v {
                        c &= !((2u64 << (v - j * 64)).wrapping_sub(1));
                    }
                    t += c.count_ones() as u64;
                }
            }
        }
    }
    t
}

/// n(n−1)⋯(n−k+1)
pub fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n as i64 - i as i64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactCumulants {
    pub n: usize,
    pub p: BigRational,
    /// κ¹..κ^r
    pub kappa: Vec<BigRational>,
}

fn check_p(p: &BigRational) -> Result<()> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(Error::OutOfRange { value: p.to_f64().unwrap_or(f64::NAN), index: None });
    }
    Ok(())
}

fn pow(p: &BigRational, e: usize) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e {
        r *= p;
    }
    r
}

/// κ¹..κ^r of X_γ by exact expectation over all 2^{C(n,2)} graphs.
pub fn exact_cumulants_bruteforce(
    n: usize,
    pattern: &PatternGraph,
    p: &BigRational,
    r: usize,
) -> Result<ExactCumulants> {
    if n > MAX_BRUTE_N {
        return Err(Error::TooLarge(format!("n = {n} exceeds {MAX_BRUTE_N}")));
    }
    check_p(p)?;
    let pairs = n * n.saturating_sub(1) / 2;
    // tally[(edges, count)] = number of graphs
    let tally: HashMap<(usize, u64), u64> = (0..1u64 << pairs)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<(usize, u64), u64>, mask| {
            let g = Graph::from_pair_mask(n, mask);
            let c = count_copies(&g, pattern).expect("small graph");
            *acc.entry((mask.count_ones() as usize, c)).or_insert(0) += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let q = BigRational::one() - p;
    let moments: Vec<BigRational> = (1..=r)
        .map(|j| {
            tally
                .iter()
                .map(|(&(e, c), &mult)| {
                    pow(p, e)
                        * pow(&q, pairs - e)
                        * BigRational::from_integer(BigInt::from(mult) * BigInt::from(c).pow(j as u32))
                })
                .sum()
        })
        .collect();
    Ok(ExactCumulants { n, p: p.clone(), kappa: cumulants_from_power_moments(&moments) })
}

/// Arrangements of the pattern inside [0, m): ordered k-tuples of distinct vertices.
fn arrangements(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..m {
            if !cur.contains(&v) {
                cur.push(v);
                go(m, k, cur, out);
                cur.pop();
            }
        }
    }
    go(m, k, &mut cur, &mut out);
    out
}

/// Overlap-class expansion κ^(r)(X_γ^(n)) = Σ_m C(n, m) S_m, where S_m sums the joint
/// cumulants κ(δ_{A₁},…,δ_{A_r}) over tuples of arrangements whose union is exactly [m].
/// The joint cumulant only sees edge-set unions, E[∏_{i∈B} δ_{A_i}] = p^{|∪ E(A_i)|}.
/// Returns the coefficients of κ^(r) as a polynomial in n (power basis).
pub fn overlap_cumulant_poly(pattern: &PatternGraph, r: usize, p: &BigRational) -> Result<Vec<BigRational>> {
    check_p(p)?;
    if r == 0 || r > 4 {
        return Err(Error::UnsupportedOrder(r));
    }
    let k = pattern.k;
    let top = pattern.cumulant_degree(r).min(r * k);
    let parts = set_partitions(r);
    let mut poly = vec![BigRational::zero(); top + 1];
    for m in k..=top {
        let arr = arrangements(m, k);
        let edge_sets: Vec<u64> = arr
            .iter()
            .map(|a| {
                pattern.edges.iter().fold(0u64, |acc, &(x, y)| {
                    let (u, v) = (a[x].min(a[y]), a[x].max(a[y]));
                    acc | 1 << (u * m + v)
                })
            })
            .collect();
        let vsets: Vec<u32> = arr.iter().map(|a| a.iter().fold(0u32, |acc, &v| acc | 1 << v)).collect();
        let full = (1u32 << m) - 1;
        // κ = Σ_π μ(π) p^{Σ_b |∪_{i∈b} E(A_i)|}, accumulated as integer coefficients in p
        let mut coef = vec![0i64; r * pattern.h() + 1];
        let mut idx = vec![0usize; r];
        let total = arr.len().pow(r as u32);
        let mobius: Vec<i64> = parts.iter().map(|part| part.mobius()).collect();
        for _ in 0..total {
            if idx.iter().fold(0u32, |acc, &i| acc | vsets[i]) == full {
                for (part, &mu) in parts.iter().zip(&mobius) {
                    let e: u32 = part
                        .blocks()
                        .iter()
                        .map(|b| b.iter().fold(0u64, |acc, &i| acc | edge_sets[idx[i]]).count_ones())
                        .sum();
                    coef[e as usize] += mu;
                }
            }
            for j in 0..r {
                idx[j] += 1;
                if idx[j] < arr.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
        let s_m: BigRational = coef
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| BigRational::from_integer(BigInt::from(c)) * pow(p, e))
            .sum();
        // C(n, m) = n↓m / m! in the power basis
        let mut c = vec![BigRational::one()];
        for i in 0..m {
            let mut next = vec![BigRational::zero(); c.len() + 1];
            for (d, a) in c.iter().enumerate() {
                next[d + 1] += a;
                next[d] -= a * BigRational::from_integer(BigInt::from(i));
            }
            c = next;
        }
        let mf = BigRational::from_integer((1..=m).fold(BigInt::one(), |a, i| a * BigInt::from(i)));
        for (d, a) in c.iter().enumerate() {
            poly[d] += a * &s_m / &mf;
        }
    }
    while poly.len() > 1 && poly.last().unwrap().is_zero() {
        poly.pop();
    }
    Ok(poly)
}

pub fn eval_poly(c: &[BigRational], n: usize) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(n));
    c.iter().rev().fold(BigRational::zero(), |acc, a| acc * &x + a)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interpolation {
    /// Power-basis coefficients through all points but the held-out one.
    pub coeffs: Vec<BigRational>,
    pub held_out: usize,
    pub residual: BigRational,
}

/// Lagrange interpolation through (n_i, κ^(r)(n_i)) in exact arithmetic; the last point is held out.
pub fn polynomiality_check(
    pattern: &PatternGraph,
    p: &BigRational,
    r: usize,
    n_list: &[usize],
) -> Result<Interpolation> {
    let deg = pattern.cumulant_degree(r);
    if n_list.len() < deg + 2 {
        return Err(Error::InsufficientPoints { needed: deg + 2, got: n_list.len() });
    }
    let values: Vec<BigRational> = n_list
        .iter()
        .map(|&n| exact_cumulants_bruteforce(n, pattern, p, r).map(|c| c.kappa[r - 1].clone()))
        .collect::<Result<_>>()?;
    let m = n_list.len() - 1;
    let xs: Vec<BigRational> = n_list[..m].iter().map(|&n| BigRational::from_integer(BigInt::from(n))).collect();
    let mut coeffs = vec![BigRational::zero(); m];
    for i in 0..m {
        // basis polynomial ∏_{j≠i} (x − x_j)/(x_i − x_j)
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
            coeffs[d] += a * &values[i] / &denom;
        }
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    let held_out = n_list[m];
    let residual = eval_poly(&coeffs, held_out) - &values[m];
    Ok(Interpolation { coeffs, held_out, residual })
}

/// σ² = 2h²p^{2h−1}(1−p) and L = 12h³(h−1)p^{3h−2}(1−p)² + 4h³p^{3h−2}(1−p)(1−2p).
pub fn sigma2_l(pattern: &PatternGraph, p: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::DegenerateP);
    }
    let h = pattern.h() as f64;
    let s2 = 2.0 * h * h * p.powf(2.0 * h - 1.0) * (1.0 - p);
    let l = 12.0 * h.powi(3) * (h - 1.0) * p.powf(3.0 * h - 2.0) * (1.0 - p).powi(2)
        + 4.0 * h.powi(3) * p.powf(3.0 * h - 2.0) * (1.0 - p) * (1.0 - 2.0 * p);
    Ok((s2, l))
}

/// Exact versions of σ² and L for rational p.
pub fn sigma2_l_exact(pattern: &PatternGraph, p: &BigRational) -> Result<(BigRational, BigRational)> {
    if !(p > &BigRational::zero() && p < &BigRational::one()) {
        return Err(Error::DegenerateP);
    }
    let h = pattern.h();
    let hq = BigRational::from_integer(BigInt::from(h));
    let q = BigRational::one() - p;
    let two = BigRational::from_integer(BigInt::from(2));
    let s2 = &two * &hq * &hq * pow(p, 2 * h - 1) * &q;
    let h3 = &hq * &hq * &hq;
    let l = BigRational::from_integer(BigInt::from(12))
        * &h3
        * (&hq - BigRational::one())
        * pow(p, 3 * h - 2)
        * &q
        * &q
        + BigRational::from_integer(BigInt::from(4)) * &h3 * pow(p, 3 * h - 2) * &q * (BigRational::one() - &two * p);
    Ok((s2, l))
}

fn triangle_parts(n: usize, p: f64, v: f64) -> Result<(f64, f64, Vec<String>)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::DegenerateP);
    }
    if !(v > 0.0) {
        return Err(Error::Invalid("v must be positive".into()));
    }
    let s = p.powi(5) * (1.0 - p);
    let u = v / (18.0 * s).sqrt();
    let cubic = (7.0 - 8.0 * p) * v.powi(3) / (324.0 * n as f64 * p.powi(8) * (1.0 - p).powi(2));
    let mut flags = Vec::new();
    if v < 1.0 {
        flags.push("below_window".to_string());
    }
    if v > (n as f64).sqrt() {
        flags.push("beyond_window".to_string());
    }
    Ok((u, cubic, flags))
}

/// Threshold n³p³ + n²(v − 3p³) of the triangle-count display.
pub fn triangle_threshold(n: usize, p: f64, v: f64) -> f64 {
    let nf = n as f64;
    nf.powi(3) * p.powi(3) + nf * nf * (v - 3.0 * p.powi(3))
}

/// √(9p⁵(1−p)/(πv²)) exp(−v²/(36p⁵(1−p)) + (7−8p)v³/(324 n p⁸(1−p)²)).
pub fn triangle_deviation(n: usize, p: f64, v: f64) -> Result<DeviationEstimate<f64>> {
    let (u, cubic, flags) = triangle_parts(n, p, v)?;
    let s = p.powi(5) * (1.0 - p);
    let leading = (9.0 * s / (PI * v * v)).sqrt();
    let rate = v * v / (36.0 * s);
    debug_assert!((rate - u * u / 2.0).abs() <= 1e-9 * rate.max(1.0));
    let log_prob = -rate + leading.ln() + cubic;
    Ok(DeviationEstimate {
        regime: Regime::CumulantModerate,
        log_prob,
        prob: log_prob.exp(),
        leading,
        correction: cubic.exp(),
        exponent_rate: rate,
        flags,
    })
}

/// Same display with the exact Gaussian tail P[N ≥ u] in place of e^{−u²/2}/(u√2π).
pub fn triangle_deviation_uniform(n: usize, p: f64, v: f64) -> Result<DeviationEstimate<f64>> {
    let (u, cubic, mut flags) = triangle_parts(n, p, v)?;
    flags.push("uniform_gaussian_factor".to_string());
    let leading = mills(u);
    let log_prob = -u * u / 2.0 + leading.ln() + cubic;
    debug_assert!((log_prob - (gaussian_tail(u).ln() + cubic)).abs() < 1e-9 || u > 30.0);
    Ok(DeviationEstimate {
        regime: Regime::CumulantModerate,
        log_prob,
        prob: log_prob.exp(),
        leading,
        correction: cubic.exp(),
        exponent_rate: u * u / 2.0,
        flags,
    })
}

const ER_CHUNK: u64 = 256;

/// Pattern counts of `trials` independent G(n, p) samples; chunk c uses stream c of the seed.
pub fn sample_counts(n: usize, pattern: &PatternGraph, p: f64, trials: u64, seed: u64) -> Result<Vec<u64>> {
    if n > MAX_COUNT_N {
        return Err(Error::TooLarge(format!("n = {n}")));
    }
    let chunks = trials.div_ceil(ER_CHUNK);
    let out: Result<Vec<Vec<u64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let m = ER_CHUNK.min(trials - c * ER_CHUNK);
            (0..m).map(|_| count_copies(&Graph::sample_gnp(n, p, &mut rng), pattern)).collect()
        })
        .collect();
    Ok(out?.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct McCumulants {
    pub n: usize,
    pub trials: u64,
    /// κ¹, κ², κ³ (k-statistics)
    pub kappa: [f64; 3],
    /// delete-one jackknife standard errors
    pub se: [f64; 3],
}

fn k_stats(s: [f64; 4], n: f64) -> [f64; 3] {
    // s = [count, Σx, Σx², Σx³]
    let mean = s[1] / n;
    let m2 = s[2] / n - mean * mean;
    let m3 = s[3] / n - 3.0 * mean * s[2] / n + 2.0 * mean.powi(3);
    [mean, n / (n - 1.0) * m2, n * n / ((n - 1.0) * (n - 2.0)) * m3]
}

/// κ estimates from samples, centred at the first sample for stability.
pub fn cumulants_from_samples(x: &[u64]) -> Result<McCumulants> {
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientPoints { needed: 3, got: n });
    }
    let shift = x.iter().sum::<u64>() as f64 / n as f64;
    let y: Vec<f64> = x.iter().map(|&v| v as f64 - shift).collect();
    let mut s = [n as f64, 0.0, 0.0, 0.0];
    for &v in &y {
        s[1] += v;
        s[2] += v * v;
        s[3] += v * v * v;
    }
    let mut full = k_stats(s, n as f64);
    full[0] += shift;
    let mut acc = [[0.0f64; 2]; 3];
    for &v in &y {
        let mut k = k_stats([s[0] - 1.0, s[1] - v, s[2] - v * v, s[3] - v * v * v], n as f64 - 1.0);
        k[0] += shift;
        for j in 0..3 {
            acc[j][0] += k[j];
            acc[j][1] += k[j] * k[j];
        }
    }
    let nf = n as f64;
    let se = [0, 1, 2].map(|j| {
        let mean = acc[j][0] / nf;
        ((nf - 1.0) / nf * (acc[j][1] - nf * mean * mean)).max(0.0).sqrt()
    });
    Ok(McCumulants { n: 0, trials: n as u64, kappa: full, se })
}

pub fn mc_cumulants(n: usize, pattern: &PatternGraph, p: f64, trials: u64, seed: u64) -> Result<McCumulants> {
    if trials < 1000 {
        return Err(Error::Invalid("need at least 10³ trials".into()));
    }
    let x = sample_counts(n, pattern, p, trials, seed)?;
    let mut c = cumulants_from_samples(&x)?;
    c.n = n;
    Ok(c)
}

/// Prop.-style bound 2^{r−1} r^{r−2} n^k (k⁴ n^{k−2})^{r−1} on |κ^(r)(X_γ)|.
pub fn subgraph_cumulant_bound(n: usize, k: usize, r: usize) -> f64 {
    let nf = n as f64;
    let kf = k as f64;
    2f64.powi(r as i32 - 1)
        * (r as f64).powi(r as i32 - 2)
        * nf.powi(k as i32)
        * (kf.powi(4) * nf.powi(k as i32 - 2)).powi(r as i32 - 1)
}
