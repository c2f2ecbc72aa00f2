use super::setpart::{set_partitions, SetPartition, MAX_PARTITION_SIZE};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Edge-subset enumeration limit for F_H.
pub const MAX_SUBSET_EDGES: usize = 24;
/// Deletion–contraction limit for Tutte evaluations.
pub const MAX_TUTTE_EDGES: usize = 20;

/// Multigraph on vertices 0..n with loops and parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::OutOfRange { value: a.max(b) as f64, index: Some(a.max(b)) });
        }
        let edges = edges.into_iter().map(|(a, b)| if a <= b { (a, b) } else { (b, a) }).collect();
        Ok(Self { n, edges })
    }

    /// Parse "1-2,2-3,1-3" with 1-based vertices; the vertex count is the largest label
    /// unless given.
    pub fn parse_edges(s: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = tok.split_once('-').ok_or_else(|| Error::Invalid(format!("bad edge '{tok}'")))?;
            let a: usize = a.trim().parse().map_err(|_| Error::Invalid(format!("bad vertex in '{tok}'")))?;
            let b: usize = b.trim().parse().map_err(|_| Error::Invalid(format!("bad vertex in '{tok}'")))?;
            if a == 0 || b == 0 {
                return Err(Error::Invalid("vertices are numbered from 1".into()));
            }
            edges.push((a - 1, b - 1));
        }
        let top = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1);
        let n = n.unwrap_or(top);
        Self::new(n, edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn components_with(&self, keep: impl Fn(usize) -> bool) -> usize {
        let mut uf = UnionFind::new(self.n);
        let mut comps = self.n;
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if keep(k) && uf.union(a, b) {
                comps -= 1;
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components_with(|_| true) == 1
    }

    /// H∖e
    pub fn delete(&self, e: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Self { n: self.n, edges }
    }

    /// H/e for a non-loop edge: merge its endpoints (other parallel copies become loops).
    pub fn contract_edge(&self, e: usize) -> Self {
        let (a, b) = self.edges[e];
        let relabel = |v: usize| {
            let v = if v == b { a } else { v };
            if v > b {
                v - 1
            } else {
                v
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != e)
            .map(|(_, &(x, y))| {
                let (x, y) = (relabel(x), relabel(y));
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        Self { n: self.n - 1, edges }
    }

    /// H/π: one vertex per block, edges joining different blocks (inner edges become loops).
    pub fn contract_partition(&self, p: &SetPartition) -> Self {
        let b = p.block_of();
        let edges = self
            .edges
            .iter()
            .map(|&(x, y)| {
                let (x, y) = (b[x], b[y]);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        Self { n: p.len(), edges }
    }

    /// H[V'] with vertices renumbered in increasing order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            pos[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(x, y)| pos[x] != usize::MAX && pos[y] != usize::MAX)
            .map(|&(x, y)| (pos[x].min(pos[y]), pos[x].max(pos[y])))
            .collect();
        Self { n: vertices.len(), edges }
    }

    /// Relabel vertices by (degree, sorted neighbour degrees) and sort the edge list.
    fn canonical_key(&self) -> (usize, Vec<(usize, usize)>) {
        let mut deg = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let sig: Vec<(usize, Vec<usize>)> = (0..self.n)
            .map(|v| {
                let mut nb: Vec<usize> = self
                    .edges
                    .iter()
                    .filter_map(|&(a, b)| {
                        if a == v {
                            Some(deg[b])
                        } else if b == v {
                            Some(deg[a])
                        } else {
                            None
                        }
                    })
                    .collect();
                nb.sort_unstable();
                (deg[v], nb)
            })
            .collect();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&x, &y| sig[x].cmp(&sig[y]));
        let mut pos = vec![0; self.n];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b]))).collect();
        edges.sort_unstable();
        (self.n, edges)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// F_H = Σ over connected spanning edge subsets E of (−1)^{|E|−|V|+1}.
pub fn f_functional(h: &MultiGraph) -> Result<BigInt> {
    let m = h.edge_count();
    if m > MAX_SUBSET_EDGES {
        return Err(Error::TooLarge(format!("{m} edges exceed the subset-enumeration limit {MAX_SUBSET_EDGES}")));
    }
    if h.n == 0 {
        return Ok(BigInt::zero());
    }
    let mut total: i64 = 0;
    for s in 0u32..(1u32 << m) {
        if h.components_with(|k| s >> k & 1 == 1) == 1 {
            let exp = s.count_ones() as i64 - h.n as i64 + 1;
            total += if exp % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(BigInt::from(total))
}

/// F_H by deletion–contraction: T_H(1,0) on connected graphs, 0 otherwise.
pub fn f_functional_recursive(h: &MultiGraph) -> Result<BigInt> {
    if !h.is_connected() {
        return Ok(BigInt::zero());
    }
    tutte_point(h, 1, 0)
}

/// Number of spanning trees (with multiplicity) by the Matrix-Tree theorem.
pub fn spanning_tree_count(h: &MultiGraph) -> BigInt {
    let n = h.n;
    if n == 0 {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let mut lap = vec![vec![BigInt::zero(); n]; n];
    for &(a, b) in &h.edges {
        if a != b {
            lap[a][a] += 1;
            lap[b][b] += 1;
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
    }
    let minor: Vec<Vec<BigInt>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    bareiss_det(minor)
}

/// Fraction-free determinant.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Spanning trees by deletion–contraction (loops ignored), for cross-checks.
pub fn spanning_tree_count_recursive(h: &MultiGraph) -> Result<BigInt> {
    if h.edge_count() > MAX_TUTTE_EDGES {
        return Err(Error::TooLarge(format!("{} edges", h.edge_count())));
    }
    fn go(h: &MultiGraph) -> BigInt {
        if h.n == 1 {
            return BigInt::one();
        }
        match h.edges.iter().position(|&(a, b)| a != b) {
            None => BigInt::zero(),
            Some(e) => go(&h.delete(e)) + go(&h.contract_edge(e)),
        }
    }
    Ok(go(h))
}

/// Tutte polynomial T_H(x, y) for x, y ∈ {0, 1}, by memoized deletion–contraction.
pub fn tutte_point(h: &MultiGraph, x: u8, y: u8) -> Result<BigInt> {
    if x > 1 || y > 1 {
        return Err(Error::Invalid("only x, y ∈ {0, 1} are supported".into()));
    }
    if h.edge_count() > MAX_TUTTE_EDGES {
        return Err(Error::TooLarge(format!("{} edges exceed {MAX_TUTTE_EDGES}", h.edge_count())));
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut memo = HashMap::new();
    Ok(tutte_rec(h, x, y, &mut memo))
}

fn tutte_rec(h: &MultiGraph, x: u8, y: u8, memo: &mut HashMap<(usize, Vec<(usize, usize)>), BigInt>) -> BigInt {
    if h.edges.is_empty() {
        return BigInt::one();
    }
    let key = h.canonical_key();
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let (a, b) = h.edges[0];
    let v = if a == b {
        if y == 0 {
            BigInt::zero()
        } else {
            tutte_rec(&h.delete(0), x, y, memo)
        }
    } else if h.delete(0).components_with(|_| true) > h.components_with(|_| true) {
        if x == 0 {
            BigInt::zero()
        } else {
            tutte_rec(&h.contract_edge(0), x, y, memo)
        }
    } else {
        tutte_rec(&h.delete(0), x, y, memo) + tutte_rec(&h.contract_edge(0), x, y, memo)
    };
    memo.insert(key, v.clone());
    v
}

/// (2^{r−1} ST_H, Σ_π ST(H/π) ∏_i ST(H[π_i])).
pub fn bicolored_identity_check(h: &MultiGraph) -> Result<(BigInt, BigInt)> {
    let r = h.n;
    if r == 0 || r > MAX_PARTITION_SIZE {
        return Err(Error::TooLarge(format!("vertex count {r} outside 1..={MAX_PARTITION_SIZE}")));
    }
    let lhs = BigInt::from(2u32).pow(r as u32 - 1) * spanning_tree_count(h);
    let mut rhs = BigInt::zero();
    for p in set_partitions(r) {
        let mut term = spanning_tree_count(&h.contract_partition(&p));
        for b in p.blocks() {
            if term.is_zero() {
                break;
            }
            term *= spanning_tree_count(&h.induced(b));
        }
        rhs += term;
    }
    Ok((lhs, rhs))
}

/// All connected simple graphs on n labelled vertices.
pub fn connected_simple_graphs(n: usize) -> Vec<MultiGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for s in 0u64..(1u64 << pairs.len()) {
        let edges = pairs.iter().enumerate().filter(|(k, _)| s >> k & 1 == 1).map(|(_, &e)| e).collect();
        let g = MultiGraph { n, edges };
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Seeded multigraphs with 1..=max_vertices vertices and 0..=max_edges uniformly
/// placed edges (loops and parallel edges allowed).
pub fn random_multigraphs(count: usize, max_vertices: usize, max_edges: usize, seed: u64) -> Vec<MultiGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_vertices.max(1));
            let m = rng.gen_range(0..=max_edges);
            let edges = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            MultiGraph { n, edges }
        })
        .collect()
}
