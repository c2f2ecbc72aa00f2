use std::fmt;

/// Maximum ground-set size for exhaustive partition sums (Bell(9) = 21147).
pub const MAX_PARTITION_SIZE: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Build from a restricted growth string a[0..n] (a[0] = 0, a[i] ≤ 1 + max a[..i]).
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        Self { n: rgs.len(), blocks }
    }

    /// Blocks are re-sorted into canonical order; returns None unless they partition [0, n).
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = blocks;
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return None;
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= n || seen[i] {
                    return None;
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        blocks.sort();
        Some(Self { n, blocks })
    }

    pub fn one_block(n: usize) -> Self {
        Self { n, blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] } }
    }

    pub fn singletons(n: usize) -> Self {
        Self { n, blocks: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of each element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut v = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                v[i] = k;
            }
        }
        v
    }

    /// Möbius function μ(π, 1̂) = (−1)^{#π−1} (#π−1)!.
    pub fn mobius(&self) -> i64 {
        let k = self.blocks.len();
        if k == 0 {
            return 1;
        }
        let f: i64 = (1..k as i64).product();
        if k % 2 == 1 {
            f
        } else {
            -f
        }
    }

    /// Whether every block of self lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        let b = other.block_of();
        self.n == other.n && self.blocks.iter().all(|blk| blk.iter().all(|&i| b[i] == b[blk[0]]))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// All set partitions of [0, n) in restricted-growth-string order.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(SetPartition { n: 0, blocks: vec![] });
        return out;
    }
    let mut a = vec![0usize; n];
    let mut m = vec![0usize; n]; // m[i] = max a[..=i]
    loop {
        out.push(SetPartition::from_rgs(&a));
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            if a[i] <= m[i - 1] {
                a[i] += 1;
                m[i] = m[i - 1].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    m[j] = m[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

pub fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = *next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_bell_numbers() {
        let bells = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bells.iter().enumerate() {
            assert_eq!(set_partitions(n).len() as u64, b);
            assert_eq!(bell(n), b);
        }
        assert_eq!(bell(9), 21147);
    }
}
