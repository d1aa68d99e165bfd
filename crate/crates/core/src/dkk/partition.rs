use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite ordered partition of `[1, M_R]` into consecutive intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Partition {
    sizes: Vec<usize>,
    ends: Vec<usize>,
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.sizes
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(sizes: Vec<usize>) -> Result<Self> {
        Partition::new(sizes)
    }
}

impl Partition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Config("partition needs at least one block and no empty blocks".into()));
        }
        let ends = sizes
            .iter()
            .scan(0usize, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect();
        Ok(Partition { sizes, ends })
    }

    /// `σ_n = [2^{n-1}, 2^n - 1]` for `n = 1..=blocks`.
    pub fn dyadic(blocks: usize) -> Result<Self> {
        if blocks == 0 || blocks > 40 {
            return Err(Error::Config(format!("dyadic partition needs 1..=40 blocks, got {blocks}")));
        }
        Partition::new((0..blocks).map(|n| 1usize << n).collect())
    }

    /// Number of blocks `R`.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `M_R`.
    pub fn total(&self) -> usize {
        *self.ends.last().expect("partition is non-empty")
    }

    /// `|σ_n|`, 1-based.
    pub fn size(&self, n: usize) -> usize {
        self.sizes[n - 1]
    }

    /// `M_r`, 1-based; `M_0 = 0`.
    pub fn m_r(&self, r: usize) -> usize {
        if r == 0 {
            0
        } else {
            self.ends[r - 1]
        }
    }

    /// 0-based coordinate range of `σ_n` (1-based `n`).
    pub fn block(&self, n: usize) -> Range<usize> {
        self.m_r(n - 1)..self.m_r(n)
    }

    /// 1-based block containing the 0-based coordinate `j`.
    pub fn block_of(&self, j: usize) -> Option<usize> {
        if j >= self.total() {
            return None;
        }
        Some(self.ends.partition_point(|&e| e <= j) + 1)
    }

    /// `C_σ = max_r M_r / |σ_r|`.
    pub fn c_sigma(&self) -> f64 {
        (1..=self.len()).map(|r| self.m_r(r) as f64 / self.size(r) as f64).fold(0.0, f64::max)
    }

    /// `max_r M_r / |σ_{r+1}|`, `None` with a single block.
    pub fn condition_a(&self) -> Option<f64> {
        (self.len() > 1).then(|| {
            (1..self.len()).map(|r| self.m_r(r) as f64 / self.size(r + 1) as f64).fold(0.0, f64::max)
        })
    }

    /// `max_r ln(M_r) / r`.
    pub fn condition_b(&self) -> f64 {
        (1..=self.len()).map(|r| (self.m_r(r) as f64).ln() / r as f64).fold(0.0, f64::max)
    }

    /// `∪_{n ∈ blocks} σ_n` as sorted 0-based coordinates (`blocks` 1-based).
    pub fn union_of(&self, blocks: &[usize]) -> Vec<usize> {
        let mut b = blocks.to_vec();
        b.sort_unstable();
        b.dedup();
        b.into_iter().flat_map(|n| self.block(n)).collect()
    }

    /// The 1-based blocks whose union is `set`, or `None` if `set` cuts a block.
    pub fn as_block_union(&self, set: &[usize]) -> Option<Vec<usize>> {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        let mut blocks: Vec<usize> = Vec::new();
        for &j in &s {
            let n = self.block_of(j)?;
            if blocks.last() != Some(&n) {
                blocks.push(n);
            }
        }
        let count: usize = blocks.iter().map(|&n| self.size(n)).sum();
        (count == s.len()).then_some(blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_blocks() {
        let p = Partition::dyadic(4).unwrap();
        assert_eq!(p.sizes(), &[1, 2, 4, 8]);
        assert_eq!(p.total(), 15);
        assert_eq!(p.block(3), 3..7);
        assert_eq!(p.block_of(0), Some(1));
        assert_eq!(p.block_of(6), Some(3));
        assert_eq!(p.block_of(7), Some(4));
        assert_eq!(p.block_of(15), None);
        // M_r / |σ_r| = (2^r - 1) / 2^{r-1}
        assert_eq!(p.c_sigma(), 15.0 / 8.0);
        assert_eq!(p.condition_a(), Some(7.0 / 8.0));
        assert!((p.condition_b() - (15f64).ln() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn block_unions() {
        let p = Partition::dyadic(3).unwrap();
        assert_eq!(p.union_of(&[1, 3]), vec![0, 3, 4, 5, 6]);
        assert_eq!(p.as_block_union(&[0, 3, 4, 5, 6]), Some(vec![1, 3]));
        assert_eq!(p.as_block_union(&[0, 3]), None);
        assert_eq!(p.as_block_union(&[]), Some(vec![]));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 0]).is_err());
        assert!(Partition::new(vec![2, 3]).unwrap().condition_a().is_some());
        assert!(Partition::new(vec![5]).unwrap().condition_a().is_none());
    }
}
