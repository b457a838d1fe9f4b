use serde::{Deserialize, Serialize};

use crate::{LinalgError, Result};

/// Strictly increasing list of 1-based positions; may be the empty subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetIndex(Vec<usize>);

impl SubsetIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.first() == Some(&0) {
            return Err(LinalgError::SubsetOutOfRange { index: 0, dim: 0 });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LinalgError::SubsetNotIncreasing);
        }
        Ok(SubsetIndex(indices))
    }

    pub fn empty() -> Self {
        SubsetIndex(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        SubsetIndex((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// 0-based positions.
    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }

    pub fn check_within(&self, dim: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i > dim) {
            Some(&index) => Err(LinalgError::SubsetOutOfRange { index, dim }),
            None => Ok(()),
        }
    }

    pub fn complement(&self, n: usize) -> SubsetIndex {
        SubsetIndex((1..=n).filter(|i| !self.0.contains(i)).collect())
    }

    pub fn union(&self, other: &SubsetIndex) -> SubsetIndex {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        SubsetIndex(v)
    }

    pub fn intersection(&self, other: &SubsetIndex) -> SubsetIndex {
        SubsetIndex(self.0.iter().filter(|i| other.0.contains(i)).copied().collect())
    }

    /// Sum of the 1-based positions, used for cofactor signs.
    pub fn position_sum(&self) -> usize {
        self.0.iter().sum()
    }
}

/// All subsets of {1..n} (including ∅) in lexicographic order of index tuples.
pub fn subsets(n: usize) -> Vec<SubsetIndex> {
    let mut out = vec![SubsetIndex::empty()];
    let mut stack: Vec<usize> = Vec::new();
    fn walk(start: usize, n: usize, stack: &mut Vec<usize>, out: &mut Vec<SubsetIndex>) {
        for i in start..=n {
            stack.push(i);
            out.push(SubsetIndex(stack.clone()));
            walk(i + 1, n, stack, out);
            stack.pop();
        }
    }
    walk(1, n, &mut stack, &mut out);
    out
}

/// Subsets of {1..n} with exactly `r` elements, lexicographic.
pub fn subsets_of_size(n: usize, r: usize) -> Vec<SubsetIndex> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (1..=r).collect();
    loop {
        out.push(SubsetIndex(idx.clone()));
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - r + i + 1 {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
