use crate::error::{Error, Result};

use super::partition::{CycleType, Partition};

/// A bijection on `{0..p}`; `mapping[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidPermutation(format!("{mapping:?} is not a bijection")));
            }
        }
        Ok(Self(mapping))
    }

    pub fn identity(p: usize) -> Self {
        Self((0..p).collect())
    }

    /// The permutation with cycles `(0..c1)(c1..c1+c2)...` of the given type.
    pub fn from_cycle_type(ct: &CycleType) -> Self {
        let mut mapping = Vec::with_capacity(ct.size());
        let mut start = 0;
        for &len in ct.parts() {
            for i in 0..len {
                mapping.push(start + (i + 1) % len);
            }
            start += len;
        }
        Self(mapping)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Self(inv)
    }

    fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lengths = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_lengths().len()
    }

    pub fn cycle_type(&self) -> CycleType {
        Partition::from_unsorted(self.cycle_lengths())
    }

    /// All `p!` permutations in lexicographic order, identity first.
    pub fn all(p: usize) -> Vec<Self> {
        let mut current: Vec<usize> = (0..p).collect();
        let mut out = vec![Self(current.clone())];
        // Standard next-permutation step.
        loop {
            let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
            out.push(Self(current.clone()));
        }
    }
}
