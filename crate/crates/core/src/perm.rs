//! Permutations of `{0, .., n-1}` stored by their image vectors.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A bijection `i -> images[i]` of `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidParameter(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images, as written in the CLI.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidParameter("1-based permutation contains 0".into()));
        }
        Permutation::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The transposition of `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `self.then(other)` applies `self` first: `i -> other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    /// Block sum: `self` on the first positions, `other` shifted after them.
    pub fn direct_sum(&self, other: &Permutation) -> Self {
        let k = self.len();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + k));
        Permutation { images }
    }

    /// Moves the item at position `i` to position `self(i)`.
    pub fn permute<T: Clone>(&self, items: &[T]) -> Vec<T> {
        assert_eq!(items.len(), self.len(), "permutation size differs from slice length");
        let mut out: Vec<Option<T>> = vec![None; items.len()];
        for (i, item) in items.iter().enumerate() {
            out[self.images[i]] = Some(item.clone());
        }
        out.into_iter().map(|x| x.expect("bijection")).collect()
    }

    /// The stable sort permutation: position `i` of `keys` moves to its rank.
    pub fn stable_sort<T: Ord>(keys: &[T]) -> Self {
        let mut idx: Vec<usize> = (0..keys.len()).collect();
        idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut images = vec![0; keys.len()];
        for (rank, &i) in idx.iter().enumerate() {
            images[i] = rank;
        }
        Permutation { images }
    }

    /// Block permutation: block `i` of the given sizes moves to slot `self(i)`,
    /// expanded to a permutation of the underlying points.
    pub fn expand_blocks(&self, sizes: &[usize]) -> Self {
        assert_eq!(sizes.len(), self.len(), "one size per block");
        let new_sizes = self.permute(sizes);
        let mut new_offset = vec![0; sizes.len()];
        let mut acc = 0;
        for (slot, &s) in new_sizes.iter().enumerate() {
            new_offset[slot] = acc;
            acc += s;
        }
        let mut images = Vec::with_capacity(acc);
        for (b, &s) in sizes.iter().enumerate() {
            let base = new_offset[self.images[b]];
            images.extend(base..base + s);
        }
        Permutation { images }
    }

    /// Decomposes into adjacent transpositions `(i, i+1)`, listed in the
    /// order they are applied.
    pub fn adjacent_transpositions(&self) -> Vec<usize> {
        // Bubble sort of destinations: `cur[k]` is the destination of the item
        // currently at slot k, and each swap is one generator.
        let mut cur = self.images.clone();
        let n = cur.len();
        let mut swaps = Vec::new();
        loop {
            let mut changed = false;
            for k in 0..n.saturating_sub(1) {
                if cur[k] > cur[k + 1] {
                    cur.swap(k, k + 1);
                    swaps.push(k);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        swaps
    }

    /// All permutations of `n` points in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_decomposition_reproduces_permutation() {
        for p in Permutation::all(4) {
            let mut acc = Permutation::identity(4);
            for k in p.adjacent_transpositions() {
                acc = acc.then(&Permutation::transposition(4, k, k + 1));
            }
            assert_eq!(acc, p);
        }
    }

    #[test]
    fn stable_sort_moves_items_to_rank() {
        let keys = ["-", "+", "-", "+"];
        let p = Permutation::stable_sort(&keys);
        assert_eq!(p.permute(&keys), vec!["+", "+", "-", "-"]);
        assert_eq!(p.images(), &[2, 0, 3, 1]);
    }

    #[test]
    fn expand_blocks_swaps_blocks() {
        let p = Permutation::new(vec![1, 0]).unwrap();
        let e = p.expand_blocks(&[2, 1]);
        assert_eq!(e.permute(&["a", "b", "c"]), vec!["c", "a", "b"]);
    }

    #[test]
    fn all_counts() {
        assert_eq!(Permutation::all(0).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
    }
}
