//! Integer partitions in weakly decreasing order.
//!
//! A partition of `n` doubles as a conjugacy-class label (cycle type) for
//! the symmetric group on `n` letters, so this type underlies both the
//! character machinery and the splitting-type bookkeeping.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A partition of a positive integer: parts weakly decreasing, all > 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from arbitrary positive parts; sorts them.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Argument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Map part value -> multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// Number of parts equal to 1; as a cycle type this is the number of
    /// fixed points of the permutation.
    pub fn fixed_points(&self) -> u32 {
        self.parts.iter().filter(|&&p| p == 1).count() as u32
    }
}

impl fmt::Display for Partition {
    /// `a+b+c` form, e.g. `3+1+1`; the empty partition prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let joined = self
            .parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("+");
        write!(f, "{joined}")
    }
}

/// All partitions of `n`, in lexicographically decreasing order
/// (so `[n]` first, `[1,1,...,1]` last).
pub fn partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    descend(n, n, &mut current, &mut out);
    out
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    let top = remaining.min(max_part);
    for part in (1..=top).rev() {
        current.push(part);
        descend(remaining - part, part, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_four_in_order() {
        let ps = partitions(4);
        let flat: Vec<Vec<u32>> = ps.iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(
            flat,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn partition_counts() {
        // p(n) for n = 0..12
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(partitions(n as u32).len(), e, "p({n})");
        }
    }

    #[test]
    fn constructor_sorts_and_rejects_zero() {
        let p = Partition::new(vec![1, 3, 2]).unwrap();
        assert_eq!(p.parts(), &[3, 2, 1]);
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn fixed_points_counts_ones() {
        let p = Partition::new(vec![2, 1, 1]).unwrap();
        assert_eq!(p.fixed_points(), 2);
        assert_eq!(p.n(), 4);
    }
}
