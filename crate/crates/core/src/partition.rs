//! Integer partitions with the dominance order.
//!
//! Partitions index Whittaker supports: a block's decomposition matrix is
//! unitriangular exactly because nonzero entries force a strict dominance
//! drop. Conjugation (transposition of the Young diagram) reverses the
//! order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition, rejecting empty input, zero parts and
    /// non-monotone sequences. Partitions of 0 are not objects here.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain("partition must be nonempty".into()));
        }
        for window in parts.windows(2) {
            if window[0] < window[1] {
                return Err(Error::Domain(format!(
                    "partition parts must be weakly decreasing, got {:?}",
                    parts
                )));
            }
        }
        if *parts.last().unwrap() == 0 {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Conjugate partition: part i of the result counts the parts of
    /// `self` that are >= i+1. Involution.
    pub fn conjugate(&self) -> Partition {
        let max = self.parts[0];
        let parts = (1..=max)
            .map(|i| self.parts.iter().filter(|&&p| p >= i).count() as u64)
            .collect();
        Partition { parts }
    }

    /// Entrywise sum with zero padding on the shorter argument.
    ///
    /// This is the composition rule for Whittaker partitions of induced
    /// representations; the result is again weakly decreasing.
    pub fn entrywise_sum(&self, other: &Partition) -> Partition {
        let n = self.parts.len().max(other.parts.len());
        let parts = (0..n)
            .map(|i| {
                self.parts.get(i).copied().unwrap_or(0) + other.parts.get(i).copied().unwrap_or(0)
            })
            .collect();
        Partition { parts }
    }

    /// Constant partition with `count` parts equal to `value`.
    pub fn rectangle(value: u64, count: usize) -> Result<Partition> {
        if value == 0 || count == 0 {
            return Err(Error::Domain("rectangle partition needs positive sides".into()));
        }
        Ok(Partition {
            parts: vec![value; count],
        })
    }
}

/// Dominance order: `lhs <= rhs` iff every prefix sum of `lhs` is at most
/// the corresponding prefix sum of `rhs` (zero-padded). Only defined for
/// partitions of the same total.
pub fn dominance_leq(lhs: &Partition, rhs: &Partition) -> Result<bool> {
    if lhs.total() != rhs.total() {
        return Err(Error::Domain(format!(
            "dominance compares partitions of equal totals, got {} and {}",
            lhs.total(),
            rhs.total()
        )));
    }
    let n = lhs.parts.len().max(rhs.parts.len());
    let mut acc_l = 0u64;
    let mut acc_r = 0u64;
    for i in 0..n {
        acc_l += lhs.parts.get(i).copied().unwrap_or(0);
        acc_r += rhs.parts.get(i).copied().unwrap_or(0);
        if acc_l > acc_r {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap());
        assert!(dominance_leq(&p(&[2, 1]), &p(&[2, 1])).unwrap());
        assert!(dominance_leq(&p(&[2, 2]), &p(&[3, 1])).unwrap());
        assert!(!dominance_leq(&p(&[3, 1]), &p(&[2, 2])).unwrap());
        assert!(!dominance_leq(&p(&[2]), &p(&[1, 1])).unwrap());
        assert!(dominance_leq(&p(&[2]), &p(&[2, 1])).is_err());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[1, 1, 1]).conjugate(), p(&[3]));
        let lambda = p(&[4, 2, 1]);
        assert_eq!(lambda.conjugate().conjugate(), lambda);
    }

    #[test]
    fn rejects_invalid() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    /// All partitions of `total`, largest part first.
    fn partitions_of(total: u64) -> Vec<Partition> {
        fn go(rem: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition::new(prefix.clone()).unwrap());
                return;
            }
            for next in (1..=rem.min(max)).rev() {
                prefix.push(next);
                go(rem - next, next, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(total, total, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn dominance_is_partial_order_small_totals() {
        for total in 1..=7u64 {
            let all = partitions_of(total);
            for a in &all {
                assert!(dominance_leq(a, a).unwrap());
                for b in &all {
                    let ab = dominance_leq(a, b).unwrap();
                    let ba = dominance_leq(b, a).unwrap();
                    if ab && ba {
                        assert_eq!(a, b);
                    }
                    for c in &all {
                        if ab && dominance_leq(b, c).unwrap() {
                            assert!(dominance_leq(a, c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dominance_partial_order_random_triples() {
        // Larger totals, sampled: reflexivity, antisymmetry, transitivity.
        let mut state = 0x5eed_1234u64;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        for total in 8..=12u64 {
            let all = partitions_of(total);
            for _ in 0..2000 {
                let a = &all[(next() % all.len() as u64) as usize];
                let b = &all[(next() % all.len() as u64) as usize];
                let c = &all[(next() % all.len() as u64) as usize];
                assert!(dominance_leq(a, a).unwrap());
                if dominance_leq(a, b).unwrap() && dominance_leq(b, a).unwrap() {
                    assert_eq!(a, b);
                }
                if dominance_leq(a, b).unwrap() && dominance_leq(b, c).unwrap() {
                    assert!(dominance_leq(a, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn conjugation_reverses_dominance_exhaustive() {
        for total in 1..=8u64 {
            let all = partitions_of(total);
            for a in &all {
                for b in &all {
                    let ab = dominance_leq(a, b).unwrap();
                    let rev = dominance_leq(&b.conjugate(), &a.conjugate()).unwrap();
                    assert_eq!(ab, rev, "conjugation must reverse dominance: {:?} {:?}", a, b);
                }
            }
        }
    }
}
