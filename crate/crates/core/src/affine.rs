//! The extended affine symmetric group of type A~_{d-1} in window
//! notation: length, descents, Bruhat order and element enumeration.
//!
//! An element is a bijection f: Z -> Z with f(i + d) = f(i) + d, stored
//! by its window (f(1), ..., f(d)). The level (sum f(i) - i) / d is a
//! homomorphism onto Z; the non-extended Coxeter group is the level-0
//! kernel, and the rotation omega (window (2, ..., d+1)) generates the
//! length-zero extension. Bruhat order compares elements of the same
//! level only; all Kazhdan-Lusztig computations reduce to the level-0
//! component by cancelling omega.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A window-notation element of the extended affine symmetric group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffinePermutation {
    d: usize,
    window: Vec<i64>,
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl AffinePermutation {
    /// Validates that the window residues are a permutation of Z/dZ and
    /// that the level is integral.
    pub fn new(window: Vec<i64>) -> Result<Self> {
        let d = window.len();
        if d == 0 {
            return Err(Error::Domain("window must be nonempty".into()));
        }
        let mut seen = vec![false; d];
        for &x in &window {
            let r = x.rem_euclid(d as i64) as usize;
            if seen[r] {
                return Err(Error::Domain(format!(
                    "window residues must be a permutation of Z/{}Z",
                    d
                )));
            }
            seen[r] = true;
        }
        let sum: i64 = window.iter().sum();
        let base: i64 = (1..=d as i64).sum();
        if (sum - base).rem_euclid(d as i64) != 0 {
            return Err(Error::Domain("window sum is not congruent to d(d+1)/2 mod d".into()));
        }
        Ok(AffinePermutation { d, window })
    }

    pub fn identity(d: usize) -> Self {
        AffinePermutation {
            d,
            window: (1..=d as i64).collect(),
        }
    }

    /// The rotation of length zero and level 1.
    pub fn omega(d: usize) -> Self {
        AffinePermutation {
            d,
            window: (2..=d as i64 + 1).collect(),
        }
    }

    /// Simple reflection s_i, 0 <= i < d: swaps the residue classes i and
    /// i+1 mod d.
    pub fn simple(d: usize, i: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain("simple reflections need d >= 2".into()));
        }
        if i >= d {
            return Err(Error::Domain(format!("reflection index {} out of range", i)));
        }
        let mut window: Vec<i64> = (1..=d as i64).collect();
        if i == 0 {
            window[0] = 0;
            window[d - 1] = d as i64 + 1;
        } else {
            window.swap(i - 1, i);
        }
        Ok(AffinePermutation { d, window })
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// f(x) for any integer x, by periodic extension of the window.
    pub fn apply(&self, x: i64) -> i64 {
        let d = self.d as i64;
        let r = x.rem_euclid(d);
        let q = (x - r) / d;
        // Window stores f(1..=d); x = qd + r with r = 0 meaning position
        // d of block q - 1.
        if r == 0 {
            self.window[self.d - 1] + (q - 1) * d
        } else {
            self.window[(r - 1) as usize] + q * d
        }
    }

    /// The level (omega-component): (sum f(i) - i) / d.
    pub fn level(&self) -> i64 {
        let sum: i64 = self.window.iter().sum();
        let base: i64 = (1..=self.d as i64).sum();
        (sum - base) / self.d as i64
    }

    pub fn is_translation_free(&self) -> bool {
        self.level() == 0
    }

    /// Group law: (self * other)(x) = self(other(x)).
    pub fn compose(&self, other: &AffinePermutation) -> Result<AffinePermutation> {
        if self.d != other.d {
            return Err(Error::Domain("rank mismatch".into()));
        }
        let window = (1..=self.d as i64).map(|i| self.apply(other.apply(i))).collect();
        Ok(AffinePermutation { d: self.d, window })
    }

    pub fn inverse(&self) -> AffinePermutation {
        let d = self.d as i64;
        let mut window = vec![0i64; self.d];
        for (pos, &val) in self.window.iter().enumerate() {
            // f(pos + 1) = val, so f^{-1}(val) = pos + 1; shift val into
            // the window range 1..=d.
            let r = val.rem_euclid(d);
            let (idx, shift) = if r == 0 {
                (d, val - d)
            } else {
                (r, val - r)
            };
            window[(idx - 1) as usize] = pos as i64 + 1 - shift;
        }
        AffinePermutation { d: self.d, window }
    }

    /// Coxeter length: the number of affine inversions,
    /// sum_{1 <= i < j <= d} |floor((f(j) - f(i)) / d)|. Level-zero
    /// rotations contribute nothing.
    pub fn length(&self) -> u64 {
        let d = self.d as i64;
        let mut total = 0u64;
        for i in 0..self.d {
            for j in i + 1..self.d {
                let diff = self.window[j] - self.window[i];
                total += diff.div_euclid(d).unsigned_abs();
            }
        }
        total
    }

    /// Right product by s_i (acts on positions).
    pub fn right_simple(&self, i: usize) -> Result<AffinePermutation> {
        let s = AffinePermutation::simple(self.d, i)?;
        self.compose(&s)
    }

    /// Left product by s_i (acts on values).
    pub fn left_simple(&self, i: usize) -> Result<AffinePermutation> {
        let s = AffinePermutation::simple(self.d, i)?;
        s.compose(self)
    }

    /// Right descent at i: length(self * s_i) < length(self), i.e.
    /// f(i) > f(i+1) in the periodic reading.
    pub fn has_right_descent(&self, i: usize) -> bool {
        debug_assert!(i < self.d);
        if i == 0 {
            self.window[self.d - 1] - self.d as i64 > self.window[0]
        } else {
            self.window[i - 1] > self.window[i]
        }
    }

    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_right_descent(i)
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (0..self.d).filter(|&i| self.has_right_descent(i)).collect()
    }

    pub fn left_descents(&self) -> Vec<usize> {
        self.inverse().right_descents()
    }

    /// Cancels the rotation: returns (level k, the level-0 part
    /// omega^{-k} * self). Lengths agree.
    pub fn rotation_split(&self) -> (i64, AffinePermutation) {
        let k = self.level();
        let window = self.window.iter().map(|x| x - k).collect();
        (k, AffinePermutation { d: self.d, window })
    }
}

/// Bruhat order on elements of the same rank and level, by the affine
/// rank-matrix criterion: u <= w iff for all (i, j), |{a <= i : u(a) >= j}|
/// is at most the same count for w. Periodicity bounds the check to a
/// finite window.
pub fn bruhat_leq(u: &AffinePermutation, w: &AffinePermutation) -> Result<bool> {
    if u.rank() != w.rank() {
        return Err(Error::Domain("rank mismatch".into()));
    }
    if u.level() != w.level() {
        return Err(Error::Domain(
            "Bruhat order compares elements of the same omega-component".into(),
        ));
    }
    if u == w {
        return Ok(true);
    }
    if u.length() >= w.length() {
        return Ok(false);
    }
    let d = u.rank() as i64;
    // count(f, i, j) = |{a <= i : f(a) >= j}|. Splitting a over residue
    // classes r - td gives
    //   sum_r max(0, floor((f(r) - j)/d) + floor((i - r)/d) + 1).
    // The difference count(w) - count(u) vanishes for j above both
    // windows and (for equal levels, since window residues exhaust Z/dZ)
    // for j <= min - d, and is invariant under (i, j) -> (i + d, j + d),
    // so i in 1..=d and j in [min - d, max] is a complete check.
    let count = |f: &AffinePermutation, i: i64, j: i64| -> i64 {
        let mut c = 0i64;
        for r in 1..=d {
            let term = (f.apply(r) - j).div_euclid(d) + (i - r).div_euclid(d) + 1;
            if term > 0 {
                c += term;
            }
        }
        c
    };
    let lo = u.window().iter().chain(w.window()).min().copied().unwrap() - d;
    let hi = u.window().iter().chain(w.window()).max().copied().unwrap();
    for i in 1..=d {
        for j in lo..=hi {
            if count(u, i, j) > count(w, i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All level-0 elements of length <= bound, BFS over right
/// multiplication, sorted by (length, window).
pub fn enumerate_up_to_length(d: usize, bound: u64) -> Vec<AffinePermutation> {
    let mut seen = std::collections::HashSet::new();
    let id = AffinePermutation::identity(d);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    if d >= 2 {
        let mut current_len = 0;
        while current_len < bound {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 0..d {
                    let v = w.right_simple(i).expect("valid index");
                    if v.length() == current_len + 1 && seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
            current_len += 1;
        }
    }
    let mut out: Vec<AffinePermutation> = seen.into_iter().collect();
    out.sort_by_key(|w| (w.length(), w.window().to_vec()));
    out
}
