//! Kazhdan-Lusztig polynomials of the (extended) affine symmetric group,
//! with a shared memo cache, plus maximal-length parabolic double-coset
//! representatives.
//!
//! The recursion is the standard one on left descents: for s with
//! sw < w and v = sw,
//!   P_{u,w} = P_{su,v} + q P_{u,v}
//!             - sum_z mu(z, v) q^{(l(w)-l(z))/2} P_{u,z}
//! when su < u (z ranges over u <= z <= v with sz < z), and
//! P_{u,w} = P_{su,w} when su > u. Extended elements reduce to the
//! level-0 component: P is invariant under translating both arguments by
//! the rotation omega.
//!
//! Evaluations of distinct pairs may run concurrently: the memo sits
//! behind a mutex, recomputation is harmless (values are deterministic),
//! and lost updates only cost time, never correctness.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::affine::{bruhat_leq, enumerate_up_to_length, AffinePermutation};
use crate::error::{Error, Result};

/// A polynomial in q with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlPolynomial(Vec<i64>);

impl KlPolynomial {
    pub fn zero() -> Self {
        KlPolynomial(vec![])
    }

    pub fn one() -> Self {
        KlPolynomial(vec![1])
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        let mut p = KlPolynomial(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn add(&self, other: &KlPolynomial) -> KlPolynomial {
        let n = self.0.len().max(other.0.len());
        let coeffs = (0..n)
            .map(|k| self.coeff(k) + other.coeff(k))
            .collect();
        KlPolynomial::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &KlPolynomial) -> KlPolynomial {
        let n = self.0.len().max(other.0.len());
        let coeffs = (0..n)
            .map(|k| self.coeff(k) - other.coeff(k))
            .collect();
        KlPolynomial::from_coeffs(coeffs)
    }

    /// Multiplication by c * q^k.
    pub fn shift_scale(&self, k: usize, c: i64) -> KlPolynomial {
        if self.is_zero() || c == 0 {
            return KlPolynomial::zero();
        }
        let mut coeffs = vec![0i64; k + self.0.len()];
        for (i, &a) in self.0.iter().enumerate() {
            coeffs[k + i] = c * a;
        }
        KlPolynomial::from_coeffs(coeffs)
    }

    pub fn evaluate_at_one(&self) -> i64 {
        self.0.iter().sum()
    }
}

type PairKey = (Vec<i64>, Vec<i64>);

/// Versioned on-disk format for the memo cache. Incompatible versions
/// are ignored on load, never migrated.
const CACHE_FORMAT: &str = "lj-kl-cache-v1";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    d: usize,
    entries: Vec<CacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    u: Vec<i64>,
    w: Vec<i64>,
    p: Vec<i64>,
}

/// Shared computation context: rank, resource cap and memo tables.
pub struct KlContext {
    d: usize,
    max_length: u64,
    memo: Mutex<HashMap<PairKey, KlPolynomial>>,
    ideals: Mutex<HashMap<Vec<i64>, Vec<AffinePermutation>>>,
}

/// Default cap on l(w); desk runs stay under minutes below this.
pub const DEFAULT_MAX_LENGTH: u64 = 20;

impl KlContext {
    pub fn new(d: usize) -> Self {
        KlContext::with_max_length(d, DEFAULT_MAX_LENGTH)
    }

    pub fn with_max_length(d: usize, max_length: u64) -> Self {
        KlContext {
            d,
            max_length,
            memo: Mutex::new(HashMap::new()),
            ideals: Mutex::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    /// The Kazhdan-Lusztig polynomial P_{u,w}; zero unless u <= w, one on
    /// the diagonal.
    pub fn kl_polynomial(
        &self,
        u: &AffinePermutation,
        w: &AffinePermutation,
    ) -> Result<KlPolynomial> {
        if u.rank() != self.d || w.rank() != self.d {
            return Err(Error::Domain("rank mismatch with the context".into()));
        }
        if u.level() != w.level() {
            return Err(Error::Domain(
                "Kazhdan-Lusztig pairs need matching omega-components".into(),
            ));
        }
        // Reduce to the level-0 component.
        let (_, u0) = u.rotation_split();
        let (_, w0) = w.rotation_split();
        if w0.length() > self.max_length {
            return Err(Error::Resource(format!(
                "l(w) = {} exceeds the configured cap {}",
                w0.length(),
                self.max_length
            )));
        }
        self.kl_level0(&u0, &w0)
    }

    fn kl_level0(&self, u: &AffinePermutation, w: &AffinePermutation) -> Result<KlPolynomial> {
        if u == w {
            return Ok(KlPolynomial::one());
        }
        if !bruhat_leq(u, w)? {
            return Ok(KlPolynomial::zero());
        }
        let key = (u.window().to_vec(), w.window().to_vec());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }

        let s = w
            .left_descents()
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("non-identity element has a descent".into()))?;
        let v = w.left_simple(s)?; // sw < w
        let su = u.left_simple(s)?;

        let result = if su.length() < u.length() {
            // P_{u,w} = P_{su,v} + q P_{u,v} - correction over z with
            // u <= z <= v and sz < z.
            let mut acc = self.kl_level0(&su, &v)?;
            acc = acc.add(&self.kl_level0(u, &v)?.shift_scale(1, 1));
            let lw = w.length() as usize;
            for z in self.lower_ideal(&v)? {
                if z.left_simple(s)?.length() >= z.length() {
                    continue;
                }
                if !bruhat_leq(u, &z)? {
                    continue;
                }
                let lz = z.length() as usize;
                if (v.length() as usize).wrapping_sub(lz) % 2 == 0 {
                    // mu(z, v) needs l(v) - l(z) odd.
                    continue;
                }
                let pzv = self.kl_level0(&z, &v)?;
                let mu = pzv.coeff((v.length() as usize - lz - 1) / 2);
                if mu == 0 {
                    continue;
                }
                let puz = self.kl_level0(u, &z)?;
                acc = acc.sub(&puz.shift_scale((lw - lz) / 2, mu));
            }
            acc
        } else {
            self.kl_level0(&su, w)?
        };

        debug_assert!(
            result
                .degree()
                .map(|deg| 2 * deg + 1 <= (w.length() - u.length()) as usize)
                .unwrap_or(true),
            "degree bound violated for u={:?} w={:?}: {:?}",
            u.window(),
            w.window(),
            result
        );
        self.memo.lock().unwrap().insert(key, result.clone());
        Ok(result)
    }

    /// All z <= v, via the reduced-subword dynamic program; cached per v.
    fn lower_ideal(&self, v: &AffinePermutation) -> Result<Vec<AffinePermutation>> {
        let key = v.window().to_vec();
        if let Some(hit) = self.ideals.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let mut word = Vec::new();
        let mut cur = v.clone();
        while cur.length() > 0 {
            let i = cur
                .right_descents()
                .into_iter()
                .next()
                .ok_or_else(|| Error::Internal("positive length forces a descent".into()))?;
            cur = cur.right_simple(i)?;
            word.push(i);
        }
        word.reverse();
        let mut reachable = std::collections::HashSet::new();
        reachable.insert(AffinePermutation::identity(self.d));
        for &i in &word {
            let grown: Vec<AffinePermutation> = reachable
                .iter()
                .filter_map(|z: &AffinePermutation| {
                    let zs = z.right_simple(i).ok()?;
                    if zs.length() > z.length() {
                        Some(zs)
                    } else {
                        None
                    }
                })
                .collect();
            reachable.extend(grown);
        }
        let mut out: Vec<AffinePermutation> = reachable.into_iter().collect();
        out.sort_by_key(|z| (z.length(), z.window().to_vec()));
        self.ideals.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Loads memo entries from a versioned cache file; silently ignores
    /// missing files and incompatible formats.
    pub fn load_cache(&self, path: &Path) -> Result<usize> {
        if !path.exists() {
            return Ok(0);
        }
        let text = std::fs::read_to_string(path)?;
        let Ok(file) = serde_json::from_str::<CacheFile>(&text) else {
            return Ok(0);
        };
        if file.format != CACHE_FORMAT || file.d != self.d {
            return Ok(0);
        }
        let mut memo = self.memo.lock().unwrap();
        let mut loaded = 0;
        for entry in file.entries {
            if entry.u.len() == self.d && entry.w.len() == self.d {
                memo.insert((entry.u, entry.w), KlPolynomial::from_coeffs(entry.p));
                loaded += 1;
            }
        }
        Ok(loaded)
    }

    /// Writes the memo to disk in a deterministic order.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let memo = self.memo.lock().unwrap();
        let mut entries: Vec<CacheEntry> = memo
            .iter()
            .map(|((u, w), p)| CacheEntry {
                u: u.clone(),
                w: w.clone(),
                p: p.coeffs().to_vec(),
            })
            .collect();
        entries.sort_by(|a, b| (&a.u, &a.w).cmp(&(&b.u, &b.w)));
        let file = CacheFile {
            format: CACHE_FORMAT.to_string(),
            d: self.d,
            entries,
        };
        std::fs::write(path, serde_json::to_string(&file)?)?;
        Ok(())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

/// A parabolic double coset, represented by its maximal-length element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetRep {
    pub d: usize,
    pub epsilon: usize,
    /// Maximal-length element of W_J element W_J.
    pub element: AffinePermutation,
    /// The full (finite) double coset, sorted.
    pub members: Vec<AffinePermutation>,
}

/// The finite parabolic W_J = (S_{d/epsilon})^epsilon inside the finite
/// symmetric group: generated by the simple reflections s_i, 0 < i < d,
/// with i not a multiple of d/epsilon.
pub fn parabolic_elements(d: usize, epsilon: usize) -> Result<Vec<AffinePermutation>> {
    if epsilon == 0 || d % epsilon != 0 {
        return Err(Error::Domain(format!("epsilon = {} must divide d = {}", epsilon, d)));
    }
    let block = d / epsilon;
    let gens: Vec<usize> = (1..d).filter(|i| i % block != 0).collect();
    let mut seen = std::collections::HashSet::new();
    let id = AffinePermutation::identity(d);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(w) = frontier.pop() {
        for &i in &gens {
            let v = w.right_simple(i)?;
            if seen.insert(v.clone()) {
                frontier.push(v);
            }
        }
    }
    let mut out: Vec<AffinePermutation> = seen.into_iter().collect();
    out.sort_by_key(|w| (w.length(), w.window().to_vec()));
    Ok(out)
}

/// Maximal-length representatives of the W_J-double cosets meeting the
/// ball of radius `length_bound` in the level-0 component, W_J =
/// (S_{d/epsilon})^epsilon. Every element of length <= bound lies in
/// exactly one listed coset; the representative itself may be longer.
/// Deterministic order by (length, window).
pub fn max_double_coset_reps(
    d: usize,
    epsilon: usize,
    length_bound: u64,
) -> Result<Vec<DoubleCosetRep>> {
    let parabolic = parabolic_elements(d, epsilon)?;
    let ball = enumerate_up_to_length(d, length_bound);
    let mut assigned: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    let mut reps = Vec::new();
    for w in &ball {
        if assigned.contains(w.window()) {
            continue;
        }
        let mut members = std::collections::BTreeSet::new();
        for u in &parabolic {
            let uw = u.compose(w)?;
            for v in &parabolic {
                members.insert(uw.compose(v)?);
            }
        }
        for m in &members {
            assigned.insert(m.window().to_vec());
        }
        let max_len = members.iter().map(|m| m.length()).max().unwrap();
        let maxima: Vec<&AffinePermutation> =
            members.iter().filter(|m| m.length() == max_len).collect();
        if maxima.len() != 1 {
            return Err(Error::Internal(
                "parabolic double coset has no unique maximal element".into(),
            ));
        }
        reps.push(DoubleCosetRep {
            d,
            epsilon,
            element: maxima[0].clone(),
            members: members.into_iter().collect(),
        });
    }
    reps.sort_by_key(|r| (r.element.length(), r.element.window().to_vec()));
    Ok(reps)
}
