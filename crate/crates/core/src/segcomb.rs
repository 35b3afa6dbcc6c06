//! Segments, multisegments, Whittaker partitions, block enumeration and
//! the subset <-> cyclic-cover bijection.
//!
//! A multisegment of period e is a multiset of cyclic segments
//! (start, length, weight); it is the universal index for block basis
//! vectors, graded nilpotent orbits and decomposition-matrix rows. In the
//! epsilon = d regime the weight-1 multisegments that tile Z/dZ exactly
//! once are in bijection with nonempty subsets of Z/dZ via their set of
//! left endpoints.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A cyclic segment: `len` consecutive residues starting at `start`
/// (taken mod the ambient period), carrying the degree `weight` of the
/// underlying cuspidal. Weight 1 throughout superunipotent blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub start: u64,
    pub len: u64,
    #[serde(default = "one")]
    pub weight: u64,
}

fn one() -> u64 {
    1
}

impl Segment {
    pub fn new(start: u64, len: u64, weight: u64) -> Result<Self> {
        if len == 0 || weight == 0 {
            return Err(Error::Domain("segment length and weight must be positive".into()));
        }
        Ok(Segment { start, len, weight })
    }
}

/// A nonempty multiset of segments with a common period.
///
/// Segments are stored sorted, with starts normalized to [0, period), so
/// equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Multisegment {
    pub period: u64,
    segments: Vec<Segment>,
}

impl<'de> Deserialize<'de> for Multisegment {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            period: u64,
            segments: Vec<Segment>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Multisegment::new(raw.period, raw.segments).map_err(serde::de::Error::custom)
    }
}

impl Multisegment {
    pub fn new(period: u64, mut segments: Vec<Segment>) -> Result<Self> {
        if period == 0 {
            return Err(Error::Domain("period must be positive".into()));
        }
        if segments.is_empty() {
            return Err(Error::Domain("multisegment must be nonempty".into()));
        }
        for seg in &mut segments {
            if seg.len == 0 || seg.weight == 0 {
                return Err(Error::Domain("segment length and weight must be positive".into()));
            }
            seg.start %= period;
        }
        segments.sort();
        Ok(Multisegment { period, segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Number of segments, counted with multiplicity.
    pub fn count(&self) -> usize {
        self.segments.len()
    }

    /// Degree d(a) = sum of weight * length.
    pub fn degree(&self) -> u64 {
        self.segments.iter().map(|s| s.weight * s.len).sum()
    }

    /// Content vector over Z/eZ: each segment adds `weight` to the
    /// residues start, start+1, ..., start+len-1 (mod e).
    pub fn content(&self) -> Vec<u64> {
        let e = self.period as usize;
        let mut dims = vec![0u64; e];
        for seg in &self.segments {
            for k in 0..seg.len {
                dims[((seg.start + k) % self.period) as usize] += seg.weight;
            }
        }
        dims
    }

    /// Canonical JSON string; used as a stable key in CSV headers, poset
    /// exports and sign reports.
    pub fn id(&self) -> String {
        serde_json::to_string(self).expect("multisegment serializes")
    }

    /// Whittaker partition: entrywise sum over segments of the constant
    /// partition (weight repeated `len` times), zero-padded.
    pub fn whittaker_partition(&self) -> Partition {
        let mut acc: Option<Partition> = None;
        for seg in &self.segments {
            let rect = Partition::rectangle(seg.weight, seg.len as usize)
                .expect("segment sides are positive");
            acc = Some(match acc {
                None => rect,
                Some(prev) => prev.entrywise_sum(&rect),
            });
        }
        acc.expect("multisegment is nonempty")
    }
}

/// Index for the cyclic-cover bijection: a nonempty subset of Z/dZ,
/// identified with the weight-1 multisegment whose segments start at the
/// chosen residues and tile Z/dZ exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicCoverIndex {
    pub d: u64,
    pub starts: BTreeSet<u64>,
}

impl CyclicCoverIndex {
    pub fn new(d: u64, starts: BTreeSet<u64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("d must be positive".into()));
        }
        if starts.is_empty() {
            return Err(Error::Domain("cyclic cover index needs a nonempty subset".into()));
        }
        if let Some(&max) = starts.iter().next_back() {
            if max >= d {
                return Err(Error::Domain(format!("start {} out of range for Z/{}Z", max, d)));
            }
        }
        Ok(CyclicCoverIndex { d, starts })
    }

    pub fn size(&self) -> usize {
        self.starts.len()
    }

    pub fn is_subset_of(&self, other: &CyclicCoverIndex) -> bool {
        self.d == other.d && self.starts.is_subset(&other.starts)
    }
}

/// The multisegment tiling Z/dZ with one segment per chosen start; each
/// segment runs to the next start (length d for a single start).
pub fn cover_from_subset(idx: &CyclicCoverIndex) -> Multisegment {
    let starts: Vec<u64> = idx.starts.iter().copied().collect();
    let k = starts.len();
    let mut segments = Vec::with_capacity(k);
    for (j, &s) in starts.iter().enumerate() {
        let next = starts[(j + 1) % k];
        let len = if k == 1 {
            idx.d
        } else {
            (next + idx.d - s) % idx.d
        };
        segments.push(Segment { start: s, len, weight: 1 });
    }
    Multisegment::new(idx.d, segments).expect("cover segments are valid")
}

/// Inverse of [`cover_from_subset`]: extracts the set of left endpoints,
/// after checking the multisegment really is an exact weight-1 tiling.
pub fn subset_from_cover(ms: &Multisegment) -> Result<CyclicCoverIndex> {
    let d = ms.period;
    if ms.segments.iter().any(|s| s.weight != 1) {
        return Err(Error::Domain("cyclic cover must have weight-1 segments".into()));
    }
    if ms.content().iter().any(|&c| c != 1) {
        return Err(Error::Domain("cyclic cover must tile Z/dZ exactly once".into()));
    }
    let starts: BTreeSet<u64> = ms.segments.iter().map(|s| s.start).collect();
    if starts.len() != ms.segments.len() {
        return Err(Error::Domain("cyclic cover has repeated starts".into()));
    }
    let idx = CyclicCoverIndex::new(d, starts)?;
    if &cover_from_subset(&idx) != ms {
        return Err(Error::Domain("segments do not run start-to-start".into()));
    }
    Ok(idx)
}

/// All weight-1 multisegments of the given period and content vector, in
/// canonical basis order: segment count descending, then lexicographic on
/// the sorted (start, length) pairs. Deterministic.
pub fn enumerate_block(e: u64, dims: &[u64]) -> Result<Vec<Multisegment>> {
    if e == 0 || dims.len() != e as usize {
        return Err(Error::Domain(format!(
            "dimension vector must have length e = {}",
            e
        )));
    }
    if dims.iter().all(|&x| x == 0) {
        return Err(Error::Domain("dimension vector must be nonzero".into()));
    }
    let total: u64 = dims.iter().sum();

    // Candidate segments in the fixed order used for canonical multisets.
    let mut kinds = Vec::new();
    for start in 0..e {
        for len in 1..=total {
            kinds.push(Segment { start, len, weight: 1 });
        }
    }

    fn content_fits(seg: &Segment, e: u64, remaining: &[u64]) -> bool {
        let mut need = vec![0u64; e as usize];
        for k in 0..seg.len {
            need[((seg.start + k) % e) as usize] += 1;
        }
        need.iter().zip(remaining).all(|(n, r)| n <= r)
    }

    fn subtract(seg: &Segment, e: u64, remaining: &mut [u64]) {
        for k in 0..seg.len {
            remaining[((seg.start + k) % e) as usize] -= 1;
        }
    }

    fn restore(seg: &Segment, e: u64, remaining: &mut [u64]) {
        for k in 0..seg.len {
            remaining[((seg.start + k) % e) as usize] += 1;
        }
    }

    // Multisets are built with kind indices weakly increasing, so each
    // multiset is produced exactly once.
    fn go(
        e: u64,
        kinds: &[Segment],
        from: usize,
        remaining: &mut [u64],
        chosen: &mut Vec<Segment>,
        out: &mut Vec<Multisegment>,
    ) {
        if remaining.iter().all(|&x| x == 0) {
            out.push(Multisegment::new(e, chosen.clone()).expect("chosen segments valid"));
            return;
        }
        for idx in from..kinds.len() {
            let seg = kinds[idx];
            if content_fits(&seg, e, remaining) {
                subtract(&seg, e, remaining);
                chosen.push(seg);
                go(e, kinds, idx, remaining, chosen, out);
                chosen.pop();
                restore(&seg, e, remaining);
            }
        }
    }

    let mut out = Vec::new();
    let mut remaining = dims.to_vec();
    go(e, &kinds, 0, &mut remaining, &mut Vec::new(), &mut out);

    out.sort_by(|a, b| {
        b.count()
            .cmp(&a.count())
            .then_with(|| {
                let ka: Vec<(u64, u64)> = a.segments().iter().map(|s| (s.start, s.len)).collect();
                let kb: Vec<(u64, u64)> = b.segments().iter().map(|s| (s.start, s.len)).collect();
                ka.cmp(&kb)
            })
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn whittaker_of_single_segment_is_rectangle() {
        let ms = Multisegment::new(6, vec![Segment::new(0, 2, 3).unwrap()]).unwrap();
        assert_eq!(ms.whittaker_partition().parts(), &[3, 3]);
        for (w, r) in [(1u64, 1usize), (2, 5), (4, 3)] {
            let ms = Multisegment::new(8, vec![Segment::new(1, r as u64, w).unwrap()]).unwrap();
            assert_eq!(ms.whittaker_partition().parts(), vec![w; r].as_slice());
        }
    }

    #[test]
    fn whittaker_entrywise_examples() {
        let ms = Multisegment::new(
            3,
            vec![Segment::new(0, 2, 1).unwrap(), Segment::new(1, 1, 1).unwrap()],
        )
        .unwrap();
        assert_eq!(ms.whittaker_partition().parts(), &[2, 1]);

        // Weight-1 case: conjugate of the sorted length vector.
        let ms = Multisegment::new(
            4,
            vec![
                Segment::new(0, 2, 1).unwrap(),
                Segment::new(2, 1, 1).unwrap(),
                Segment::new(3, 1, 1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(ms.whittaker_partition().parts(), &[3, 1]);
        let lengths = Partition::new(vec![2, 1, 1]).unwrap();
        assert_eq!(ms.whittaker_partition(), lengths.conjugate());
    }

    #[test]
    fn cover_examples() {
        let idx = CyclicCoverIndex::new(3, BTreeSet::from([0])).unwrap();
        let ms = cover_from_subset(&idx);
        assert_eq!(ms.segments(), &[Segment { start: 0, len: 3, weight: 1 }]);

        let idx = CyclicCoverIndex::new(2, BTreeSet::from([0, 1])).unwrap();
        let ms = cover_from_subset(&idx);
        assert_eq!(
            ms.segments(),
            &[
                Segment { start: 0, len: 1, weight: 1 },
                Segment { start: 1, len: 1, weight: 1 }
            ]
        );

        let idx = CyclicCoverIndex::new(4, BTreeSet::from([0, 2])).unwrap();
        let ms = cover_from_subset(&idx);
        assert_eq!(
            ms.segments(),
            &[
                Segment { start: 0, len: 2, weight: 1 },
                Segment { start: 2, len: 2, weight: 1 }
            ]
        );

        assert!(CyclicCoverIndex::new(4, BTreeSet::new()).is_err());
    }

    #[test]
    fn subset_cover_roundtrip_exhaustive() {
        for d in 1..=8u64 {
            for mask in 1u64..(1 << d) {
                let starts: BTreeSet<u64> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
                let idx = CyclicCoverIndex::new(d, starts).unwrap();
                let back = subset_from_cover(&cover_from_subset(&idx)).unwrap();
                assert_eq!(back, idx);
            }
        }
    }

    #[test]
    fn block_enumeration_counts() {
        assert_eq!(enumerate_block(2, &[1, 1]).unwrap().len(), 3);
        assert_eq!(enumerate_block(3, &[1, 1, 1]).unwrap().len(), 7);
        let block = enumerate_block(1, &[2]).unwrap();
        assert_eq!(block.len(), 2);
        assert_eq!(
            block[0].segments(),
            &[
                Segment { start: 0, len: 1, weight: 1 },
                Segment { start: 0, len: 1, weight: 1 }
            ]
        );
        assert_eq!(block[1].segments(), &[Segment { start: 0, len: 2, weight: 1 }]);
    }

    #[test]
    fn all_ones_block_matches_cover_bijection() {
        for d in 1..=8u64 {
            let block = enumerate_block(d, &vec![1; d as usize]).unwrap();
            assert_eq!(block.len(), (1usize << d) - 1, "d = {}", d);
            let subsets: Vec<_> = block.iter().map(|ms| subset_from_cover(ms).unwrap()).collect();
            assert_eq!(subsets.iter().unique().count(), block.len());
        }
    }

    #[test]
    fn block_order_is_canonical() {
        let block = enumerate_block(2, &[1, 1]).unwrap();
        let counts: Vec<usize> = block.iter().map(|ms| ms.count()).collect();
        assert_eq!(counts, vec![2, 1, 1]);
        assert_eq!(block[1].segments()[0].start, 0);
        assert_eq!(block[2].segments()[0].start, 1);
    }

    #[test]
    fn content_and_degree() {
        let ms = Multisegment::new(
            3,
            vec![Segment::new(2, 2, 1).unwrap(), Segment::new(0, 1, 2).unwrap()],
        )
        .unwrap();
        assert_eq!(ms.degree(), 4);
        assert_eq!(ms.content(), vec![3, 0, 1]);
    }

    #[test]
    fn json_schema_roundtrip() {
        let ms = Multisegment::new(
            2,
            vec![Segment::new(0, 2, 1).unwrap()],
        )
        .unwrap();
        let id = ms.id();
        assert_eq!(id, r#"{"period":2,"segments":[{"start":0,"len":2,"weight":1}]}"#);
        let back: Multisegment = serde_json::from_str(&id).unwrap();
        assert_eq!(back, ms);
    }
}
