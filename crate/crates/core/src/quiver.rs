//! Graded nilpotent orbits for the cyclic quiver: rank invariants,
//! degeneration (closure) order and poset construction.
//!
//! An orbit is represented purely by its multisegment: one Jordan string
//! per segment, the string for (start, len) moving grade start ->
//! start+1 -> ... -> start+len-1 (mod e). The composite-map ranks
//! r(i, l) = rank(grade i -> grade i+l) are computed combinatorially and
//! cross-checked against honest matrix ranks of the explicit nilpotent
//! over a configurable finite field. The degeneration order is the
//! rank-condition order, a known theorem for nilpotent representations
//! of the cyclic quiver; distinct multisegments have distinct rank
//! tables, so the order is a genuine partial order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldMatrix};
use crate::segcomb::{enumerate_block, Multisegment};

/// An orbit in the graded nilpotent variety of the cyclic quiver with
/// `e` vertices and dimension vector `dims` (the content of `shape`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedOrbit {
    pub shape: Multisegment,
}

impl GradedOrbit {
    pub fn new(shape: Multisegment) -> Self {
        GradedOrbit { shape }
    }

    pub fn period(&self) -> u64 {
        self.shape.period
    }

    pub fn dims(&self) -> Vec<u64> {
        self.shape.content()
    }
}

/// r(a, i, l): the rank of the composite map grade i -> grade i + l of
/// the nilpotent attached to a. Combinatorially: positions j in a
/// segment [s, s + r - 1] with j = i mod e and j + l still inside.
pub fn rank_invariant(a: &Multisegment, i: u64, l: u64) -> u64 {
    assert!(l >= 1);
    let e = a.period;
    let i = i % e;
    let mut total = 0u64;
    for seg in a.segments() {
        // j = s + t for t in 0..=len-1-l with (s + t) = i mod e; empty
        // when l >= len.
        if seg.len <= l {
            continue;
        }
        let t0 = (i + e - (seg.start % e)) % e;
        if t0 <= seg.len - l - 1 {
            total += seg.weight * ((seg.len - l - 1 - t0) / e + 1);
        }
    }
    total
}

/// Full rank table of a multisegment: values r(i, l) for i in Z/eZ and
/// 1 <= l < bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTable {
    pub e: u64,
    pub values: Vec<Vec<u64>>,
}

pub fn rank_table(a: &Multisegment) -> RankTable {
    let e = a.period;
    let degree = a.degree();
    let values = (0..e)
        .map(|i| (1..degree.max(1)).map(|l| rank_invariant(a, i, l)).collect())
        .collect();
    RankTable { e, values }
}

/// Degeneration order: b lies in the closure of a's orbit iff every rank
/// invariant of b is at most the one of a. Same block required.
pub fn closure_leq(b: &GradedOrbit, a: &GradedOrbit) -> Result<bool> {
    if b.period() != a.period() || b.dims() != a.dims() {
        return Err(Error::Domain("orbits live in different blocks".into()));
    }
    let degree = a.shape.degree();
    for i in 0..a.period() {
        for l in 1..degree {
            if rank_invariant(&b.shape, i, l) > rank_invariant(&a.shape, i, l) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Default field for the matrix oracle; 101 avoids characteristic
/// coincidences with small blocks.
pub fn default_oracle_field() -> Arc<Field> {
    Field::with_degree(101, 1).expect("101 is prime")
}

/// The explicit nilpotent of a multisegment over a finite field: a
/// direct sum of Jordan strings, one per segment (weight-w segments
/// contribute w parallel strings), mapping each graded basis vector to
/// the next one along its string.
pub fn build_nilpotent_matrix(a: &Multisegment, field: Arc<Field>) -> FieldMatrix {
    // Basis: for each segment copy, vectors v_0, ..., v_{len-1} with
    // grade (start + t) mod e; N v_t = v_{t+1}, N v_{len-1} = 0.
    let mut grades = Vec::new();
    let mut strings = Vec::new(); // (first_index, len)
    for seg in a.segments() {
        for _copy in 0..seg.weight {
            let first = grades.len();
            for t in 0..seg.len {
                grades.push((seg.start + t) % a.period);
            }
            strings.push((first, seg.len as usize));
        }
    }
    let n = grades.len();
    let mut m = FieldMatrix::zero(field.clone(), n, n);
    for (first, len) in strings {
        for t in 0..len - 1 {
            m.set(first + t + 1, first + t, field.one());
        }
    }
    m
}

/// Grades of the basis vectors used by [`build_nilpotent_matrix`].
pub fn nilpotent_grades(a: &Multisegment) -> Vec<u64> {
    let mut grades = Vec::new();
    for seg in a.segments() {
        for _copy in 0..seg.weight {
            for t in 0..seg.len {
                grades.push((seg.start + t) % a.period);
            }
        }
    }
    grades
}

/// Matrix-rank oracle for the rank invariant: rank of N^l restricted to
/// the grade-i coordinates, landing in grade i + l.
pub fn rank_invariant_matrix_oracle(
    a: &Multisegment,
    i: u64,
    l: u64,
    field: Arc<Field>,
) -> u64 {
    let n_mat = build_nilpotent_matrix(a, field.clone());
    let grades = nilpotent_grades(a);
    let power = n_mat.pow(l);
    let e = a.period;
    let from: Vec<usize> = (0..grades.len()).filter(|&c| grades[c] == i % e).collect();
    let to: Vec<usize> = (0..grades.len())
        .filter(|&r| grades[r] == (i + l) % e)
        .collect();
    let mut sub = FieldMatrix::zero(field, to.len(), from.len());
    for (ri, &r) in to.iter().enumerate() {
        for (ci, &c) in from.iter().enumerate() {
            sub.set(ri, ci, power.get(r, c).clone());
        }
    }
    sub.rank() as u64
}

/// The closure poset of a block: nodes in canonical block order, edges
/// the Hasse covers of the degeneration order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitPoset {
    pub e: u64,
    pub dims: Vec<u64>,
    /// Canonical multisegment ids, in block order.
    pub nodes: Vec<String>,
    /// Hasse covers (lower index, upper index) into `nodes`.
    pub covers: Vec<(usize, usize)>,
}

/// Builds the full closure poset of the block (e, dims).
pub fn orbit_poset(e: u64, dims: &[u64]) -> Result<OrbitPoset> {
    let block = enumerate_block(e, dims)?;
    let orbits: Vec<GradedOrbit> = block.iter().cloned().map(GradedOrbit::new).collect();
    let n = orbits.len();
    let mut leq = vec![vec![false; n]; n];
    for b in 0..n {
        for a in 0..n {
            leq[b][a] = closure_leq(&orbits[b], &orbits[a])?;
        }
    }
    // Antisymmetry: distinct multisegments must have distinct tables.
    for b in 0..n {
        for a in 0..n {
            if b != a && leq[b][a] && leq[a][b] {
                return Err(Error::Internal(
                    "distinct orbits compare equal in the rank order".into(),
                ));
            }
        }
    }
    let mut covers = Vec::new();
    for b in 0..n {
        for a in 0..n {
            if b == a || !leq[b][a] {
                continue;
            }
            let is_cover = (0..n).all(|z| {
                z == b || z == a || !(leq[b][z] && leq[z][a])
            });
            if is_cover {
                covers.push((b, a));
            }
        }
    }
    covers.sort();
    Ok(OrbitPoset {
        e,
        dims: dims.to_vec(),
        nodes: block.iter().map(|ms| ms.id()).collect(),
        covers,
    })
}

impl OrbitPoset {
    /// JSON form with the Hasse adjacency keyed by multisegment ids:
    /// each node maps to the ids of the orbits covering it.
    pub fn to_json(&self) -> serde_json::Value {
        let mut adjacency = serde_json::Map::new();
        for (idx, id) in self.nodes.iter().enumerate() {
            let ups: Vec<&str> = self
                .covers
                .iter()
                .filter(|&&(lo, _)| lo == idx)
                .map(|&(_, hi)| self.nodes[hi].as_str())
                .collect();
            adjacency.insert(id.clone(), serde_json::json!(ups));
        }
        serde_json::json!({
            "e": self.e,
            "dims": self.dims,
            "nodes": self.nodes,
            "covers": adjacency,
        })
    }

    /// Graphviz DOT rendering of the Hasse diagram (edges point from the
    /// more degenerate orbit to the less degenerate one).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph orbit_closure {\n  rankdir=BT;\n");
        for (idx, id) in self.nodes.iter().enumerate() {
            out.push_str(&format!(
                "  n{} [label={}];\n",
                idx,
                serde_json::to_string(id).expect("string serializes")
            ));
        }
        for &(lo, hi) in &self.covers {
            out.push_str(&format!("  n{} -> n{};\n", lo, hi));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segcomb::{cover_from_subset, CyclicCoverIndex, Segment};
    use std::collections::BTreeSet;

    fn subset(d: u64, starts: &[u64]) -> Multisegment {
        let idx = CyclicCoverIndex::new(d, BTreeSet::from_iter(starts.iter().copied())).unwrap();
        cover_from_subset(&idx)
    }

    #[test]
    fn rank_vanishes_at_degree() {
        let ms = subset(3, &[0, 1]);
        for i in 0..3 {
            for l in ms.degree()..ms.degree() + 3 {
                assert_eq!(rank_invariant(&ms, i, l), 0);
            }
        }
    }

    #[test]
    fn single_string_ranks() {
        // One segment (0, len 3), e = 3: N has rank 2; grade 0 -> 1 has rank 1.
        let ms = Multisegment::new(3, vec![Segment::new(0, 3, 1).unwrap()]).unwrap();
        assert_eq!(rank_invariant(&ms, 0, 1), 1);
        assert_eq!(rank_invariant(&ms, 1, 1), 1);
        assert_eq!(rank_invariant(&ms, 2, 1), 0);
        assert_eq!(rank_invariant(&ms, 0, 2), 1);
        assert_eq!(rank_invariant(&ms, 1, 2), 0);
    }

    #[test]
    fn matrix_oracle_agrees_small() {
        let field = default_oracle_field();
        let ms = Multisegment::new(
            2,
            vec![Segment::new(0, 3, 1).unwrap(), Segment::new(1, 2, 1).unwrap()],
        )
        .unwrap();
        for i in 0..2 {
            for l in 1..ms.degree() {
                assert_eq!(
                    rank_invariant(&ms, i, l),
                    rank_invariant_matrix_oracle(&ms, i, l, field.clone()),
                    "i={} l={}",
                    i,
                    l
                );
            }
        }
    }

    #[test]
    fn zero_matrix_for_singletons() {
        let ms = Multisegment::new(
            2,
            vec![Segment::new(0, 1, 1).unwrap(), Segment::new(1, 1, 1).unwrap()],
        )
        .unwrap();
        let field = Field::with_degree(3, 1).unwrap();
        let m = build_nilpotent_matrix(&ms, field.clone());
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn full_cover_closure_is_reverse_inclusion() {
        for d in 1..=6u64 {
            for mask_i in 1u64..(1 << d) {
                for mask_j in 1u64..(1 << d) {
                    let set_i: BTreeSet<u64> = (0..d).filter(|k| mask_i & (1 << k) != 0).collect();
                    let set_j: BTreeSet<u64> = (0..d).filter(|k| mask_j & (1 << k) != 0).collect();
                    let oi = GradedOrbit::new(subset(d, &set_i.iter().copied().collect::<Vec<_>>()));
                    let oj = GradedOrbit::new(subset(d, &set_j.iter().copied().collect::<Vec<_>>()));
                    let leq = closure_leq(&oj, &oi).unwrap();
                    let reverse_incl = set_j.is_superset(&set_i);
                    assert_eq!(leq, reverse_incl, "d={} J={:?} I={:?}", d, set_j, set_i);
                }
            }
        }
    }

    #[test]
    fn e2_block_poset() {
        // e = 2, dims (1,1): two maximal single-segment orbits over the
        // two-singleton zero orbit.
        let poset = orbit_poset(2, &[1, 1]).unwrap();
        assert_eq!(poset.nodes.len(), 3);
        assert_eq!(poset.covers.len(), 2);
        // Node 0 is the two-singleton multisegment (most segments first).
        assert_eq!(poset.covers, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn single_orbit_block() {
        // dims (1, 0): only one multisegment.
        let poset = orbit_poset(2, &[1, 0]).unwrap();
        assert_eq!(poset.nodes.len(), 1);
        assert!(poset.covers.is_empty());
    }

    #[test]
    fn dot_output_shape() {
        let poset = orbit_poset(2, &[1, 1]).unwrap();
        let dot = poset.to_dot();
        assert!(dot.starts_with("digraph orbit_closure"));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn json_adjacency_keyed_by_ids() {
        let poset = orbit_poset(2, &[1, 1]).unwrap();
        let json = poset.to_json();
        let covers = json["covers"].as_object().unwrap();
        assert_eq!(covers.len(), 3);
        // The zero orbit is covered by both segment orbits.
        let bottom = &poset.nodes[0];
        assert_eq!(covers[bottom].as_array().unwrap().len(), 2);
        assert_eq!(covers[&poset.nodes[1]].as_array().unwrap().len(), 0);
    }
}
