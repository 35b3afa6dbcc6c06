//! Cross-module invariants that don't belong to a single unit-test
//! module: conjugation invariance of the Brauer trace, the ring-
//! homomorphism property of reduction, dominance triangularity at full
//! scale, the closure-support compatibility between decomposition
//! numbers and orbit geometry, and deterministic concurrent KL
//! evaluation.

use std::collections::BTreeSet;
use std::sync::Arc;

use lj_core::affine::enumerate_up_to_length;
use lj_core::brauer::{brauer_trace, invert, reduce_mod_l, RootIdentification};
use lj_core::cyclo::CyclotomicTrace;
use lj_core::gf::{Field, FieldMatrix};
use lj_core::groth::{check_dominance_triangularity, closed_form_matrix};
use lj_core::kl::KlContext;
use lj_core::quiver::{closure_leq, GradedOrbit};
use lj_core::segcomb::{cover_from_subset, CyclicCoverIndex};

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn random_invertible(field: &Arc<Field>, n: usize, rng: &mut Rng) -> FieldMatrix {
    loop {
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.below(field.l)).collect())
            .collect();
        let m = FieldMatrix::from_integers(field.clone(), &rows).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

#[test]
fn brauer_trace_is_conjugation_invariant() {
    let field = Field::with_degree(7, 1).unwrap();
    let ident = RootIdentification::new(field.clone());
    let mut rng = Rng(0x5eed_0100);
    for _ in 0..50 {
        let dim = 1 + rng.below(8) as usize;
        // Diagonalizable-with-kernel operator in general position.
        let rank = 1 + rng.below(dim as u64) as usize;
        let mut d_mat = FieldMatrix::zero(field.clone(), dim, dim);
        for i in 0..rank {
            d_mat.set(i, i, field.from_u64(1 + rng.below(6)));
        }
        let g = random_invertible(&field, dim, &mut rng);
        let rho = g.mul(&d_mat).mul(&invert(&g).unwrap());

        let h = random_invertible(&field, dim, &mut rng);
        let conj = h.mul(&rho).mul(&invert(&h).unwrap());
        let t1 = brauer_trace(&rho, &ident).unwrap();
        let t2 = brauer_trace(&conj, &ident).unwrap();
        assert!(t1.eq_embedded(&t2));
    }
}

#[test]
fn reduction_is_a_ring_homomorphism() {
    // On Z[x]/Phi_6 over F_7 (6 | 7 - 1): check additivity and
    // multiplicativity of x -> fixed root.
    let field = Field::with_degree(7, 1).unwrap();
    let ident = RootIdentification::new(field.clone());
    let mut rng = Rng(0x5eed_0200);
    for _ in 0..200 {
        let a = random_cyclo(6, &mut rng);
        let b = random_cyclo(6, &mut rng);
        let ra = reduce_mod_l(&a, &ident).unwrap();
        let rb = reduce_mod_l(&b, &ident).unwrap();
        let sum = reduce_mod_l(&a.add(&b), &ident).unwrap();
        let prod = reduce_mod_l(&a.mul(&b), &ident).unwrap();
        assert_eq!(sum, field.add(&ra, &rb));
        assert_eq!(prod, field.mul(&ra, &rb));
    }
}

fn random_cyclo(conductor: u64, rng: &mut Rng) -> CyclotomicTrace {
    let mut t = CyclotomicTrace::zero(conductor);
    for k in 0..conductor {
        t.add_root_power(k, rng.below(11) as i64 - 5);
    }
    t
}

#[test]
fn dominance_triangularity_full_scale() {
    for d in 1..=8u64 {
        let m = closed_form_matrix(d).unwrap();
        check_dominance_triangularity(&m).unwrap();
    }
}

#[test]
fn decomposition_support_lies_on_orbit_closures() {
    // m(b, a) != 0 forces the standard's orbit into the closure of the
    // simple's orbit: closure_leq(a, b), exhaustively for epsilon = d <= 8.
    for d in 1..=8u64 {
        let m = closed_form_matrix(d).unwrap();
        let orbits: Vec<GradedOrbit> = m
            .basis
            .entries()
            .iter()
            .cloned()
            .map(GradedOrbit::new)
            .collect();
        for b in 0..m.size() {
            for a in 0..m.size() {
                if m.entry(b, a) != 0 {
                    assert!(
                        closure_leq(&orbits[a], &orbits[b]).unwrap(),
                        "d={} b={} a={}",
                        d,
                        b,
                        a
                    );
                }
            }
        }
    }
}

#[test]
fn subset_bijection_matches_block_sizes() {
    for d in 1..=8u64 {
        let m = closed_form_matrix(d).unwrap();
        assert_eq!(m.size(), (1usize << d) - 1);
        // Every basis entry is an exact cover indexed by its subset.
        for (idx, ms) in m.basis.entries().iter().enumerate() {
            let starts: BTreeSet<u64> = ms.segments().iter().map(|s| s.start).collect();
            let back = cover_from_subset(&CyclicCoverIndex::new(d, starts).unwrap());
            assert_eq!(&back, ms, "d={} idx={}", d, idx);
        }
    }
}

#[test]
fn concurrent_kl_evaluation_is_deterministic() {
    let ctx = Arc::new(KlContext::new(3));
    let corpus = Arc::new(enumerate_up_to_length(3, 6));
    let sequential: Vec<_> = {
        let fresh = KlContext::new(3);
        corpus
            .iter()
            .flat_map(|u| corpus.iter().map(move |w| (u, w)))
            .filter(|(u, w)| u.length() <= w.length())
            .map(|(u, w)| fresh.kl_polynomial(u, w).unwrap())
            .collect()
    };
    let mut handles = Vec::new();
    for t in 0..4usize {
        let ctx = ctx.clone();
        let corpus = corpus.clone();
        handles.push(std::thread::spawn(move || {
            // Half the threads walk the pair list backwards so the memo
            // fills in a different order per schedule.
            let mut pairs: Vec<(usize, usize)> = (0..corpus.len())
                .flat_map(|u| (0..corpus.len()).map(move |w| (u, w)))
                .filter(|&(u, w)| corpus[u].length() <= corpus[w].length())
                .collect();
            if t % 2 == 1 {
                pairs.reverse();
            }
            let mut out: Vec<_> = pairs
                .iter()
                .map(|&(u, w)| ctx.kl_polynomial(&corpus[u], &corpus[w]).unwrap())
                .collect();
            if t % 2 == 1 {
                out.reverse();
            }
            out
        }));
    }
    for handle in handles {
        let got = handle.join().unwrap();
        assert_eq!(got, sequential);
    }
}
