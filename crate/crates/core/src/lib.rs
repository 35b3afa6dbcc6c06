//! Exact combinatorics and linear algebra for the mod-l transfer between
//! a general linear group and its anisotropic inner form.
//!
//! The library computes, over exact integer and finite-field arithmetic:
//!
//! - Brauer traces of finite-order operators, valued in cyclotomic
//!   integers ([`brauer`], [`cyclo`], [`gf`]);
//! - multisegment combinatorics: partitions, blocks, Whittaker supports
//!   and the subset <-> cyclic-cover bijection ([`partition`],
//!   [`segcomb`]);
//! - congruence-counting invariants and effectivity screens ([`arith`]);
//! - block decomposition matrices, their unitriangular inverses and the
//!   projection onto the superSpeh sub-basis with sign reports
//!   ([`groth`]);
//! - the affine symmetric group with Bruhat order, Kazhdan-Lusztig
//!   polynomials and parabolic double cosets ([`affine`], [`kl`]);
//! - cyclic-quiver graded nilpotent orbits with their closure order
//!   ([`quiver`]), and the orbit -> coset bridge that turns
//!   decomposition numbers into KL values at 1 ([`bridge`]).
//!
//! Everything is deterministic: fixed basis orders, fixed generator
//! choices, exact arithmetic throughout.

pub mod affine;
pub mod arith;
pub mod brauer;
pub mod bridge;
pub mod cyclo;
pub mod error;
pub mod gf;
pub mod groth;
pub mod kl;
pub mod partition;
pub mod quiver;
pub mod segcomb;

pub use error::{Error, Result};
