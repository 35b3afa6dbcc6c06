//! Block bases, exact decomposition matrices, unitriangular inversion,
//! projection onto the superSpeh sub-basis and effectivity verdicts.
//!
//! In the epsilon = d regime the block basis is the set of cyclic covers
//! of Z/dZ (equivalently the nonempty subsets I of Z/dZ), the standard
//! [pi(a)] expands as sum of the simples <b> with I_b contained in I_a,
//! and the inverse matrix carries the signs (-1)^{|I_a \ I_b|}. The image
//! of a simple modulo the induced subgroup is then the coefficient
//! vector (-1)^{|a|-1} on the singleton covers below it: that vector is
//! what the transfer sees.
//!
//! Coefficients are reported raw: the global normalization sign
//! (-1)^{d+1} sometimes attached to the elliptic transfer is NOT applied.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::dominance_leq;
use crate::segcomb::{enumerate_block, subset_from_cover, CyclicCoverIndex, Multisegment};

/// Ordered basis of a block: multisegments in canonical block order,
/// singleton-segment entries flagged as superSpeh basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockBasis {
    pub d: u64,
    pub epsilon: u64,
    entries: Vec<Multisegment>,
    superspeh: Vec<bool>,
}

impl BlockBasis {
    /// The cyclic-cover basis for the epsilon = d block.
    pub fn cyclic_cover_basis(d: u64) -> Result<Self> {
        if d < 1 {
            return Err(Error::Domain("d must be positive".into()));
        }
        let entries = enumerate_block(d, &vec![1; d as usize])?;
        let superspeh = entries.iter().map(|ms| ms.count() == 1).collect();
        Ok(BlockBasis { d, epsilon: d, entries, superspeh })
    }

    pub fn entries(&self) -> &[Multisegment] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_superspeh(&self, idx: usize) -> bool {
        self.superspeh[idx]
    }

    pub fn superspeh_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.superspeh[i]).collect()
    }

    pub fn position(&self, ms: &Multisegment) -> Option<usize> {
        self.entries.iter().position(|e| e == ms)
    }

    /// Subset indices for the cyclic-cover basis.
    pub fn subsets(&self) -> Result<Vec<CyclicCoverIndex>> {
        self.entries.iter().map(subset_from_cover).collect()
    }
}

/// Exact integer decomposition matrix over a block basis: entry (i, j)
/// is the multiplicity m(b_i, a_j) of the simple b_i in the standard
/// a_j. Lower-unitriangular in the canonical basis order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionMatrix {
    pub basis: BlockBasis,
    entries: Vec<Vec<i64>>,
}

impl DecompositionMatrix {
    pub fn new(basis: BlockBasis, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = basis.len();
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(Error::Domain("matrix shape must match the basis".into()));
        }
        Ok(DecompositionMatrix { basis, entries })
    }

    pub fn entry(&self, b: usize, a: usize) -> i64 {
        self.entries[b][a]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// CSV with a header row of canonical multisegment ids; the leading
    /// header cell names the row key.
    pub fn to_csv(&self) -> String {
        let ids: Vec<String> = self.basis.entries().iter().map(|ms| ms.id()).collect();
        let mut out = String::new();
        out.push_str("simple\\standard");
        for id in &ids {
            out.push(',');
            out.push_str(&csv_quote(id));
        }
        out.push('\n');
        for (i, row) in self.entries.iter().enumerate() {
            out.push_str(&csv_quote(&ids[i]));
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Closed-form decomposition matrix in the epsilon = d regime:
/// m(b, a) = 1 iff I_b is a subset of I_a.
pub fn closed_form_matrix(d: u64) -> Result<DecompositionMatrix> {
    let basis = BlockBasis::cyclic_cover_basis(d)?;
    let subsets = basis.subsets()?;
    let n = basis.len();
    let mut entries = vec![vec![0i64; n]; n];
    for b in 0..n {
        for a in 0..n {
            if subsets[b].is_subset_of(&subsets[a]) {
                entries[b][a] = 1;
            }
        }
    }
    DecompositionMatrix::new(basis, entries)
}

/// Exact integer inverse of a lower-unitriangular matrix in the basis
/// order; errors if the input is not unitriangular.
pub fn invert_unitriangular(m: &DecompositionMatrix) -> Result<Vec<Vec<i64>>> {
    let n = m.size();
    for i in 0..n {
        if m.entry(i, i) != 1 {
            return Err(Error::Domain("matrix is not unitriangular (diagonal)".into()));
        }
        for j in i + 1..n {
            if m.entry(i, j) != 0 {
                return Err(Error::Domain(
                    "matrix is not lower triangular in the basis order".into(),
                ));
            }
        }
    }
    // Forward substitution, column by column: N = M^{-1}.
    let mut inv = vec![vec![0i64; n]; n];
    for j in 0..n {
        inv[j][j] = 1;
        for i in j + 1..n {
            let mut acc = 0i64;
            for k in j..i {
                acc += m.entry(i, k) * inv[k][j];
            }
            inv[i][j] = -acc;
        }
    }
    Ok(inv)
}

/// A vector in the Grothendieck group of a block, supported on its basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrothVector {
    /// Canonical ids of the supporting basis elements, in basis order.
    pub ids: Vec<String>,
    pub coefficients: Vec<i64>,
}

/// Sign of an effective-up-to-sign vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Zero => "0",
        };
        f.write_str(s)
    }
}

/// Projection of the simple <a> onto the superSpeh sub-basis: the
/// coefficients n(b, a) of the inverse matrix at singleton-segment rows.
/// This is the image of <a> in R_Delta modulo R_I, the combination of
/// irreducibles of the inner form that the transfer identifies.
pub fn lj_projection(
    a: &Multisegment,
    basis: &BlockBasis,
    inverse: &[Vec<i64>],
) -> Result<GrothVector> {
    let col = basis
        .position(a)
        .ok_or_else(|| Error::Domain("multisegment is not in the block basis".into()))?;
    let rows = basis.superspeh_indices();
    let ids = rows.iter().map(|&i| basis.entries()[i].id()).collect();
    let coefficients = rows.iter().map(|&i| inverse[i][col]).collect();
    Ok(GrothVector { ids, coefficients })
}

/// True iff all nonzero coefficients share one sign; reports the sign
/// (zero vectors count as effective with sign 0).
pub fn is_effective_up_to_sign(v: &GrothVector) -> (bool, Sign) {
    let mut sign = Sign::Zero;
    for &c in &v.coefficients {
        if c > 0 {
            match sign {
                Sign::Zero => sign = Sign::Plus,
                Sign::Minus => return (false, Sign::Zero),
                Sign::Plus => {}
            }
        } else if c < 0 {
            match sign {
                Sign::Zero => sign = Sign::Minus,
                Sign::Plus => return (false, Sign::Zero),
                Sign::Minus => {}
            }
        }
    }
    (true, sign)
}

/// Matrix source for block scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixSource {
    ClosedForm,
    KlComputed,
}

/// Per-simple effectivity verdicts for a block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignReport {
    pub d: u64,
    pub epsilon: u64,
    pub simples: Vec<SimpleVerdict>,
    pub all_effective: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimpleVerdict {
    pub id: String,
    pub coeffs: Vec<i64>,
    pub effective: bool,
    pub sign: Sign,
}

/// Scans a block: projects every simple onto the superSpeh sub-basis and
/// reports signs. For the closed form and any d the expected sign of <a>
/// is (-1)^{|a|-1}.
pub fn scan_block(d: u64, source: MatrixSource) -> Result<SignReport> {
    let matrix = match source {
        MatrixSource::ClosedForm => closed_form_matrix(d)?,
        MatrixSource::KlComputed => crate::bridge::kl_decomposition_matrix(d)?,
    };
    let inverse = invert_unitriangular(&matrix)?;
    let basis = matrix.basis.clone();
    let mut simples = Vec::with_capacity(basis.len());
    let mut all_effective = true;
    for a in basis.entries() {
        let v = lj_projection(a, &basis, &inverse)?;
        let (effective, sign) = is_effective_up_to_sign(&v);
        all_effective &= effective;
        simples.push(SimpleVerdict {
            id: a.id(),
            coeffs: v.coefficients,
            effective,
            sign,
        });
    }
    Ok(SignReport { d, epsilon: d, simples, all_effective })
}

/// Dominance triangularity of a decomposition matrix: every nonzero
/// entry m(b, a) forces whittaker(b) <= whittaker(a), strictly below the
/// diagonal. Used by tests and by the kl-computed path as a sanity gate.
pub fn check_dominance_triangularity(m: &DecompositionMatrix) -> Result<()> {
    let basis = &m.basis;
    for b in 0..m.size() {
        for a in 0..m.size() {
            if m.entry(b, a) != 0 {
                let wb = basis.entries()[b].whittaker_partition();
                let wa = basis.entries()[a].whittaker_partition();
                if !dominance_leq(&wb, &wa)? {
                    return Err(Error::Internal(format!(
                        "entry ({}, {}) violates dominance triangularity",
                        b, a
                    )));
                }
                if b != a && wb == wa {
                    return Err(Error::Internal(format!(
                        "entry ({}, {}) has equal Whittaker partitions off the diagonal",
                        b, a
                    )));
                }
            }
        }
    }
    Ok(())
}
