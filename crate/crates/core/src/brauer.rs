//! The Brauer trace of finite-order operators over finite fields.
//!
//! For an endomorphism rho with rho^{n+1} = rho, n prime to l, the
//! restriction of rho to its image is semisimple with eigenvalues that
//! are l'-roots of unity. The Brauer trace lifts each eigenvalue through
//! the Teichmuller section iota and sums them in a cyclotomic integer
//! ring: it reduces mod l to the ordinary trace but carries strictly
//! more information (a characteristic-zero shadow of the operator).
//!
//! The identification iota is pinned by an explicit generator of the
//! working field's multiplicative group. All identities asserted by this
//! module (reduction to the ordinary trace, vanishing on fixed-point-free
//! block permutations, additivity in short exact sequences, p-group
//! averaging) are independent of that choice; the generator only fixes
//! which primitive root maps to which.

use std::sync::Arc;

use crate::cyclo::CyclotomicTrace;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field, FieldMatrix};

/// Pins the group isomorphism mu_N(field) -> mu_N(cyclotomic ring): the
/// chosen generator g of F_{l^m}^x sends g^{(l^m-1)k/N} to zeta_N^k.
#[derive(Debug, Clone)]
pub struct RootIdentification {
    pub field: Arc<Field>,
    generator: Elem,
}

impl RootIdentification {
    /// Identification via the field's deterministic generator.
    pub fn new(field: Arc<Field>) -> Self {
        let generator = field.generator();
        RootIdentification { field, generator }
    }

    /// Identification via an explicit generator (checked).
    pub fn with_generator(field: Arc<Field>, generator: Elem) -> Result<Self> {
        if field.elem_order(&generator)? != field.order() - 1 {
            return Err(Error::Identification(
                "supplied element does not generate the multiplicative group".into(),
            ));
        }
        Ok(RootIdentification { field, generator })
    }

    pub fn generator(&self) -> &Elem {
        &self.generator
    }

    /// Teichmuller lift: the eigenvalue zeta of order dividing N maps to
    /// zeta_N^k where zeta = (g^{(q-1)/N})^k.
    pub fn lift(&self, zeta: &Elem, conductor: u64) -> Result<CyclotomicTrace> {
        let q1 = self.field.order() - 1;
        if q1 % conductor != 0 {
            return Err(Error::Identification(format!(
                "conductor {} does not divide l^m - 1 = {}",
                conductor, q1
            )));
        }
        let root = self.field.pow(&self.generator, q1 / conductor)?;
        let mut power = self.field.one();
        for k in 0..conductor {
            if &power == zeta {
                return Ok(CyclotomicTrace::root_of_unity(conductor, k));
            }
            power = self.field.mul(&power, &root);
        }
        Err(Error::Identification(
            "element is not a root of unity of the requested order".into(),
        ))
    }

    /// The field root of Phi_N fixed by this identification.
    pub fn fixed_root(&self, conductor: u64) -> Result<Elem> {
        let q1 = self.field.order() - 1;
        if q1 % conductor != 0 {
            return Err(Error::Identification(format!(
                "conductor {} does not divide l^m - 1 = {}",
                conductor, q1
            )));
        }
        self.field.pow(&self.generator, q1 / conductor)
    }
}

/// Eigenvalue data of rho restricted to its image: pairs (eigenvalue,
/// multiplicity), with multiplicities computed by rank arithmetic.
pub struct SpectrumOnImage {
    pub image_basis: FieldMatrix,
    pub eigenvalues: Vec<(Elem, usize)>,
}

/// Diagonalizes rho on its image by rank computations, verifying the
/// precondition rho^{n+1} = rho with n | l^m - 1: the image must split
/// into eigenspaces for nonzero field eigenvalues.
pub fn spectrum_on_image(rho: &FieldMatrix) -> Result<SpectrumOnImage> {
    if !rho.is_square() {
        return Err(Error::Precondition("operator must be square".into()));
    }
    let f = rho.field.clone();
    let image_basis = rho.column_space_basis();
    let r = image_basis.cols;
    let mut eigenvalues = Vec::new();
    let mut total = 0usize;
    for value in f.elements() {
        if f.is_zero(&value) {
            continue;
        }
        // dim(ker(rho - value) ∩ im) = r - rank((rho - value) restricted
        // to the image); the image basis has full column rank r.
        let mut shifted = rho.clone();
        for i in 0..rho.rows {
            let v = f.sub(shifted.get(i, i), &value);
            shifted.set(i, i, v);
        }
        let dim = r - shifted.mul(&image_basis).rank();
        if dim > 0 {
            total += dim;
            eigenvalues.push((value, dim));
        }
        if total == r {
            break;
        }
    }
    if total != r {
        return Err(Error::Precondition(
            "operator is not semisimple of l'-order on its image (eigenvalues must be nonzero and lie in the field)"
                .into(),
        ));
    }
    Ok(SpectrumOnImage { image_basis, eigenvalues })
}

/// The Brauer trace: sum of Teichmuller lifts of the nonzero spectrum of
/// rho on its image, with multiplicity. The conductor is the lcm of the
/// eigenvalue orders (the smallest exact ring containing the answer).
pub fn brauer_trace(rho: &FieldMatrix, ident: &RootIdentification) -> Result<CyclotomicTrace> {
    if rho.field != ident.field {
        return Err(Error::Identification("identification is for a different field".into()));
    }
    let spectrum = spectrum_on_image(rho)?;
    brauer_trace_of_spectrum(&spectrum, ident)
}

fn brauer_trace_of_spectrum(
    spectrum: &SpectrumOnImage,
    ident: &RootIdentification,
) -> Result<CyclotomicTrace> {
    let f = &ident.field;
    let mut conductor = 1u64;
    let mut orders = Vec::with_capacity(spectrum.eigenvalues.len());
    for (value, _) in &spectrum.eigenvalues {
        let ord = f.elem_order(value)?;
        conductor = num_integer::lcm(conductor, ord);
        orders.push(ord);
    }
    let mut acc = CyclotomicTrace::zero(conductor);
    for (value, mult) in &spectrum.eigenvalues {
        let lifted = ident.lift(value, conductor)?;
        acc = acc.add(&lifted.scale(*mult as i64));
    }
    Ok(acc)
}

/// Reduction mod l: sends x to the field root of Phi_N fixed by the
/// identification. Ring homomorphism; inverse to iota on l'-roots.
pub fn reduce_mod_l(t: &CyclotomicTrace, ident: &RootIdentification) -> Result<Elem> {
    let root = ident.fixed_root(t.conductor())?;
    let f = &ident.field;
    // Horner evaluation of the coefficient vector at the root.
    let mut acc = f.zero();
    for &c in t.coeffs().iter().rev() {
        acc = f.mul(&acc, &root);
        let c_mod = c.rem_euclid(f.l as i64) as u64;
        acc = f.add(&acc, &f.from_u64(c_mod));
    }
    Ok(acc)
}

/// Restriction of rho to a subspace spanned by the columns of `basis`;
/// errors if the subspace is not invariant.
pub fn restrict(rho: &FieldMatrix, basis: &FieldMatrix) -> Result<FieldMatrix> {
    let moved = rho.mul(basis);
    basis
        .solve(&moved)
        .map_err(|_| Error::Domain("subspace is not invariant under the operator".into()))
}

/// Checks trace additivity: for an invariant subspace W1 (columns
/// of `w1`), tr(rho) = tr(rho|W1) + tr(rho on V/W1). Exact equality in
/// the compositum of the conductors.
pub fn trace_additivity_check(
    rho: &FieldMatrix,
    w1: &FieldMatrix,
    ident: &RootIdentification,
) -> Result<bool> {
    let f = rho.field.clone();
    let n = rho.rows;
    // W1 = 0 is allowed: the quotient map is rho itself.
    if w1.cols == 0 {
        return Ok(true);
    }
    let sub = restrict(rho, w1)?;

    // Complete the basis of W1 to a basis of the full space.
    let mut aug = FieldMatrix::zero(f.clone(), n, w1.cols + n);
    for i in 0..n {
        for j in 0..w1.cols {
            aug.set(i, j, w1.get(i, j).clone());
        }
        aug.set(i, w1.cols + i, f.one());
    }
    let (_, pivots) = aug.row_echelon();
    let w_rank = pivots.iter().filter(|&&p| p < w1.cols).count();
    if w_rank != w1.cols {
        return Err(Error::Domain("subspace basis is not independent".into()));
    }
    let complement_cols: Vec<usize> = pivots.iter().filter(|&&p| p >= w1.cols).copied().collect();

    // Full change-of-basis matrix [W1 | C].
    let total = w1.cols + complement_cols.len();
    if total != n {
        return Err(Error::Internal("basis completion has wrong size".into()));
    }
    let mut p = FieldMatrix::zero(f.clone(), n, n);
    for i in 0..n {
        for j in 0..w1.cols {
            p.set(i, j, w1.get(i, j).clone());
        }
        for (k, &c) in complement_cols.iter().enumerate() {
            p.set(i, w1.cols + k, aug.get(i, c).clone());
        }
    }
    // rho in the new basis: P^{-1} rho P, solved column by column.
    let conj = p.solve(&rho.mul(&p))?;
    // Quotient block: lower-right (n - w1.cols) square.
    let qn = n - w1.cols;
    let mut quot = FieldMatrix::zero(f, qn, qn);
    for i in 0..qn {
        for j in 0..qn {
            quot.set(i, j, conj.get(w1.cols + i, w1.cols + j).clone());
        }
    }

    let whole = brauer_trace(rho, ident)?;
    let on_sub = brauer_trace(&sub, ident)?;
    let on_quot = brauer_trace(&quot, ident)?;
    Ok(whole.eq_embedded(&on_sub.add(&on_quot)))
}

/// Brauer trace of an operator permuting the summands of a direct-sum
/// decomposition (coordinate blocks) along a fixed-point-free
/// permutation sigma. The trace must vanish; a nonzero value is an
/// internal invariant violation.
pub fn permutation_block_trace(
    rho: &FieldMatrix,
    blocks: &[Vec<usize>],
    sigma: &[usize],
    ident: &RootIdentification,
) -> Result<CyclotomicTrace> {
    if blocks.len() != sigma.len() {
        return Err(Error::Precondition("sigma must permute the block indices".into()));
    }
    let mut seen = vec![false; blocks.len()];
    for (i, &s) in sigma.iter().enumerate() {
        if s >= blocks.len() || seen[s] {
            return Err(Error::Precondition("sigma is not a permutation".into()));
        }
        seen[s] = true;
        if s == i {
            return Err(Error::Precondition(format!("sigma fixes block {}", i)));
        }
    }
    // The blocks must exhaust the coordinates.
    let n = rho.rows;
    let mut owner = vec![usize::MAX; n];
    for (b, coords) in blocks.iter().enumerate() {
        for &c in coords {
            if c >= n || owner[c] != usize::MAX {
                return Err(Error::Precondition("blocks must partition the coordinates".into()));
            }
            owner[c] = b;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::Precondition("blocks must cover all coordinates".into()));
    }
    // rho(V_i) inside V_{sigma(i)}: column c in block i may only hit rows
    // owned by sigma(i).
    let f = &rho.field;
    for c in 0..n {
        let target = sigma[owner[c]];
        for r in 0..n {
            if !f.is_zero(rho.get(r, c)) && owner[r] != target {
                return Err(Error::Precondition(format!(
                    "operator does not map block {} into block {}",
                    owner[c], target
                )));
            }
        }
    }
    let trace = brauer_trace(rho, ident)?;
    if !trace.is_zero() {
        return Err(Error::Internal(
            "fixed-point-free block permutation must have vanishing Brauer trace".into(),
        ));
    }
    Ok(trace)
}

/// Enumerates the group generated by matrices; errors beyond the cap.
pub fn enumerate_group(generators: &[FieldMatrix], cap: usize) -> Result<Vec<FieldMatrix>> {
    let Some(first) = generators.first() else {
        return Err(Error::Domain("need at least one generator (or pass the identity)".into()));
    };
    let f = first.field.clone();
    let n = first.rows;
    let id = FieldMatrix::identity(f, n);
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for gen in generators {
            let next = g.mul(gen);
            if !elements.contains(&next) {
                if elements.len() >= cap {
                    return Err(Error::Resource(format!(
                        "generated group exceeds the cap of {} elements",
                        cap
                    )));
                }
                elements.push(next.clone());
                frontier.push(next);
            }
        }
    }
    Ok(elements)
}

/// Order cap for p-group enumeration.
pub const PGROUP_CAP: usize = 10_000;

/// Checks the averaging identity tr(gamma on V^P) = (1/|P|) sum_{h in P}
/// tr(gamma h), with the right side computed in the rational cyclotomic
/// field and verified integral.
pub fn pgroup_average_check(
    p_generators: &[FieldMatrix],
    gamma: &FieldMatrix,
    ident: &RootIdentification,
) -> Result<bool> {
    let f = gamma.field.clone();
    let n = gamma.rows;
    let p_group = if p_generators.is_empty() {
        vec![FieldMatrix::identity(f.clone(), n)]
    } else {
        enumerate_group(p_generators, PGROUP_CAP)?
    };
    let order = p_group.len();

    // |P| must be a prime power with p != l.
    if order > 1 {
        let primes = crate::gf::prime_factors(order as u64);
        if primes.len() != 1 {
            return Err(Error::Precondition(format!(
                "generated group has order {}, not a prime power",
                order
            )));
        }
        if primes[0] == f.l {
            return Err(Error::Precondition("p must differ from l".into()));
        }
    }

    // gamma normalizes P as a set.
    let gamma_inv = invert(gamma)?;
    for h in &p_group {
        let conj = gamma.mul(h).mul(&gamma_inv);
        if !p_group.contains(&conj) {
            return Err(Error::Precondition("gamma does not normalize P".into()));
        }
    }

    // V^P: intersection of the fixed spaces of the generators.
    let id = FieldMatrix::identity(f.clone(), n);
    let mut fixed = id.clone();
    for h in p_generators {
        // Stack (h - 1) fixed and take the kernel inside the current space.
        let shifted = h.sub(&id).mul(&fixed);
        let ker = shifted.kernel_basis();
        fixed = fixed.mul(&ker);
        if fixed.cols == 0 {
            break;
        }
    }

    let lhs = if fixed.cols == 0 {
        CyclotomicTrace::from_integer(0)
    } else {
        let gamma_on_fixed = restrict(gamma, &fixed)
            .map_err(|_| Error::Precondition("gamma does not preserve V^P".into()))?;
        brauer_trace(&gamma_on_fixed, ident)?
    };

    let mut rhs_sum = CyclotomicTrace::from_integer(0);
    for h in &p_group {
        let term = brauer_trace(&gamma.mul(h), ident)?;
        rhs_sum = rhs_sum.add(&term);
    }
    let rhs = rhs_sum.div_exact(order as i64).map_err(|_| {
        Error::Internal("averaged Brauer trace is not integral".into())
    })?;

    Ok(lhs.eq_embedded(&rhs))
}

/// Inverse of a square matrix, via solving against the identity.
pub fn invert(m: &FieldMatrix) -> Result<FieldMatrix> {
    if !m.is_square() {
        return Err(Error::Domain("only square matrices invert".into()));
    }
    let id = FieldMatrix::identity(m.field.clone(), m.rows);
    let inv = m
        .solve(&id)
        .map_err(|_| Error::Domain("matrix is singular".into()))?;
    if m.mul(&inv) != id {
        return Err(Error::Domain("matrix is singular".into()));
    }
    Ok(inv)
}
