//! Finite fields F_{l^m} and exact dense linear algebra over them.
//!
//! The extension is realized concretely as F_l[x]/(f) for an explicit
//! monic irreducible f of degree m; elements are coefficient vectors.
//! Rank, kernel, image and restriction computations are plain Gaussian
//! elimination. Fields stay desk-sized (l^m in the hundreds), so brute
//! force discrete logs and generator searches are fine.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The field F_{l^m} = F_l[x]/(modulus).
#[derive(Debug, PartialEq, Eq)]
pub struct Field {
    pub l: u64,
    pub m: usize,
    /// Monic irreducible of degree m over F_l, constant term first.
    pub modulus: Vec<u64>,
}

/// A field element: coefficient vector of length m over F_l.
pub type Elem = Vec<u64>;

impl Field {
    /// Builds the field, checking primality of l and irreducibility of
    /// the modulus.
    pub fn new(l: u64, modulus: Vec<u64>) -> Result<Arc<Field>> {
        if !is_prime(l) {
            return Err(Error::Domain(format!("{} is not prime", l)));
        }
        if modulus.len() < 2 {
            return Err(Error::Domain("modulus must have degree >= 1".into()));
        }
        let m = modulus.len() - 1;
        let modulus: Vec<u64> = modulus.iter().map(|c| c % l).collect();
        if modulus[m] != 1 {
            return Err(Error::Domain("modulus must be monic".into()));
        }
        let field = Field { l, m, modulus };
        if !field.modulus_is_irreducible() {
            return Err(Error::Domain("modulus is not irreducible over F_l".into()));
        }
        Ok(Arc::new(field))
    }

    /// F_{l^m} with a deterministically chosen irreducible modulus
    /// (lexicographically least).
    pub fn with_degree(l: u64, m: usize) -> Result<Arc<Field>> {
        if !is_prime(l) {
            return Err(Error::Domain(format!("{} is not prime", l)));
        }
        if m == 0 {
            return Err(Error::Domain("degree must be positive".into()));
        }
        if m == 1 {
            return Field::new(l, vec![0, 1]);
        }
        // Enumerate monic polynomials of degree m by their lower
        // coefficients, least first.
        let mut lower = vec![0u64; m];
        loop {
            let mut modulus = lower.clone();
            modulus.push(1);
            let candidate = Field { l, m, modulus: modulus.clone() };
            if candidate.modulus_is_irreducible() {
                return Ok(Arc::new(candidate));
            }
            // Increment the base-l counter.
            let mut i = 0;
            loop {
                if i == m {
                    return Err(Error::Internal("no irreducible polynomial found".into()));
                }
                lower[i] += 1;
                if lower[i] == l {
                    lower[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    pub fn order(&self) -> u64 {
        self.l.pow(self.m as u32)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.m]
    }

    pub fn one(&self) -> Elem {
        let mut e = vec![0; self.m];
        e[0] = 1;
        e
    }

    pub fn from_u64(&self, k: u64) -> Elem {
        let mut e = vec![0; self.m];
        e[0] = k % self.l;
        e
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.l).collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|&x| (self.l - x) % self.l).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.l - y) % self.l)
            .collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut prod = vec![0u64; 2 * self.m];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.l;
            }
        }
        self.reduce(&mut prod);
        prod.truncate(self.m);
        prod
    }

    fn reduce(&self, poly: &mut [u64]) {
        for k in (self.m..poly.len()).rev() {
            let c = poly[k];
            if c != 0 {
                poly[k] = 0;
                for j in 0..self.m {
                    let sub = (c * self.modulus[j]) % self.l;
                    poly[k - self.m + j] = (poly[k - self.m + j] + self.l - sub) % self.l;
                }
            }
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::Domain("inverse of zero".into()));
        }
        // a^(q-2) by square and multiply.
        self.pow(a, self.order() - 2)
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Result<Elem> {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: &Elem) -> Result<u64> {
        if self.is_zero(a) {
            return Err(Error::Domain("zero has no multiplicative order".into()));
        }
        let group = self.order() - 1;
        let mut ord = group;
        for p in prime_factors(group) {
            while ord % p == 0 && self.pow(a, ord / p).unwrap() == self.one() {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// A deterministic generator of the multiplicative group: the first
    /// element, in coefficient-lex order, of order l^m - 1.
    pub fn generator(&self) -> Elem {
        let group = self.order() - 1;
        let factors = prime_factors(group);
        let mut candidate = self.one();
        loop {
            let is_gen = !self.is_zero(&candidate)
                && factors
                    .iter()
                    .all(|&p| self.pow(&candidate, group / p).unwrap() != self.one());
            if is_gen {
                return candidate;
            }
            // Next element in coefficient-lex order.
            let mut i = 0;
            loop {
                assert!(i < self.m, "searched the whole field without a generator");
                candidate[i] += 1;
                if candidate[i] == self.l {
                    candidate[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// All field elements in coefficient-lex order (desk-sized fields).
    pub fn elements(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.m {
                    return out;
                }
                cur[i] += 1;
                if cur[i] == self.l {
                    cur[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Rabin irreducibility test over F_l.
    fn modulus_is_irreducible(&self) -> bool {
        // Linear polynomials are always irreducible.
        if self.m == 1 {
            return true;
        }
        // x^(l^m) == x mod f, and gcd(x^(l^(m/p)) - x, f) == 1 for the
        // prime divisors p of m.
        let x = vec![0u64, 1];
        let frob_m = self.poly_frobenius_power(&x, self.m as u64);
        if !poly_mod_sub(&frob_m, &x, self.l).is_empty() {
            return false;
        }
        for p in prime_factors(self.m as u64) {
            let frob = self.poly_frobenius_power(&x, (self.m as u64) / p);
            let diff = poly_mod_sub(&frob, &x, self.l);
            let g = poly_gcd(&diff, &self.modulus, self.l);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    /// x |-> x^(l^k) mod modulus, by k successive l-th powers.
    fn poly_frobenius_power(&self, poly: &[u64], k: u64) -> Vec<u64> {
        let mut cur = poly.to_vec();
        for _ in 0..k {
            cur = poly_mod_pow(&cur, self.l, &self.modulus, self.l);
        }
        cur
    }
}

// Polynomial helpers over F_l (coefficient vectors, constant first,
// normalized so the leading coefficient is nonzero; vec![] is 0).

fn poly_trim(mut p: Vec<u64>) -> Vec<u64> {
    while let Some(&c) = p.last() {
        if c == 0 {
            p.pop();
        } else {
            break;
        }
    }
    p
}

fn poly_mod_sub(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + l - y % l) % l;
    }
    poly_trim(out)
}

fn poly_mod_mul(a: &[u64], b: &[u64], modulus: &[u64], l: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % l;
        }
    }
    poly_rem(&prod, modulus, l)
}

fn poly_mod_pow(base: &[u64], mut e: u64, modulus: &[u64], l: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, modulus, l);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mod_mul(&acc, &b, modulus, l);
        }
        b = poly_mod_mul(&b, &b, modulus, l);
        e >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], modulus: &[u64], l: u64) -> Vec<u64> {
    let mut rem = poly_trim(a.to_vec());
    let md = modulus.len() - 1;
    let lead_inv = mod_inv(modulus[md], l);
    while rem.len() > md {
        let k = rem.len() - 1;
        let c = (rem[k] * lead_inv) % l;
        if c != 0 {
            for j in 0..=md {
                let sub = (c * modulus[j]) % l;
                rem[k - md + j] = (rem[k - md + j] + l - sub) % l;
            }
        }
        rem = poly_trim(rem);
        if rem.len() <= md {
            break;
        }
    }
    rem
}

fn poly_gcd(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut x = poly_trim(a.to_vec());
    let mut y = poly_trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(&x, &monicize(&y, l), l);
        // poly_rem divides by the (monicized) leading term; remainder of
        // x mod y equals remainder mod its monic multiple.
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        monicize(&x, l)
    }
}

fn monicize(p: &[u64], l: u64) -> Vec<u64> {
    let lead = *p.last().unwrap();
    let inv = mod_inv(lead, l);
    p.iter().map(|&c| (c * inv) % l).collect()
}

fn mod_inv(a: u64, l: u64) -> u64 {
    // l is prime; Fermat.
    mod_pow(a % l, l - 2, l)
}

fn mod_pow(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1u64;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A square (or rectangular) matrix over a fixed finite field.
#[derive(Clone)]
pub struct FieldMatrix {
    pub field: Arc<Field>,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldMatrix(F_{}^{}, {}x{})",
            self.field.l, self.field.m, self.rows, self.cols
        )
    }
}

impl PartialEq for FieldMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl FieldMatrix {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        FieldMatrix { field, rows, cols, data }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = FieldMatrix::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::Domain("ragged matrix rows".into()));
            }
            for entry in row {
                if entry.len() != field.m {
                    return Err(Error::Domain(format!(
                        "entry has {} coefficients, field degree is {}",
                        entry.len(),
                        field.m
                    )));
                }
                data.push(entry.iter().map(|&x| x % field.l).collect());
            }
        }
        Ok(FieldMatrix { field, rows: r, cols: c, data })
    }

    /// Integer matrix mapped entrywise into the prime subfield.
    pub fn from_integers(field: Arc<Field>, rows: &[Vec<u64>]) -> Result<Self> {
        let as_elems = rows
            .iter()
            .map(|row| row.iter().map(|&x| field.from_u64(x)).collect())
            .collect();
        FieldMatrix::from_rows(field, as_elems)
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows);
        let f = &self.field;
        let mut out = FieldMatrix::zero(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(k, j));
                    let cur = f.add(out.get(i, j), &prod);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, f.add(self.get(i, j), other.get(i, j)));
            }
        }
        out
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, f.sub(self.get(i, j), other.get(i, j)));
            }
        }
        out
    }

    pub fn scale(&self, c: &Elem) -> FieldMatrix {
        let f = &self.field;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, f.mul(self.get(i, j), c));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> FieldMatrix {
        assert!(self.is_square());
        let mut acc = FieldMatrix::identity(self.field.clone(), self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Elem {
        assert!(self.is_square());
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..self.rows {
            acc = f.add(&acc, self.get(i, i));
        }
        acc
    }

    /// Row echelon form; returns (echelon matrix, pivot column indices).
    pub fn row_echelon(&self) -> (FieldMatrix, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col)));
            let Some(pr) = pivot_row else { continue };
            // Swap into place.
            for j in 0..m.cols {
                let a = m.get(row, j).clone();
                let b = m.get(pr, j).clone();
                m.set(row, j, b);
                m.set(pr, j, a);
            }
            let inv = f.inv(m.get(row, col)).expect("pivot nonzero");
            for j in 0..m.cols {
                let v = f.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !f.is_zero(m.get(r, col)) {
                    let factor = m.get(r, col).clone();
                    for j in 0..m.cols {
                        let v = f.sub(m.get(r, j), &f.mul(&factor, m.get(row, j)));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().1.len()
    }

    /// Basis of the column space, as a (rows x rank) matrix.
    pub fn column_space_basis(&self) -> FieldMatrix {
        let (_, pivots) = self.row_echelon();
        let mut out = FieldMatrix::zero(self.field.clone(), self.rows, pivots.len());
        for (k, &col) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, col).clone());
            }
        }
        out
    }

    /// Basis of the kernel, as a (cols x nullity) matrix.
    pub fn kernel_basis(&self) -> FieldMatrix {
        let f = self.field.clone();
        let (ech, pivots) = self.row_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FieldMatrix::zero(f.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                let v = f.neg(ech.get(pr, fc));
                out.set(pc, k, v);
            }
        }
        out
    }

    /// Solves self * X = rhs, where the columns of rhs must lie in the
    /// column space; error otherwise.
    pub fn solve(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        assert_eq!(self.rows, rhs.rows);
        let f = self.field.clone();
        // Augment and eliminate.
        let mut aug = FieldMatrix::zero(f.clone(), self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                aug.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        let (ech, pivots) = aug.row_echelon();
        // Any pivot in the rhs block means inconsistency.
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Domain("linear system is inconsistent".into()));
        }
        let mut out = FieldMatrix::zero(f, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                out.set(pc, j, ech.get(r, self.cols + j).clone());
            }
        }
        Ok(out)
    }

    /// dim(ker(self - lambda) ∩ col(image_basis)), by restricting to the
    /// image coordinates: the count is rank(B) - rank((self - lambda) B).
    pub fn eigenspace_dim_in(&self, lambda: &Elem, image_basis: &FieldMatrix) -> usize {
        let f = self.field.clone();
        let shifted = {
            let mut s = self.clone();
            for i in 0..self.rows {
                let v = f.sub(s.get(i, i), lambda);
                s.set(i, i, v);
            }
            s
        };
        let moved = shifted.mul(image_basis);
        image_basis.rank() - moved.rank()
    }
}
