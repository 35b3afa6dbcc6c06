//! Exact arithmetic in rings of cyclotomic integers Z[x]/(Phi_N).
//!
//! Values of the Brauer trace live here: the trace of a finite-order
//! operator in characteristic l is a sum of Teichmuller lifts of its
//! eigenvalues, i.e. a genuine cyclotomic integer, not a mod-l residue.
//! Elements are integer coefficient vectors of length phi(N) in the power
//! basis 1, x, ..., x^{phi(N)-1}; this is a free Z-basis, so integrality
//! of a rational multiple is visible coefficientwise.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cyclotomic polynomial Phi_N as an integer coefficient vector
/// (constant term first, monic). Memoized; the ring operations below hit
/// this on every reduction.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let value = cyclotomic_polynomial_uncached(n);
    cache.lock().unwrap().insert(n, value.clone());
    value
}

fn cyclotomic_polynomial_uncached(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact division.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials; panics if the division is not
/// exact (callers only divide known multiples).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i64> = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for j in 0..=dd {
                rem[k + j] -= c * den[j];
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division not exact");
    quot
}

fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// An element of Z[x]/(Phi_N), N the conductor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicTrace {
    conductor: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicTrace {
    pub fn zero(conductor: u64) -> Self {
        CyclotomicTrace {
            conductor,
            coeffs: vec![0; euler_phi(conductor) as usize],
        }
    }

    pub fn from_integer(k: i64) -> Self {
        CyclotomicTrace {
            conductor: 1,
            coeffs: vec![k],
        }
    }

    /// zeta_N^k as a ring element.
    pub fn root_of_unity(conductor: u64, k: u64) -> Self {
        let mut t = CyclotomicTrace::zero(conductor);
        t.add_root_power(k % conductor, 1);
        t
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Adds mult * x^k, reducing mod Phi_N.
    pub fn add_root_power(&mut self, k: u64, mult: i64) {
        let n = self.conductor;
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        // Work with a scratch polynomial of degree < N, then reduce.
        let mut scratch = vec![0i64; n as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            scratch[i] += c;
        }
        scratch[(k % n) as usize] += mult;
        reduce_in_place(&mut scratch, &phi);
        self.coeffs = scratch[..deg].to_vec();
    }

    pub fn add(&self, other: &CyclotomicTrace) -> CyclotomicTrace {
        let (a, b) = to_common_conductor(self, other);
        CyclotomicTrace {
            conductor: a.conductor,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn neg(&self) -> CyclotomicTrace {
        CyclotomicTrace {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &CyclotomicTrace) -> CyclotomicTrace {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CyclotomicTrace) -> CyclotomicTrace {
        let (a, b) = to_common_conductor(self, other);
        let n = a.conductor;
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        let mut prod = vec![0i64; 2 * deg.max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        reduce_in_place(&mut prod, &phi);
        CyclotomicTrace {
            conductor: n,
            coeffs: prod[..deg].to_vec(),
        }
    }

    pub fn scale(&self, k: i64) -> CyclotomicTrace {
        CyclotomicTrace {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Exact division by an integer. The power basis is a free Z-basis of
    /// Z[x]/(Phi_N), so divisibility is coefficientwise; a non-integral
    /// quotient is a domain error.
    pub fn div_exact(&self, k: i64) -> Result<CyclotomicTrace> {
        if k == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            if c % k != 0 {
                return Err(Error::Domain(format!(
                    "cyclotomic element is not divisible by {}",
                    k
                )));
            }
            coeffs.push(c / k);
        }
        Ok(CyclotomicTrace {
            conductor: self.conductor,
            coeffs,
        })
    }

    /// Image in Z[x]/(Phi_M) for N | M, via x -> x^{M/N}.
    pub fn embed(&self, m: u64) -> Result<CyclotomicTrace> {
        if m % self.conductor != 0 {
            return Err(Error::Domain(format!(
                "conductor {} does not divide {}",
                self.conductor, m
            )));
        }
        if m == self.conductor {
            return Ok(self.clone());
        }
        let step = m / self.conductor;
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        let mut scratch = vec![0i64; (self.coeffs.len() as u64 * step) as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            scratch[i * step as usize] += c;
        }
        reduce_in_place(&mut scratch, &phi);
        Ok(CyclotomicTrace {
            conductor: m,
            coeffs: scratch[..deg].to_vec(),
        })
    }

    /// Equality as algebraic numbers, comparing inside the compositum.
    pub fn eq_embedded(&self, other: &CyclotomicTrace) -> bool {
        let (a, b) = to_common_conductor(self, other);
        a.coeffs == b.coeffs
    }

    /// The integer value, if the element is rational.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }
}

fn to_common_conductor(a: &CyclotomicTrace, b: &CyclotomicTrace) -> (CyclotomicTrace, CyclotomicTrace) {
    let m = a.conductor.lcm(&b.conductor);
    (
        a.embed(m).expect("lcm is a multiple"),
        b.embed(m).expect("lcm is a multiple"),
    )
}

/// Reduces a scratch polynomial modulo the monic polynomial `phi`,
/// in place; afterwards only the first deg(phi) entries are meaningful.
fn reduce_in_place(scratch: &mut Vec<i64>, phi: &[i64]) {
    let deg = phi.len() - 1;
    if deg == 0 {
        scratch.clear();
        scratch.push(0);
        return;
    }
    for k in (deg..scratch.len()).rev() {
        let c = scratch[k];
        if c != 0 {
            scratch[k] = 0;
            for j in 0..deg {
                scratch[k - deg + j] -= c * phi[j];
            }
        }
    }
}
