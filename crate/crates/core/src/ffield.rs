//! Arithmetic in F_{p^k} for odd p, with elements encoded as dense integer indices.
//!
//! An element with coefficient vector `(c_0, ..., c_{k-1})` over Z_p has index
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Index 0 is zero, index 1 is one, and for
//! `k = 1` the index is the residue itself.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Default bound on the field order.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

/// Largest extension degree representable under any cap below 2^32 (3^20 > 2^31).
const MAX_DEGREE: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(usize);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// The arithmetic context for F_q, q = p^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, low coefficient first, length k + 1.
    modulus: Vec<u64>,
}

impl FieldSpec {
    /// Builds F_{p^k} under the default order cap.
    ///
    /// Without an explicit modulus, `k > 1` selects the lexicographically smallest
    /// monic irreducible of degree `k`, comparing coefficient vectors `(c_0, ..., c_{k-1})`.
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Self> {
        Self::with_cap(p, k, modulus, DEFAULT_ORDER_CAP)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn with_cap(p: u64, k: u32, modulus: Option<&[u64]>, cap: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order > cap as u128 || k as usize > MAX_DEGREE {
            return Err(Error::OrderTooLarge { order, cap });
        }
        let q = order as u64;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 {
                    return Err(Error::DegreeMismatch {
                        expected: k,
                        found: m.len(),
                    });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::CoefficientOutOfRange(c));
                }
                if !poly::is_irreducible(m, p) {
                    return Err(Error::ReduciblePolynomial);
                }
                m.to_vec()
            }
            None if k == 1 => vec![0, 1],
            None => poly::smallest_irreducible(p, k as usize),
        };
        Ok(FieldSpec { p, k, q, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of elements as a `usize`, for indexing.
    #[inline]
    pub fn order(&self) -> usize {
        self.q as usize
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn element(&self, index: usize) -> Result<FieldElement> {
        if (index as u64) < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::IndexOutOfRange { index, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    fn check(&self, a: FieldElement) -> Result<usize> {
        self.element(a.0).map(|e| e.0)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(FieldElement(self.add_idx(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(FieldElement(self.sub_idx(self.check(a)?, self.check(b)?)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(FieldElement(self.mul_idx(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        Ok(FieldElement(self.neg_idx(self.check(a)?)))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement> {
        Ok(FieldElement(self.pow_idx(self.check(a)?, e)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        match self.check(a)? {
            0 => Err(Error::DivisionByZero),
            i => Ok(FieldElement(self.inv_idx(i))),
        }
    }

    // Unchecked index arithmetic used by the graph and search layers.

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            let s = a + b;
            let p = self.p as usize;
            return if s >= p { s - p } else { s };
        }
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            return if a >= b {
                a - b
            } else {
                a + self.p as usize - b
            };
        }
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        self.sub_idx(0, a)
    }

    fn digitwise(&self, mut a: usize, mut b: usize, op: impl Fn(u64, u64, u64) -> u64) -> usize {
        let p = self.p as usize;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = op((a % p) as u64, (b % p) as u64, self.p) as usize;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        let p = self.p;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as usize;
        }
        let k = self.k as usize;
        let x = self.digits(a);
        let y = self.digits(b);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        // reduce by the monic modulus, top degree first
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let shift = top - k + j;
                prod[shift] = (prod[shift] + (p - c) * self.modulus[j]) % p;
            }
            prod[top] = 0;
        }
        self.from_digits(&prod[..k])
    }

    pub fn pow_idx(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(q-2); `a` must be nonzero.
    pub fn inv_idx(&self, a: usize) -> usize {
        debug_assert!(a != 0);
        self.pow_idx(a, self.q - 2)
    }

    /// Base-p digits of an index, low first; entries past `k` are zero.
    pub fn digits(&self, mut index: usize) -> [u64; MAX_DEGREE] {
        let p = self.p as usize;
        let mut out = [0u64; MAX_DEGREE];
        for d in out.iter_mut().take(self.k as usize) {
            *d = (index % p) as u64;
            index /= p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> usize {
        digits
            .iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.p as usize + d as usize)
    }
}

/// Quadratic character of F_q with the residue and non-residue sets.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    values: Vec<i8>,
    q_set: BitSet,
    nq_set: BitSet,
}

impl CharacterTable {
    /// Marks every nonzero square `a*a`, then checks each index against
    /// Euler's criterion `x^((q-1)/2) = 1`.
    pub fn build(field: &FieldSpec) -> Result<Self> {
        let n = field.order();
        let mut q_set = BitSet::new(n);
        for a in 1..n {
            q_set.insert(field.mul_idx(a, a));
        }
        let half = (field.q() - 1) / 2;
        let mut values = vec![0i8; n];
        let mut nq_set = BitSet::new(n);
        for (x, value) in values.iter_mut().enumerate().skip(1) {
            let euler = field.pow_idx(x, half) == 1;
            if euler != q_set.contains(x) {
                return Err(Error::CharacterMismatch(x));
            }
            if euler {
                *value = 1;
            } else {
                *value = -1;
                nq_set.insert(x);
            }
        }
        Ok(CharacterTable {
            values,
            q_set,
            nq_set,
        })
    }

    #[inline]
    pub fn chi(&self, x: usize) -> i8 {
        self.values[x]
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    #[inline]
    pub fn is_residue(&self, x: usize) -> bool {
        self.values[x] == 1
    }

    #[inline]
    pub fn is_nonresidue(&self, x: usize) -> bool {
        self.values[x] == -1
    }

    pub fn residues(&self) -> &BitSet {
        &self.q_set
    }

    pub fn nonresidues(&self) -> &BitSet {
        &self.nq_set
    }

    /// Smallest-index non-residue.
    pub fn smallest_nonresidue(&self) -> usize {
        self.nq_set.first().expect("odd field has non-residues")
    }
}

/// Dense polynomials over Z_p, low coefficient first.
mod poly {
    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        v
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let dm = m.len() - 1;
        let mut r = a.to_vec();
        while r.len() > dm {
            let c = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            if c != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    r[shift + j] = (r[shift + j] + (p - c) * mj % p) % p;
                }
            }
            r.pop();
        }
        trim(r)
    }

    /// Monic polynomials of exact degree `d`, in lexicographic order of
    /// `(c_0, ..., c_{d-1})`.
    fn monic_of_degree(p: u64, d: usize) -> impl Iterator<Item = Vec<u64>> {
        let count = p.pow(d as u32);
        (0..count).map(move |mut m| {
            let mut coeffs = vec![0u64; d + 1];
            for i in (0..d).rev() {
                coeffs[i] = m % p;
                m /= p;
            }
            coeffs[d] = 1;
            coeffs
        })
    }

    /// All monic irreducibles of degree 1..=max_degree, by degree.
    fn irreducibles_up_to(p: u64, max_degree: usize) -> Vec<Vec<u64>> {
        let mut found: Vec<Vec<u64>> = Vec::new();
        for d in 1..=max_degree {
            let smaller: Vec<Vec<u64>> = found
                .iter()
                .filter(|g| g.len() - 1 <= d / 2)
                .cloned()
                .collect();
            for f in monic_of_degree(p, d) {
                if smaller.iter().all(|g| !is_zero(&rem_monic(&f, g, p))) {
                    found.push(f);
                }
            }
        }
        found
    }

    fn is_zero(v: &[u64]) -> bool {
        v.iter().all(|&c| c == 0)
    }

    /// Trial division by every monic irreducible of degree at most deg/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d <= 1 {
            return d == 1;
        }
        irreducibles_up_to(p, d / 2)
            .iter()
            .all(|g| !is_zero(&rem_monic(f, g, p)))
    }

    pub fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
        let divisors = irreducibles_up_to(p, k / 2);
        monic_of_degree(p, k)
            .find(|f| divisors.iter().all(|g| !is_zero(&rem_monic(f, g, p))))
            .expect("irreducibles exist in every degree")
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn irreducible_counts_match_gauss_formula() {
            // number of monic irreducibles of degree d over F_p: (1/d) sum mu(d/e) p^e
            let p = 3;
            let all = irreducibles_up_to(p, 4);
            let count = |d: usize| all.iter().filter(|g| g.len() - 1 == d).count();
            assert_eq!(count(1), 3);
            assert_eq!(count(2), 3);
            assert_eq!(count(3), 8);
            assert_eq!(count(4), 18);
        }

        #[test]
        fn remainder() {
            // x^2 + 1 mod (x + 1) over Z_3 = 2
            assert_eq!(rem_monic(&[1, 0, 1], &[1, 1], 3), vec![2]);
        }
    }
}
