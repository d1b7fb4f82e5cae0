//! Upper bounds on the clique number from the parity split of floor(sqrt q),
//! the classification of primes by whether that bound beats floor(sqrt p),
//! and the zero count of the profile polynomial over Z_p.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{CharacterTable, FieldSpec};
use crate::primes::{isqrt, odd_prime_power, sieve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "case_i_improved")]
    CaseIImproved,
    #[serde(rename = "case_i_not_improved")]
    CaseINotImproved,
    #[serde(rename = "case_ii_improved")]
    CaseIIImproved,
    #[serde(rename = "case_ii_exception")]
    CaseIIException,
}

impl Classification {
    pub const ALL: [Classification; 4] = [
        Classification::CaseIImproved,
        Classification::CaseINotImproved,
        Classification::CaseIIImproved,
        Classification::CaseIIException,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::CaseIImproved => "case_i_improved",
            Classification::CaseINotImproved => "case_i_not_improved",
            Classification::CaseIIImproved => "case_ii_improved",
            Classification::CaseIIException => "case_ii_exception",
        }
    }

    pub fn improved(self) -> bool {
        matches!(
            self,
            Classification::CaseIImproved | Classification::CaseIIImproved
        )
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Classification::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Cache(format!("unknown classification {s:?}")))
    }
}

/// Rejects anything but q = p^k with k odd and q = 1 (mod 4).
pub fn check_admissible(q: u64) -> Result<(u64, u32)> {
    let (p, k) = odd_prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if k % 2 == 0 {
        return Err(Error::EvenExtensionDegree(q));
    }
    if q % 4 != 1 {
        return Err(Error::NotOneModFour(q));
    }
    Ok((p, k))
}

/// Largest s allowed by the parity case of n = floor(sqrt q), capped at n.
pub fn theorem_bound(q: u64) -> Result<u64> {
    check_admissible(q)?;
    Ok(theorem_bound_unchecked(q))
}

/// Arithmetic only: case (i) s^2 + s - 1 <= q for even n, case (ii)
/// s^2 + 2s - 2 <= q for odd n. Searches down from n; n - 1 always satisfies
/// either inequality, so at most two probes are made.
pub fn theorem_bound_unchecked(q: u64) -> u64 {
    let n = isqrt(q);
    let fits = |s: u64| inequality_lhs(n, s) <= q as u128;
    if fits(n) {
        n
    } else {
        debug_assert!(fits(n - 1));
        n - 1
    }
}

/// Left-hand side of the inequality selected by the parity of n, evaluated at s.
pub fn inequality_lhs(n: u64, s: u64) -> u128 {
    let s = s as u128;
    if n.is_multiple_of(2) {
        (s * s + s).saturating_sub(1)
    } else {
        (s * s + 2 * s).saturating_sub(2)
    }
}

pub fn classify(q: u64) -> Result<Classification> {
    check_admissible(q)?;
    Ok(classify_unchecked(q))
}

/// Classification of a prime p = 1 (mod 4).
pub fn classify_prime(p: u64) -> Result<Classification> {
    match check_admissible(p)? {
        (_, 1) => Ok(classify_unchecked(p)),
        _ => Err(Error::NotPrime(p)),
    }
}

fn classify_unchecked(q: u64) -> Classification {
    let n = isqrt(q);
    if n % 2 == 1 {
        if q == (n + 1) * (n + 1) - 3 {
            Classification::CaseIIException
        } else {
            Classification::CaseIIImproved
        }
    } else if n * n + n - 1 > q {
        Classification::CaseIImproved
    } else {
        Classification::CaseINotImproved
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionReport {
    pub limit: u64,
    /// Counts in [`Classification::ALL`] order.
    pub counts: [u64; 4],
}

impl FractionReport {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, c: Classification) -> u64 {
        self.counts[c as usize]
    }

    pub fn improved(&self) -> u64 {
        self.count(Classification::CaseIImproved) + self.count(Classification::CaseIIImproved)
    }

    /// Improved share of all primes p = 1 (mod 4) up to the limit; 0 when there are none.
    pub fn fraction(&self) -> Ratio<u64> {
        match self.total() {
            0 => Ratio::from_integer(0),
            t => Ratio::new(self.improved(), t),
        }
    }
}

/// Buckets every prime p = 1 (mod 4), p <= limit.
pub fn classify_primes(limit: u64) -> FractionReport {
    let flags = sieve(limit);
    let mut counts = [0u64; 4];
    for p in (5..=limit).step_by(4) {
        if flags[p as usize] {
            counts[classify_unchecked(p) as usize] += 1;
        }
    }
    FractionReport { limit, counts }
}

pub fn improvement_fraction(limit: u64) -> Ratio<u64> {
    classify_primes(limit).fraction()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    /// floor(sqrt q), also the trivial bound.
    pub n: u64,
    /// Selects which inequality applies.
    pub n_parity: Parity,
    pub theorem_bound: u64,
    pub improved: bool,
    pub classification: Classification,
    pub s_exact: Option<u64>,
    pub lemma_bound: Option<u64>,
}

impl BoundReport {
    pub fn trivial_bound(&self) -> u64 {
        self.n
    }

    pub fn n_is_even(&self) -> bool {
        self.n_parity == Parity::Even
    }

    /// s_exact <= theorem_bound <= n whenever the exact value is known.
    pub fn consistent(&self) -> bool {
        self.theorem_bound <= self.n && self.s_exact.is_none_or(|s| s <= self.theorem_bound)
    }
}

pub fn bound_report(q: u64, s_exact: Option<u64>, lemma_bound: Option<u64>) -> Result<BoundReport> {
    let (p, k) = check_admissible(q)?;
    let n = isqrt(q);
    let theorem_bound = theorem_bound_unchecked(q);
    Ok(BoundReport {
        q,
        p,
        k,
        n,
        n_parity: Parity::of(n),
        theorem_bound,
        improved: theorem_bound < n,
        classification: classify_unchecked(q),
        s_exact,
        lemma_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyReport {
    pub p: u64,
    pub s: usize,
    /// Coefficients of the interpolating polynomial, low first, trimmed.
    pub coefficients: Vec<u64>,
    pub degree: usize,
    pub leading: u64,
    pub zero_count: usize,
    /// Interpolant reproduces every sample.
    pub roundtrip: bool,
    /// (q + s^2 - 2s) / 2, reported only.
    pub contradiction_threshold: Ratio<u64>,
}

impl PolyReport {
    pub fn expected_degree(&self) -> usize {
        (self.p as usize - 1) / 2
    }

    pub fn degree_ok(&self) -> bool {
        self.degree == self.expected_degree()
    }

    pub fn leading_ok(&self) -> bool {
        self.leading == self.s as u64 % self.p
    }

    /// The zero bound is only claimed when s is nonzero mod p.
    pub fn zeros_ok(&self) -> bool {
        (self.s as u64).is_multiple_of(self.p) || self.zero_count <= self.expected_degree()
    }

    pub fn passed(&self) -> bool {
        self.roundtrip && self.degree_ok() && self.leading_ok() && self.zeros_ok()
    }
}

/// Interpolates phi1 mod p over all of Z_p and inspects the resulting polynomial.
pub fn poly_zero_check(
    field: &FieldSpec,
    chi: &CharacterTable,
    clique: &[usize],
) -> Result<PolyReport> {
    if field.k() != 1 {
        return Err(Error::ExtensionField(field.k()));
    }
    if clique.is_empty() {
        return Err(Error::EmptyClique);
    }
    let p = field.p();
    let values: Vec<u64> = (0..p as usize)
        .map(|t| {
            let phi1: i64 = 1 + clique
                .iter()
                .map(|&b| chi.chi(field.sub_idx(b, t)) as i64)
                .sum::<i64>();
            phi1.rem_euclid(p as i64) as u64
        })
        .collect();
    let coefficients = interpolate_all_points(&values, p);
    let roundtrip = (0..p).all(|t| horner(&coefficients, t, p) == values[t as usize]);
    let degree = coefficients.len().saturating_sub(1);
    let s = clique.len() as u64;
    Ok(PolyReport {
        p,
        s: clique.len(),
        leading: *coefficients.last().unwrap_or(&0),
        degree,
        coefficients,
        zero_count: values.iter().filter(|&&v| v == 0).count(),
        roundtrip,
        contradiction_threshold: Ratio::new(p + s * s - 2 * s, 2),
    })
}

/// Lagrange interpolation through (t, values[t]) for every t in Z_p.
///
/// With nodes covering Z_p, the node polynomial is x^p - x and its derivative
/// is -1 everywhere, so each basis polynomial is -(x^p - x)/(x - t), obtained
/// by synthetic division.
pub fn interpolate_all_points(values: &[u64], p: u64) -> Vec<u64> {
    let n = p as usize;
    assert_eq!(values.len(), n);
    let mut coeffs = vec![0u64; n];
    let mut quotient = vec![0u64; n];
    for (t, &y) in values.iter().enumerate() {
        if y == 0 {
            continue;
        }
        // (x^p - x) / (x - t): quotient degree p-1, top coefficient 1
        let t = t as u64;
        quotient[n - 1] = 1;
        for i in (1..n).rev() {
            // coefficient of x^i in x^p - x
            let a = if i == 1 { p - 1 } else { 0 };
            quotient[i - 1] = (a + t * quotient[i]) % p;
        }
        let scale = (p - y) % p;
        for (c, &b) in coeffs.iter_mut().zip(&quotient) {
            *c = (*c + scale * b) % p;
        }
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    coeffs
}

pub fn horner(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_bound_examples() {
        assert_eq!(theorem_bound(29), Ok(4));
        assert_eq!(theorem_bound(37), Ok(5));
        assert_eq!(theorem_bound(41), Ok(6));
        assert_eq!(theorem_bound(17), Ok(3));
        assert_eq!(theorem_bound(13), Ok(3));
        assert_eq!(theorem_bound(125), Ok(10));
    }

    #[test]
    fn theorem_bound_errors() {
        assert_eq!(theorem_bound(9), Err(Error::EvenExtensionDegree(9)));
        assert_eq!(theorem_bound(7), Err(Error::NotOneModFour(7)));
        assert_eq!(theorem_bound(27), Err(Error::NotOneModFour(27)));
        assert_eq!(theorem_bound(21), Err(Error::NotPrimePower(21)));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_prime(13), Ok(Classification::CaseIIException));
        assert_eq!(classify_prime(89), Ok(Classification::CaseIIImproved));
        assert_eq!(theorem_bound(89), Ok(8));
        assert_eq!(classify_prime(41), Ok(Classification::CaseINotImproved));
        assert_eq!(classify_prime(37), Ok(Classification::CaseIImproved));
        assert_eq!(classify_prime(5), Ok(Classification::CaseINotImproved));
        assert_eq!(classify_prime(125), Err(Error::NotPrime(125)));
    }

    #[test]
    fn fraction_up_to_13() {
        let r = classify_primes(13);
        assert_eq!(r.total(), 2);
        assert_eq!(r.improved(), 0);
        assert_eq!(improvement_fraction(13), Ratio::from_integer(0));
    }

    #[test]
    fn classification_names_roundtrip() {
        for c in Classification::ALL {
            assert_eq!(c.as_str().parse::<Classification>(), Ok(c));
        }
        assert!("nope".parse::<Classification>().is_err());
    }

    #[test]
    fn bound_report_fields() {
        let r = bound_report(29, Some(4), Some(4)).unwrap();
        assert_eq!((r.n, r.theorem_bound, r.improved), (5, 4, true));
        assert!(r.consistent());
        assert!(!r.n_is_even());
        let bad = bound_report(29, Some(5), None).unwrap();
        assert!(!bad.consistent());
    }

    #[test]
    fn interpolation_recovers_known_polynomial() {
        // 3x^3 + x + 4 over Z_7
        let p = 7;
        let target = [4, 1, 0, 3];
        let values: Vec<u64> = (0..p).map(|x| horner(&target, x, p)).collect();
        assert_eq!(interpolate_all_points(&values, p), target.to_vec());
        assert_eq!(interpolate_all_points(&[0; 7], p), vec![0]);
    }

    fn prime_field(p: u64) -> (FieldSpec, CharacterTable) {
        let f = FieldSpec::prime(p).unwrap();
        let chi = CharacterTable::build(&f).unwrap();
        (f, chi)
    }

    #[test]
    fn poly_check_small_cliques() {
        let (f, chi) = prime_field(13);
        let r = poly_zero_check(&f, &chi, &[0, 1, 4]).unwrap();
        assert_eq!((r.degree, r.leading), (6, 3));
        assert!(r.zero_count <= 6);
        assert!(r.passed());

        let (f, chi) = prime_field(5);
        let r = poly_zero_check(&f, &chi, &[0, 1]).unwrap();
        assert_eq!((r.degree, r.leading, r.zero_count), (2, 2, 0));
        assert!(r.passed());
        assert_eq!(r.contradiction_threshold, Ratio::new(5, 2));
    }

    #[test]
    fn poly_check_rejects_extension_fields() {
        let f = FieldSpec::new(3, 2, None).unwrap();
        let chi = CharacterTable::build(&f).unwrap();
        assert_eq!(
            poly_zero_check(&f, &chi, &[0, 1, 2]),
            Err(Error::ExtensionField(2))
        );
    }

    // phi1(x) = 1 + sum_b (b - x)^((p-1)/2) expanded binomially; independent of
    // the interpolation route.
    fn closed_form(clique: &[u64], p: u64) -> Vec<u64> {
        let m = (p - 1) / 2;
        let mut binom = vec![1u64; m as usize + 1];
        for j in 1..=m as usize {
            binom[j] = binom[j - 1] * (m - j as u64 + 1) % p * pow_mod(j as u64, p - 2, p) % p;
        }
        let mut coeffs = vec![0u64; m as usize + 1];
        coeffs[0] = 1;
        for &b in clique {
            for j in 0..=m as usize {
                // C(m, j) b^(m-j) (-x)^j
                let sign = if j % 2 == 0 { 1 } else { p - 1 };
                let term = binom[j] * pow_mod(b, m - j as u64, p) % p * sign % p;
                coeffs[j] = (coeffs[j] + term) % p;
            }
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        coeffs
    }

    fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    #[test]
    fn interpolant_matches_binomial_expansion() {
        for (p, clique) in [
            (13, vec![0, 1, 4]),
            (29, vec![0, 1, 6, 7]),
            (5, vec![0, 1]),
            (17, vec![0, 1, 9]),
        ] {
            let (f, chi) = prime_field(p);
            let idx: Vec<usize> = clique.iter().map(|&b| b as usize).collect();
            let r = poly_zero_check(&f, &chi, &idx).unwrap();
            assert_eq!(r.coefficients, closed_form(&clique, p), "p = {p}");
        }
    }
}
