//! Exact arithmetic for sums of q-th roots of unity.
//!
//! A multiset of q-th roots is encoded as a [`MultiplicityVector`]; it sums
//! to zero exactly when its multiplicity polynomial is divisible by the
//! q-th cyclotomic polynomial. Divisibility is decided over the integers,
//! never by epsilon comparisons. Vanishing sums can further be searched
//! for decompositions into rotated p-cycles; such a decomposition does not
//! always exist once q has three or more prime factors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::primes::prime_divisors;

/// A multiset of q-th roots of unity: `counts[j]` is the multiplicity of
/// `w^j` with `w = e^(2*pi*i/q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityVector {
    q: u32,
    counts: Vec<u64>,
}

impl MultiplicityVector {
    /// An empty multiset over the q-th roots. Panics if `q < 2`.
    pub fn zero(q: u32) -> Self {
        assert!(q >= 2, "modulus must be at least 2");
        MultiplicityVector {
            q,
            counts: vec![0; q as usize],
        }
    }

    /// Builds a vector from explicit counts; the length fixes `q`.
    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(counts.len() >= 2, "modulus must be at least 2");
        MultiplicityVector {
            q: counts.len() as u32,
            counts,
        }
    }

    /// Builds a vector from a list of exponents (repeats allowed).
    pub fn from_exponents(q: u32, exponents: &[u32]) -> Self {
        let mut v = Self::zero(q);
        for &e in exponents {
            v.counts[(e % q) as usize] += 1;
        }
        v
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// The multiset size `N = sum_j counts[j]`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The cyclic shift sending `w^j` to `w^(j+k)`.
    pub fn rotated(&self, k: u32) -> Self {
        let q = self.q as usize;
        let k = (k % self.q) as usize;
        let mut counts = vec![0; q];
        for (j, &c) in self.counts.iter().enumerate() {
            counts[(j + k) % q] = c;
        }
        MultiplicityVector { q: self.q, counts }
    }
}

/// A dense integer polynomial; `coefficients[i]` is the coefficient of
/// `x^i`. The representation is canonical: empty for zero, nonzero leading
/// coefficient otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial {
            coefficients: Vec::new(),
        }
    }

    pub fn from_coefficients(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64_coefficients(coefficients: &[i64]) -> Self {
        Self::from_coefficients(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = -BigInt::one();
        c[n] = BigInt::one();
        IntPolynomial { coefficients: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree of the polynomial; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division by a monic divisor, returning `(quotient,
    /// remainder)`. Panics if `divisor` is not monic.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(
            divisor.coefficients.last().is_some_and(|c| c.is_one()),
            "divisor must be monic"
        );
        let d = divisor.coefficients.len() - 1;
        let mut rem = self.coefficients.clone();
        if rem.len() <= d {
            return (IntPolynomial::zero(), IntPolynomial::from_coefficients(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let lead = std::mem::replace(&mut rem[i], BigInt::zero());
            if lead.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coefficients.iter().take(d).enumerate() {
                let sub = dc * &lead;
                rem[i - d + j] -= sub;
            }
            quot[i - d] = lead;
        }
        rem.truncate(d);
        (
            IntPolynomial::from_coefficients(quot),
            IntPolynomial::from_coefficients(rem),
        )
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn exact_div_monic(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let (q, r) = self.div_rem_monic(divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::from_coefficients(c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{i}")?;
                }
            }
        }
        Ok(())
    }
}

fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

static CYCLOTOMIC_CACHE: Lazy<Mutex<HashMap<u32, Arc<IntPolynomial>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The q-th cyclotomic polynomial, computed by exact division of
/// `x^q - 1` by the product of `Phi_d` over proper divisors `d` of `q`,
/// and memoized per `q`. Panics if `q == 0`.
pub fn cyclotomic_polynomial(q: u32) -> Arc<IntPolynomial> {
    assert!(q >= 1, "q must be positive");
    if let Some(p) = CYCLOTOMIC_CACHE.lock().unwrap().get(&q) {
        return Arc::clone(p);
    }
    let phi = if q == 1 {
        IntPolynomial::from_i64_coefficients(&[-1, 1])
    } else {
        let mut result = IntPolynomial::x_pow_minus_one(q as usize);
        for d in divisors(q) {
            if d == q {
                continue;
            }
            result = result.exact_div_monic(&cyclotomic_polynomial(d));
        }
        result
    };
    let arc = Arc::new(phi);
    CYCLOTOMIC_CACHE
        .lock()
        .unwrap()
        .entry(q)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// Remainder tables for the map `counts -> (sum_j counts[j] x^j) mod Phi_q`.
///
/// Row `j` holds the coefficient vector of `x^j mod Phi_q`, so the
/// remainder of a multiplicity polynomial is the integer linear
/// combination of rows weighted by the counts. This is the same remainder
/// the polynomial division computes, with the per-monomial reductions
/// done once per modulus.
#[derive(Debug)]
pub(crate) struct VanishingTester {
    degree: usize,
    rows: Vec<Vec<i128>>,
}

impl VanishingTester {
    fn new(q: u32) -> Self {
        let phi = cyclotomic_polynomial(q);
        let degree = phi.degree();
        let mut rows = Vec::with_capacity(q as usize);
        for j in 0..q as usize {
            let mut mono = vec![BigInt::zero(); j + 1];
            mono[j] = BigInt::one();
            let (_, rem) = IntPolynomial::from_coefficients(mono).div_rem_monic(&phi);
            let mut row = vec![0i128; degree];
            for (i, c) in rem.coefficients().iter().enumerate() {
                row[i] = i128::try_from(c).expect("cyclotomic remainder exceeds i128");
            }
            rows.push(row);
        }
        VanishingTester { degree, rows }
    }

    /// True iff the counts polynomial reduces to zero modulo `Phi_q`.
    pub(crate) fn is_vanishing(&self, counts: &[u64]) -> bool {
        debug_assert_eq!(counts.len(), self.rows.len());
        let mut acc = vec![0i128; self.degree];
        for (j, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as i128;
            for (a, r) in acc.iter_mut().zip(&self.rows[j]) {
                *a += c * r;
            }
        }
        acc.iter().all(|&a| a == 0)
    }
}

static TESTER_CACHE: Lazy<Mutex<HashMap<u32, Arc<VanishingTester>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub(crate) fn vanishing_tester(q: u32) -> Arc<VanishingTester> {
    assert!(q >= 2, "modulus must be at least 2");
    let mut cache = TESTER_CACHE.lock().unwrap();
    Arc::clone(
        cache
            .entry(q)
            .or_insert_with(|| Arc::new(VanishingTester::new(q))),
    )
}

/// True iff the multiset sums to zero exactly: the polynomial
/// `sum_j counts[j] x^j` has remainder zero after division by `Phi_q`
/// over the integers.
pub fn is_vanishing_sum(v: &MultiplicityVector) -> bool {
    vanishing_tester(v.q()).is_vanishing(v.counts())
}

/// One term of a cycle decomposition: `multiplicity` copies of the p-cycle
/// `w^offset * (1 + w^(q/p) + ... + w^((p-1)q/p))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTerm {
    pub prime: u32,
    pub offset: u32,
    pub multiplicity: u64,
}

/// A decomposition of a vanishing sum into rotated prime cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub q: u32,
    pub terms: Vec<CycleTerm>,
}

impl CycleDecomposition {
    /// Expands the decomposition back into a multiplicity vector.
    pub fn expand(&self) -> MultiplicityVector {
        let mut v = MultiplicityVector::zero(self.q);
        for t in &self.terms {
            let step = (self.q / t.prime) as usize;
            for k in 0..t.prime as usize {
                v.counts[t.offset as usize + k * step] += t.multiplicity;
            }
        }
        v
    }
}

/// Searches for a decomposition of `v` as a nonnegative combination of
/// rotated p-cycles over the primes `p | q`.
///
/// The search is exhaustive with backtracking: at each step the lowest
/// exponent with a nonzero count must be covered by the unique p-cycle
/// through it, for some prime `p`, and primes are tried in increasing
/// order, which makes the first decomposition found deterministic. Returns
/// `None` when no decomposition exists (in particular on non-vanishing
/// input).
pub fn cycle_decomposition(v: &MultiplicityVector) -> Option<CycleDecomposition> {
    let q = v.q();
    let primes = prime_divisors(q);
    let mut counts = v.counts().to_vec();
    let mut picked: Vec<(u32, u32)> = Vec::new();

    fn search(q: u32, primes: &[u32], counts: &mut [u64], picked: &mut Vec<(u32, u32)>) -> bool {
        let pos = match counts.iter().position(|&c| c > 0) {
            None => return true,
            Some(p) => p,
        };
        for &p in primes {
            let step = (q / p) as usize;
            let offset = pos % step;
            let cycle: Vec<usize> = (0..p as usize).map(|k| offset + k * step).collect();
            // the unique p-cycle through `pos` starts at `offset <= pos`;
            // if offset < pos that slot is already exhausted and the
            // any-zero check rejects it
            if cycle.iter().any(|&i| counts[i] == 0) {
                continue;
            }
            for &i in &cycle {
                counts[i] -= 1;
            }
            picked.push((p, offset as u32));
            if search(q, primes, counts, picked) {
                return true;
            }
            picked.pop();
            for &i in &cycle {
                counts[i] += 1;
            }
        }
        false
    }

    if !search(q, &primes, &mut counts, &mut picked) {
        return None;
    }
    let mut terms: Vec<CycleTerm> = Vec::new();
    picked.sort_unstable();
    for (prime, offset) in picked {
        match terms.last_mut() {
            Some(t) if t.prime == prime && t.offset == offset => t.multiplicity += 1,
            _ => terms.push(CycleTerm {
                prime,
                offset,
                multiplicity: 1,
            }),
        }
    }
    Some(CycleDecomposition { q, terms })
}

/// True iff a vanishing sum of `n` q-th roots can exist at all, i.e. `n`
/// is a nonnegative integer combination of the prime divisors of `q`.
pub fn admissible_length(q: u32, n: u64) -> bool {
    assert!(q >= 2, "modulus must be at least 2");
    let primes = prime_divisors(q);
    if primes.len() == 1 {
        return n.is_multiple_of(primes[0] as u64);
    }
    // with two or more primes the obstruction disappears from p1*p2 on
    let bound = primes[0] as u64 * primes[1] as u64;
    if n >= bound {
        return true;
    }
    let n = n as usize;
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for &p in &primes {
        let p = p as usize;
        for i in p..=n {
            if reachable[i - p] {
                reachable[i] = true;
            }
        }
    }
    reachable[n]
}
