//! The partial-Butson-matrix data model and the brute-force census oracle.
//!
//! Matrices are stored as exponents in `Z_q`: the entry `e` stands for
//! `w^e` with `w = e^(2*pi*i/q)`. Two rows are orthogonal exactly when the
//! multiset of entrywise exponent differences is a vanishing sum, which is
//! decided exactly by the [`crate::cyclotomic`] module.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::ln_big_ratio;
use crate::cyclotomic::{vanishing_tester, VanishingTester};
use crate::error::Error;

/// An `M x N` matrix of exponents in `Z_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct ExponentMatrix {
    q: u32,
    rows: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    q: u32,
    m: usize,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl TryFrom<RawMatrix> for ExponentMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self, Error> {
        let m = ExponentMatrix::new(raw.q, raw.rows)?;
        if m.row_count() != raw.m || m.col_count() != raw.n {
            return Err(Error::DimensionMismatch(format!(
                "declared {}x{} but rows are {}x{}",
                raw.m,
                raw.n,
                m.row_count(),
                m.col_count()
            )));
        }
        Ok(m)
    }
}

impl From<ExponentMatrix> for RawMatrix {
    fn from(m: ExponentMatrix) -> RawMatrix {
        RawMatrix {
            q: m.q,
            m: m.row_count(),
            n: m.col_count(),
            rows: m.rows,
        }
    }
}

impl ExponentMatrix {
    /// Validates entries against the modulus; rows must be nonempty and
    /// rectangular.
    pub fn new(q: u32, rows: Vec<Vec<u32>>) -> Result<Self, Error> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("modulus {q} too small")));
        }
        let n = match rows.first() {
            None => return Err(Error::DimensionMismatch("no rows".into())),
            Some(r) if r.is_empty() => return Err(Error::DimensionMismatch("no columns".into())),
            Some(r) => r.len(),
        };
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            if let Some(&e) = r.iter().find(|&&e| e >= q) {
                return Err(Error::InvalidArgument(format!(
                    "entry {e} out of range for modulus {q}"
                )));
            }
        }
        Ok(ExponentMatrix { q, rows })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    /// True iff all row pairs are orthogonal: for every `i < k` the
    /// multiset of differences `E[i][j] - E[k][j] mod q` is a vanishing
    /// sum.
    pub fn is_partial_butson(&self) -> bool {
        let tester = vanishing_tester(self.q);
        let mut counts = vec![0u64; self.q as usize];
        for i in 0..self.row_count() {
            for k in i + 1..self.row_count() {
                counts.iter_mut().for_each(|c| *c = 0);
                for (&a, &b) in self.rows[i].iter().zip(&self.rows[k]) {
                    counts[((a + self.q - b) % self.q) as usize] += 1;
                }
                if !tester.is_vanishing(&counts) {
                    return false;
                }
            }
        }
        true
    }

    /// Subtracts the first row from every row columnwise, making the
    /// first row all zeros. Orthogonality is preserved.
    pub fn dephase(&self) -> ExponentMatrix {
        let first = self.rows[0].clone();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&first)
                    .map(|(&e, &f)| (e + self.q - f) % self.q)
                    .collect()
            })
            .collect();
        ExponentMatrix { q: self.q, rows }
    }

    /// Dephases and stably sorts columns by their exponent tuple read top
    /// to bottom, so low powers move left with the top rows taking
    /// priority. Idempotent, and a canonical representative of the
    /// column-permutation orbit of the dephased matrix.
    pub fn standard_form(&self) -> ExponentMatrix {
        let dephased = self.dephase();
        let (m, n) = (dephased.row_count(), dephased.col_count());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| (0..m).map(|i| dephased.rows[i][j]).collect::<Vec<u32>>());
        let rows = (0..m)
            .map(|i| order.iter().map(|&j| dephased.rows[i][j]).collect())
            .collect();
        ExponentMatrix { q: self.q, rows }
    }

    /// Compact text form: one row per line, entries comma-separated.
    pub fn to_text(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Parses the compact text form; the modulus is supplied separately.
    pub fn from_text(q: u32, text: &str) -> Result<Self, Error> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<u32>, Error>>()
            })
            .collect::<Result<Vec<_>, Error>>()?;
        ExponentMatrix::new(q, rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// An exact probability kept as an integer fraction; reduction happens
/// only on demand, so displays keep the natural denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactProbability {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl ExactProbability {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        ExactProbability {
            numerator,
            denominator,
        }
    }

    /// Equality as rationals (cross-multiplication; no reduction needed).
    pub fn eq_rational(&self, other: &ExactProbability) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }

    /// Lowest-terms form.
    pub fn reduced(&self) -> (BigUint, BigUint) {
        if self.numerator.is_zero() {
            return (BigUint::zero(), BigUint::one());
        }
        let g = self.numerator.gcd(&self.denominator);
        (&self.numerator / &g, &self.denominator / &g)
    }

    /// Float rendering: exact division while both sides fit the f64
    /// mantissa, logs beyond that (safe when both sides overflow `f64`).
    pub fn to_f64(&self) -> f64 {
        if self.numerator.is_zero() {
            return 0.0;
        }
        if self.numerator.bits() <= 53 && self.denominator.bits() <= 53 {
            let n: u64 = (&self.numerator).try_into().unwrap();
            let d: u64 = (&self.denominator).try_into().unwrap();
            return n as f64 / d as f64;
        }
        ln_big_ratio(&self.numerator, &self.denominator).exp()
    }

    /// `"num/den"` in lowest terms, except that a zero numerator keeps
    /// the natural denominator.
    pub fn display_reduced(&self) -> String {
        if self.numerator.is_zero() {
            return format!("0/{}", self.denominator);
        }
        let (n, d) = self.reduced();
        format!("{n}/{d}")
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// How a census count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Brute,
    ClosedPrimePower,
    ClosedTwoPrime,
    ClosedTristochastic,
    ClosedQ2,
}

impl CountMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountMethod::Brute => "brute",
            CountMethod::ClosedPrimePower => "closed_prime_power",
            CountMethod::ClosedTwoPrime => "closed_two_prime",
            CountMethod::ClosedTristochastic => "closed_tristochastic",
            CountMethod::ClosedQ2 => "closed_q2",
        }
    }
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One census result: counts of `M x N` partial Butson matrices over the
/// q-th roots, dephased and total, with the exact probability that a
/// uniformly random exponent matrix is partial Butson.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    q: u32,
    m: u32,
    n: u64,
    dephased: BigUint,
    total: BigUint,
    probability: ExactProbability,
    method: CountMethod,
}

impl CensusRecord {
    /// Builds the record from the dephased count: `total = q^N * dephased`
    /// and `probability = total / q^(MN) = dephased / q^((M-1)N)`.
    pub fn from_dephased(q: u32, m: u32, n: u64, dephased: BigUint, method: CountMethod) -> Self {
        assert!(m >= 1, "need at least one row");
        let qb = BigUint::from(q);
        let total = &dephased * qb.pow(u32::try_from(n).expect("column count too large"));
        let den = qb.pow(u32::try_from(n * (m as u64 - 1)).expect("matrix size too large"));
        let probability = ExactProbability::new(dephased.clone(), den);
        CensusRecord {
            q,
            m,
            n,
            dephased,
            total,
            probability,
            method,
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dephased(&self) -> &BigUint {
        &self.dephased
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn probability(&self) -> &ExactProbability {
        &self.probability
    }

    pub fn method(&self) -> CountMethod {
        self.method
    }

    /// JSON with counts as decimal strings (they exceed native JSON
    /// numbers) and the probability both exact and as a float.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "m": self.m,
            "n": self.n,
            "dephased": self.dephased.to_string(),
            "total": self.total.to_string(),
            "probability": self.probability.to_string(),
            "probability_float": self.probability.to_f64(),
            "method": self.method.as_str(),
        })
    }
}

/// Exhaustive dephased census: fixes the first row to zeros and counts the
/// completions of the remaining `M - 1` rows with all row pairs
/// orthogonal.
///
/// The precondition is `q^((M-1)N) <= budget` (candidate-row evaluations);
/// past it the call fails with the required count so the caller can switch
/// to a closed form. The outer row enumeration is split into fixed chunks
/// processed in parallel and merged by exact addition, so the result is
/// identical for any worker count.
pub fn brute_force_census(q: u32, m: u32, n: u64, budget: u64) -> Result<CensusRecord, Error> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("modulus {q} too small")));
    }
    if m < 1 || n < 1 {
        return Err(Error::InvalidArgument("need m >= 1 and n >= 1".into()));
    }
    if m == 1 {
        // a single dephased row; no orthogonality constraints
        return Ok(CensusRecord::from_dephased(
            q,
            1,
            n,
            BigUint::one(),
            CountMethod::Brute,
        ));
    }
    let required = BigUint::from(q).pow(
        u32::try_from(n * (m as u64 - 1))
            .map_err(|_| Error::InvalidArgument("n too large".into()))?,
    );
    if required > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            required,
            budget,
            unit: "candidate rows",
        });
    }
    let tester = vanishing_tester(q);
    let row_space = required
        .nth_root(m - 1)
        .to_u64()
        .expect("row space fits u64 when within budget");

    // fixed chunking keeps the count independent of the worker pool
    let chunks = row_space.clamp(1, 256);
    let dephased: BigUint = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = row_space / chunks * c + (row_space % chunks).min(c);
            let hi = row_space / chunks * (c + 1) + (row_space % chunks).min(c + 1);
            let zero_row = vec![0u32; n as usize];
            count_completions(q, n as usize, &[&zero_row], &tester, m as usize, lo, hi)
        })
        .reduce(BigUint::zero, |a, b| a + b);

    Ok(CensusRecord::from_dephased(
        q,
        m,
        n,
        dephased,
        CountMethod::Brute,
    ))
}

/// Counts partial-Butson completions below the fixed `prefix` rows,
/// enumerating the next row over the index range `[lo, hi)` in base-q
/// odometer order.
///
/// The difference multiplicity vector against every prefix row is
/// maintained incrementally as the odometer steps, so a candidate row
/// costs amortized O(prefix) updates plus the vanishing tests.
fn count_completions(
    q: u32,
    n: usize,
    prefix: &[&Vec<u32>],
    tester: &VanishingTester,
    m: usize,
    lo: u64,
    hi: u64,
) -> BigUint {
    let level = prefix.len();
    let qs = q as usize;
    // decode the starting index into row digits (most significant first)
    let mut row = vec![0u32; n];
    let mut idx = lo;
    for j in (0..n).rev() {
        row[j] = (idx % q as u64) as u32;
        idx /= q as u64;
    }
    // difference counts against each prefix row
    let mut diffs: Vec<Vec<u64>> = prefix
        .iter()
        .map(|p| {
            let mut counts = vec![0u64; qs];
            for (&a, &b) in row.iter().zip(p.iter()) {
                counts[((a + q - b) % q) as usize] += 1;
            }
            counts
        })
        .collect();

    let mut acc = BigUint::zero();
    let mut remaining = hi - lo;
    loop {
        if remaining == 0 {
            break;
        }
        if diffs.iter().all(|d| tester.is_vanishing(d)) {
            if level + 1 == m {
                acc += 1u32;
            } else {
                let mut next_prefix: Vec<&Vec<u32>> = prefix.to_vec();
                let row_ref = row.clone();
                next_prefix.push(&row_ref);
                let sub_space = (q as u64).pow(n as u32);
                acc += count_completions(q, n, &next_prefix, tester, m, 0, sub_space);
            }
        }
        remaining -= 1;
        if remaining == 0 {
            break;
        }
        // odometer step: increment the last digit with carries, updating
        // the difference counts for each changed digit
        let mut j = n - 1;
        loop {
            let old = row[j];
            let new = if old as usize + 1 == qs { 0 } else { old + 1 };
            row[j] = new;
            for (d, p) in diffs.iter_mut().zip(prefix.iter()) {
                d[((old + q - p[j]) % q) as usize] -= 1;
                d[((new + q - p[j]) % q) as usize] += 1;
            }
            if new != 0 {
                break;
            }
            debug_assert!(j > 0, "odometer overflow");
            j -= 1;
        }
    }
    acc
}
