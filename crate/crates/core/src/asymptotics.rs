//! Large-N evaluators for the probability and power-sum asymptotics.
//!
//! Every formula is evaluated in natural-log space and exponentiated once
//! at the end: the probabilities underflow and the power sums overflow
//! `f64` for quite modest inputs, so each estimate also carries its log
//! value, and ratio tests against exact counts are done on logs.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Error;
use crate::primes::as_prime_power;

use std::f64::consts::PI;

/// Natural log of a big integer, accurate to f64 rounding: the top 63 bits
/// supply the mantissa and the remaining bit length scales by `ln 2`.
/// Returns `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 63 {
        let v: u64 = x.try_into().expect("fits in u64");
        return (v as f64).ln();
    }
    let shift = bits - 63;
    let top: u64 = (x >> shift).try_into().expect("63 bits fit in u64");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(num / den)` for big integers, without forming the quotient.
pub fn ln_big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    ln_big(num) - ln_big(den)
}

/// `num / den` as a float via logs, safe when either side overflows
/// `f64`; a zero numerator renders as 0.
pub fn big_ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    ln_big_ratio(num, den).exp()
}

// Lanczos approximation with g = 7 and 9 coefficients; absolute error in
// ln-gamma is far below 1e-10 over the domain used here.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
///
/// Uses the Lanczos series directly for `x >= 0.5` and the reflection
/// formula below it. Errors on non-positive input.
pub fn log_gamma(x: f64) -> Result<f64, Error> {
    if x <= 0.0 || x.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "log_gamma needs x > 0, got {x}"
        )));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // ln Gamma(x) = ln(pi / sin(pi x)) - ln Gamma(1 - x)
        return (PI / (PI * x).sin()).ln() - log_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Which asymptotic formula produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// Two-row probability at a prime-power modulus.
    TwoRowPrimePower,
    /// Three-row probability at modulus 2 or 3.
    ThreeRowPrime,
    /// Any-row sign-matrix probability (de Launey-Levin).
    SignMatrixAnyRows,
    /// Sum of p-th powers of multinomial coefficients.
    MultinomialPowerSum,
    /// Leading walk term: two rows returning to the flat pattern.
    OriginTermTwoRow,
    /// Leading walk term: three rows returning to the flat pattern.
    OriginTermThreeRow,
}

impl Formula {
    pub fn as_str(&self) -> &'static str {
        match self {
            Formula::TwoRowPrimePower => "prime-power",
            Formula::ThreeRowPrime => "three-row",
            Formula::SignMatrixAnyRows => "dll",
            Formula::MultinomialPowerSum => "power-sum",
            Formula::OriginTermTwoRow => "origin-2row",
            Formula::OriginTermThreeRow => "origin-3row",
        }
    }
}

/// The inputs an estimate was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateInputs {
    /// A matrix-census grid point.
    Census { q: u32, m: u32, n: u64 },
    /// A power-sum instance.
    PowerSum { s: u32, p: u32, n: u64 },
}

/// A floating-point asymptotic value plus its natural log; `value` is
/// `exp(ln_value)` and overflows to `+inf` only for count-type estimates
/// too large for `f64` (probabilities are always finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub value: f64,
    pub ln_value: f64,
    pub formula: Formula,
    pub inputs: EstimateInputs,
}

impl AsymptoticEstimate {
    fn new(ln_value: f64, formula: Formula, inputs: EstimateInputs) -> Self {
        AsymptoticEstimate {
            value: ln_value.exp(),
            ln_value,
            formula,
            inputs,
        }
    }

    fn zero(formula: Formula, inputs: EstimateInputs) -> Self {
        AsymptoticEstimate {
            value: 0.0,
            ln_value: f64::NEG_INFINITY,
            formula,
            inputs,
        }
    }
}

/// Estimate for `sum over a_1+...+a_s = n of multinomial(n; a)^p`:
/// `s^(pn) * sqrt(s^(s(p-1)) / (p^(s-1) (2 pi n)^((s-1)(p-1))))`.
pub fn power_sum_estimate(s: u32, p: u32, n: u64) -> Result<AsymptoticEstimate, Error> {
    if s < 2 || p < 2 || n < 1 {
        return Err(Error::InvalidArgument(
            "power-sum estimate needs s >= 2, p >= 2, n >= 1".into(),
        ));
    }
    let (sf, pf, nf) = (s as f64, p as f64, n as f64);
    let ln = pf * nf * sf.ln()
        + 0.5
            * (sf * (pf - 1.0) * sf.ln()
                - (sf - 1.0) * pf.ln()
                - (sf - 1.0) * (pf - 1.0) * (2.0 * PI * nf).ln());
    Ok(AsymptoticEstimate::new(
        ln,
        Formula::MultinomialPowerSum,
        EstimateInputs::PowerSum { s, p, n },
    ))
}

/// Two-row probability estimate at a prime power `q = p^k`:
/// `sqrt(p^(2 - q/p) q^(q - q/p) / (2 pi N)^(q - q/p))`, and 0 off the
/// progression `p | N`.
pub fn p2_asymptotic(q: u32, n: u64) -> Result<AsymptoticEstimate, Error> {
    let inputs = EstimateInputs::Census { q, m: 2, n };
    let (p, _) = as_prime_power(q).ok_or_else(|| Error::UnsupportedFamily {
        what: format!("q={q}"),
        hint: "two-row asymptotic needs a prime power".into(),
    })?;
    if !n.is_multiple_of(p as u64) {
        return Ok(AsymptoticEstimate::zero(Formula::TwoRowPrimePower, inputs));
    }
    let (qf, pf, nf) = (q as f64, p as f64, n as f64);
    let e = qf - qf / pf;
    let ln = 0.5 * ((2.0 - qf / pf) * pf.ln() + e * qf.ln() - e * (2.0 * PI * nf).ln());
    Ok(AsymptoticEstimate::new(
        ln,
        Formula::TwoRowPrimePower,
        inputs,
    ))
}

/// Three-row probability estimate at p = 2 or p = 3:
/// `16 / (2 pi N)^(3/2)` on `4 | N` and `243 sqrt(3) / (2 pi N)^3` on
/// `3 | N`, and 0 off those progressions. Larger primes have no published
/// formula and are rejected.
pub fn p3_asymptotic(p: u32, n: u64) -> Result<AsymptoticEstimate, Error> {
    let inputs = EstimateInputs::Census { q: p, m: 3, n };
    match p {
        2 => {
            if !n.is_multiple_of(4) {
                return Ok(AsymptoticEstimate::zero(Formula::ThreeRowPrime, inputs));
            }
            let ln = 16f64.ln() - 1.5 * (2.0 * PI * n as f64).ln();
            Ok(AsymptoticEstimate::new(ln, Formula::ThreeRowPrime, inputs))
        }
        3 => {
            if !n.is_multiple_of(3) {
                return Ok(AsymptoticEstimate::zero(Formula::ThreeRowPrime, inputs));
            }
            let ln = (243.0 * 3f64.sqrt()).ln() - 3.0 * (2.0 * PI * n as f64).ln();
            Ok(AsymptoticEstimate::new(ln, Formula::ThreeRowPrime, inputs))
        }
        _ => Err(Error::UnsupportedFamily {
            what: format!("q={p}, m=3"),
            hint: "three-row asymptotics are known for p = 2 and p = 3 only".into(),
        }),
    }
}

/// Any-row sign-matrix probability estimate (de Launey-Levin form):
/// `2^((M-1)^2) / sqrt((2 pi N)^(M choose 2))`.
pub fn pm_asymptotic_dll(m: u32, n: u64) -> Result<AsymptoticEstimate, Error> {
    if m < 2 || n < 1 {
        return Err(Error::InvalidArgument(
            "sign-matrix estimate needs m >= 2, n >= 1".into(),
        ));
    }
    let mf = m as f64;
    let pairs = mf * (mf - 1.0) / 2.0;
    let ln = (mf - 1.0) * (mf - 1.0) * 2f64.ln() - 0.5 * pairs * (2.0 * PI * n as f64).ln();
    Ok(AsymptoticEstimate::new(
        ln,
        Formula::SignMatrixAnyRows,
        EstimateInputs::Census { q: 2, m, n },
    ))
}

/// Which leading walk term to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginKind {
    /// Two rows at `q = 2p`: the flat (t = 0) term,
    /// `2 sqrt((p / 2 pi N)^p)`; needs `2 | N`.
    TwoRowOrigin,
    /// Three rows at `q = 3p`: the flat (s = t = 0) term,
    /// `3 sqrt(3^p) (p / 2 pi N)^p`; needs `3 | N`.
    ThreeRowOrigin,
}

/// Leading origin-return term estimates for two-prime moduli; 0 off the
/// divisibility progression.
pub fn diagonal_return_asymptotics(
    p: u32,
    n: u64,
    kind: OriginKind,
) -> Result<AsymptoticEstimate, Error> {
    if !crate::primes::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let (pf, nf) = (p as f64, n as f64);
    match kind {
        OriginKind::TwoRowOrigin => {
            let inputs = EstimateInputs::Census { q: 2 * p, m: 2, n };
            if !n.is_multiple_of(2) {
                return Ok(AsymptoticEstimate::zero(Formula::OriginTermTwoRow, inputs));
            }
            let ln = 2f64.ln() + 0.5 * pf * (pf / (2.0 * PI * nf)).ln();
            Ok(AsymptoticEstimate::new(
                ln,
                Formula::OriginTermTwoRow,
                inputs,
            ))
        }
        OriginKind::ThreeRowOrigin => {
            let inputs = EstimateInputs::Census { q: 3 * p, m: 2, n };
            if !n.is_multiple_of(3) {
                return Ok(AsymptoticEstimate::zero(
                    Formula::OriginTermThreeRow,
                    inputs,
                ));
            }
            let ln = 3f64.ln() + 0.5 * pf * 3f64.ln() + pf * (pf / (2.0 * PI * nf)).ln();
            Ok(AsymptoticEstimate::new(
                ln,
                Formula::OriginTermThreeRow,
                inputs,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{binomial, sum_multinomial_powers, FactorialTable};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn close_rel(a: f64, b: f64, tol: f64) {
        assert!((a / b - 1.0).abs() <= tol, "{a} vs {b} (rel tol {tol})");
    }

    #[test]
    fn log_gamma_spot_values() {
        close(log_gamma(1.0).unwrap(), 0.0, 1e-12);
        close(log_gamma(5.0).unwrap(), 24f64.ln(), 1e-10);
        close(log_gamma(0.5).unwrap(), PI.sqrt().ln(), 1e-10);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_matches_exact_factorials() {
        let table = FactorialTable::new(170);
        for k in 1..=170u64 {
            let exact = ln_big(table.factorial(k));
            close(log_gamma(k as f64 + 1.0).unwrap(), exact, 1e-10);
        }
    }

    #[test]
    fn log_gamma_half_integers() {
        // Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
        let table = FactorialTable::new(80);
        for n in 0..=40u64 {
            let exact = ln_big(table.factorial(2 * n)) + 0.5 * PI.ln()
                - (n as f64) * 4f64.ln()
                - ln_big(table.factorial(n));
            close(log_gamma(n as f64 + 0.5).unwrap(), exact, 1e-9);
        }
    }

    #[test]
    fn ln_big_accuracy() {
        let mut x = BigUint::from(1u32);
        for k in 0..300u32 {
            close(ln_big(&x), k as f64 * std::f64::consts::LN_10, 1e-9);
            x *= 10u32;
        }
        assert_eq!(ln_big(&BigUint::from(0u32)), f64::NEG_INFINITY);
    }

    #[test]
    fn power_sum_spot_values() {
        let e = power_sum_estimate(2, 2, 50).unwrap();
        close_rel(e.value, 1.011439e29, 1e-5);
        let exact = binomial(100, 50);
        let ratio = (ln_big(&exact) - e.ln_value).exp();
        close(ratio, 0.9975031639551035, 1e-9);
    }

    #[test]
    fn power_sum_s3_p3_within_ten_percent() {
        let n = 20u64;
        let exact = sum_multinomial_powers(n, 3, 3);
        let e = power_sum_estimate(3, 3, n).unwrap();
        let ratio = (ln_big(&exact) - e.ln_value).exp();
        assert!((ratio - 1.0).abs() < 0.10, "ratio {ratio}");
    }

    #[test]
    fn power_sum_rejects_degenerate_inputs() {
        assert!(power_sum_estimate(1, 2, 5).is_err());
        assert!(power_sum_estimate(2, 1, 5).is_err());
        assert!(power_sum_estimate(2, 2, 0).is_err());
    }

    #[test]
    fn p2_asymptotic_values() {
        // q = 2 reduces to 2 / sqrt(2 pi N)
        for n in [2u64, 10, 500] {
            let e = p2_asymptotic(2, n).unwrap();
            close_rel(e.value, 2.0 / (2.0 * PI * n as f64).sqrt(), 1e-12);
        }
        let e = p2_asymptotic(4, 100).unwrap();
        close_rel(e.value, 6.366197723675813e-3, 1e-12);
        // q = 3: sqrt(27 / (2 pi N)^2)
        let e = p2_asymptotic(3, 99).unwrap();
        close_rel(e.value, (27.0f64).sqrt() / (2.0 * PI * 99.0), 1e-12);
        assert_eq!(p2_asymptotic(3, 100).unwrap().value, 0.0);
        assert!(p2_asymptotic(6, 10).is_err());
    }

    #[test]
    fn p2_matches_power_of_two_form() {
        // at q = 2^k the formula collapses to 2 sqrt((q/2 / 2 pi N)^(q/2))
        for (q, n) in [
            (2u32, 100u64),
            (4, 64),
            (8, 128),
            (16, 1024),
            (32, 2048),
            (64, 4096),
        ] {
            let direct = p2_asymptotic(q, n).unwrap().ln_value;
            let qf = q as f64;
            let alt = 2f64.ln() + 0.5 * (qf / 2.0) * ((qf / 2.0) / (2.0 * PI * n as f64)).ln();
            assert!(
                ((direct - alt) / alt).abs() < 1e-12,
                "q={q} n={n}: {direct} vs {alt}"
            );
        }
    }

    #[test]
    fn p3_asymptotic_values() {
        let e = p3_asymptotic(2, 100).unwrap();
        close_rel(e.value, 1.0158981749478556e-3, 1e-12);
        assert_eq!(p3_asymptotic(2, 6).unwrap().value, 0.0);
        let e = p3_asymptotic(3, 999).unwrap();
        close_rel(e.value, 1.7018874322447183e-9, 1e-12);
        assert_eq!(p3_asymptotic(3, 1000).unwrap().value, 0.0);
        assert!(p3_asymptotic(5, 10).is_err());
    }

    #[test]
    fn dll_values() {
        for n in [4u64, 100] {
            let nf = n as f64;
            close_rel(
                pm_asymptotic_dll(2, n).unwrap().value,
                2.0 / (2.0 * PI * nf).sqrt(),
                1e-12,
            );
            close_rel(
                pm_asymptotic_dll(3, n).unwrap().value,
                16.0 / (2.0 * PI * nf).powf(1.5),
                1e-12,
            );
            close_rel(
                pm_asymptotic_dll(4, n).unwrap().value,
                512.0 / (2.0 * PI * nf).powi(3),
                1e-12,
            );
        }
        close_rel(
            pm_asymptotic_dll(4, 100).unwrap().value,
            2.0640982037247673e-6,
            1e-12,
        );
    }

    #[test]
    fn origin_term_values() {
        let e = diagonal_return_asymptotics(3, 100, OriginKind::TwoRowOrigin).unwrap();
        close_rel(e.value, 6.598452203723181e-4, 1e-12);
        let e = diagonal_return_asymptotics(2, 90, OriginKind::ThreeRowOrigin).unwrap();
        close_rel(e.value, 1.1257909293593085e-4, 1e-12);
        assert_eq!(
            diagonal_return_asymptotics(3, 101, OriginKind::TwoRowOrigin)
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(
            diagonal_return_asymptotics(2, 91, OriginKind::ThreeRowOrigin)
                .unwrap()
                .value,
            0.0
        );
        assert!(diagonal_return_asymptotics(4, 10, OriginKind::TwoRowOrigin).is_err());
    }

    #[test]
    fn estimators_decrease_along_progression() {
        let sample = |f: &dyn Fn(u64) -> f64, ns: &[u64]| {
            for w in ns.windows(2) {
                assert!(f(w[0]) > f(w[1]), "not decreasing at {} -> {}", w[0], w[1]);
            }
        };
        sample(
            &|n| p2_asymptotic(4, n).unwrap().value,
            &[4, 8, 20, 100, 1000],
        );
        sample(
            &|n| p3_asymptotic(3, n).unwrap().value,
            &[3, 9, 30, 300, 999],
        );
        sample(
            &|n| pm_asymptotic_dll(5, n).unwrap().value,
            &[4, 8, 64, 256],
        );
        sample(
            &|n| {
                diagonal_return_asymptotics(5, n, OriginKind::TwoRowOrigin)
                    .unwrap()
                    .value
            },
            &[2, 10, 50, 1000],
        );
    }
}
