//! Command implementations behind the `butson` binary.
//!
//! Everything writes to a caller-supplied sink so output is testable, and
//! identical configurations (including seed and worker count) produce
//! byte-identical output. Randomized commands default to seed 42, never
//! the clock.

use std::fmt::Display;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use butson_core::asymptotics::{self, big_ratio_f64, ln_big_ratio, AsymptoticEstimate, OriginKind};
use butson_core::census;
use butson_core::cyclotomic::{self, MultiplicityVector};
use butson_core::matrices::{brute_force_census, CensusRecord, CountMethod};
use butson_core::walks;
use butson_core::Error as CoreError;

pub mod cli;

pub use cli::Cli;

/// Default seed for randomized subcommands, used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 42;

/// Default worker count; a fixed constant so default output does not
/// depend on the machine. Exact results are identical for every worker
/// count, Monte Carlo results depend on it (reproducibly).
pub const DEFAULT_WORKERS: usize = 4;

/// Largest modulus accepted by the tool in default builds.
pub const MAX_MODULUS: u32 = 64;

/// Errors mapped onto the documented exit codes: 2 invalid configuration,
/// 3 budget exceeded, 4 unsupported formula or family.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{0}")]
    BudgetExceeded(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("verification mismatch: {0}")]
    VerifyMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidConfig(_) => 2,
            CliError::BudgetExceeded(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::VerifyMismatch(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { .. } => CliError::BudgetExceeded(e.to_string()),
            CoreError::UnsupportedFamily { .. } => CliError::Unsupported(e.to_string()),
            _ => CliError::InvalidConfig(e.to_string()),
        }
    }
}

/// Output rendering selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// An inclusive integer range, written `a` or `a..b` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Range {
    pub lo: u64,
    pub hi: u64,
}

impl Range {
    pub fn single(v: u64) -> Self {
        Range { lo: v, hi: v }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| format!("expected an integer, got {t:?}"))
        };
        match s.split_once("..") {
            None => Ok(Range::single(parse(s)?)),
            Some((a, b)) => {
                let (lo, hi) = (parse(a)?, parse(b)?);
                if lo > hi {
                    return Err(format!("empty range {s:?}"));
                }
                Ok(Range { lo, hi })
            }
        }
    }
}

fn check_modulus(q: u64) -> Result<u32, CliError> {
    if !(2..=MAX_MODULUS as u64).contains(&q) {
        return Err(CliError::InvalidConfig(format!(
            "modulus must be in 2..={MAX_MODULUS}, got {q}"
        )));
    }
    Ok(q as u32)
}

/// Resolves the work budget: explicit flag first, then the
/// `BUTSON_BUDGET` environment variable, then the built-in default.
pub fn resolve_budget(flag: Option<u64>, default: u64) -> Result<u64, CliError> {
    if let Some(b) = flag {
        if b == 0 {
            return Err(CliError::InvalidConfig("budget must be positive".into()));
        }
        return Ok(b);
    }
    match std::env::var("BUTSON_BUDGET") {
        Ok(v) => v.parse::<u64>().ok().filter(|&b| b > 0).ok_or_else(|| {
            CliError::InvalidConfig(format!(
                "BUTSON_BUDGET must be a positive integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(default),
    }
}

/// Installs a global worker pool of the requested size. Exact outputs do
/// not depend on it; Monte Carlo shards do (reproducibly per count).
pub fn configure_workers(workers: usize) -> Result<(), CliError> {
    if workers == 0 {
        return Err(CliError::InvalidConfig("workers must be positive".into()));
    }
    // ignore the error when a pool already exists (tests call this twice)
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();
    Ok(())
}

// ---------------------------------------------------------------------
// census
// ---------------------------------------------------------------------

/// Counting strategy selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Brute,
    Closed,
}

/// The closed form applicable to a `(q, m)` family, if any.
fn closed_family(q: u32, m: u32) -> Option<CountMethod> {
    if q == 2 && (2..=4).contains(&m) {
        Some(CountMethod::ClosedQ2)
    } else if m == 2 && butson_core::primes::as_prime_power(q).is_some() {
        Some(CountMethod::ClosedPrimePower)
    } else if m == 2 && census::is_two_prime_family(q) {
        Some(CountMethod::ClosedTwoPrime)
    } else if m == 3 && butson_core::primes::is_prime(q) {
        Some(CountMethod::ClosedTristochastic)
    } else {
        None
    }
}

fn run_closed(q: u32, m: u32, n: u64, family: CountMethod) -> Result<CensusRecord, CliError> {
    Ok(match family {
        CountMethod::ClosedQ2 => census::count_q2(m, n)?,
        CountMethod::ClosedPrimePower => census::count_prime_power_m2(q, n)?,
        CountMethod::ClosedTwoPrime => census::count_two_prime_m2(q, n)?,
        CountMethod::ClosedTristochastic => census::count_m3_prime(q, n)?,
        CountMethod::Brute => unreachable!("brute is not a closed family"),
    })
}

fn nearest_family_hint(q: u32, m: u32) -> String {
    format!(
        "no closed form covers q={q}, m={m}; supported families are \
         q=2 with m in 2..=4, m=2 with q a prime power, m=2 with q = 2p \
         (p odd prime) or q = 3p (p prime, p != 3), and m=3 with q prime"
    )
}

pub struct CensusConfig {
    pub q: Range,
    pub m: Range,
    pub n: Range,
    pub method: MethodChoice,
    pub budget: u64,
    pub verify: bool,
    pub format: Format,
}

pub fn run_census<W: Write>(out: &mut W, cfg: &CensusConfig) -> Result<(), CliError> {
    if cfg.m.lo == 0 {
        return Err(CliError::InvalidConfig("m must be at least 1".into()));
    }
    if cfg.format == Format::Csv {
        let verify_col = if cfg.verify { ",verify" } else { "" };
        writeln!(
            out,
            "q,m,n,dephased,total,probability,probability_float,method{verify_col}"
        )?;
    }
    for q in cfg.q.iter() {
        let q = check_modulus(q)?;
        for m in cfg.m.iter() {
            let m = u32::try_from(m).map_err(|_| CliError::InvalidConfig("m too large".into()))?;
            for n in cfg.n.iter() {
                let record = compute_census(q, m, n, cfg.method, cfg.budget)?;
                let verify = if cfg.verify {
                    Some(verify_census(&record, cfg.budget)?)
                } else {
                    None
                };
                write_census_record(out, &record, verify, cfg.format)?;
            }
        }
    }
    Ok(())
}

fn compute_census(
    q: u32,
    m: u32,
    n: u64,
    method: MethodChoice,
    budget: u64,
) -> Result<CensusRecord, CliError> {
    let family = closed_family(q, m);
    match method {
        MethodChoice::Closed => match family {
            Some(f) => run_closed(q, m, n, f),
            None => Err(CliError::Unsupported(nearest_family_hint(q, m))),
        },
        MethodChoice::Brute => Ok(brute_force_census(q, m, n, budget)?),
        MethodChoice::Auto => match family {
            Some(f) => run_closed(q, m, n, f),
            None => Ok(brute_force_census(q, m, n, budget)?),
        },
    }
}

fn verify_census(record: &CensusRecord, budget: u64) -> Result<&'static str, CliError> {
    if record.method() == CountMethod::Brute {
        return Ok("n/a");
    }
    match brute_force_census(record.q(), record.m(), record.n(), budget) {
        Ok(brute) => {
            if brute.dephased() == record.dephased() {
                Ok("ok")
            } else {
                Err(CliError::VerifyMismatch(format!(
                    "q={} m={} n={}: closed form {} vs brute force {}",
                    record.q(),
                    record.m(),
                    record.n(),
                    record.dephased(),
                    brute.dephased()
                )))
            }
        }
        Err(CoreError::BudgetExceeded { .. }) => Ok("skipped_budget"),
        Err(e) => Err(e.into()),
    }
}

fn write_census_record<W: Write>(
    out: &mut W,
    r: &CensusRecord,
    verify: Option<&'static str>,
    format: Format,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut v = r.to_json_value();
            if let Some(verdict) = verify {
                v["verify"] = serde_json::Value::from(verdict);
            }
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            let verify_col = verify.map(|v| format!(",{v}")).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}{}",
                r.q(),
                r.m(),
                r.n(),
                r.dephased(),
                r.total(),
                r.probability(),
                r.probability().to_f64(),
                r.method(),
                verify_col
            )?;
        }
        Format::Text => {
            let verify_col = verify.map(|v| format!(" verify={v}")).unwrap_or_default();
            writeln!(
                out,
                "q={} m={} n={} dephased={} total={} probability={} ({:.6e}) method={}{}",
                r.q(),
                r.m(),
                r.n(),
                r.dephased(),
                r.total(),
                r.probability(),
                r.probability().to_f64(),
                r.method(),
                verify_col
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// asympt
// ---------------------------------------------------------------------

/// Formula identifiers accepted by `asympt --formula`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    /// Two-row probability at a prime-power modulus (needs `--q`).
    PrimePower,
    /// Three-row probability at modulus 2 or 3 (needs `--p`).
    ThreeRow,
    /// Sign-matrix probability for any row count (needs `--m`).
    Dll,
    /// Multinomial power sum (needs `--s` and `--p`).
    PowerSum,
    /// Two-row flat-pattern walk term at `q = 2p` (needs `--p`).
    OriginTwoRow,
    /// Three-row flat-pattern walk term at `q = 3p` (needs `--p`).
    OriginThreeRow,
}

impl std::str::FromStr for FormulaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "prime-power" => Ok(FormulaId::PrimePower),
            "three-row" => Ok(FormulaId::ThreeRow),
            "dll" => Ok(FormulaId::Dll),
            "power-sum" => Ok(FormulaId::PowerSum),
            "origin-2row" => Ok(FormulaId::OriginTwoRow),
            "origin-3row" => Ok(FormulaId::OriginThreeRow),
            other => Err(format!(
                "unknown formula {other:?}; valid: prime-power, three-row, dll, \
                 power-sum, origin-2row, origin-3row"
            )),
        }
    }
}

pub struct AsymptConfig {
    pub formula: FormulaId,
    pub q: Option<Range>,
    pub m: Option<Range>,
    pub n: Range,
    pub s: Option<u32>,
    pub p: Option<u32>,
    pub with_exact: bool,
    pub budget: u64,
    pub format: Format,
}

struct AsymptRow {
    q: Option<u64>,
    m: Option<u64>,
    n: u64,
    formula: &'static str,
    estimate: AsymptoticEstimate,
    /// `(ln numerator, ln denominator)` of the exact side, when requested.
    exact: Option<(BigUint, BigUint)>,
}

impl AsymptRow {
    fn exact_f64(&self) -> Option<f64> {
        self.exact
            .as_ref()
            .map(|(num, den)| big_ratio_f64(num, den))
    }

    /// exact / estimate, in log space.
    fn ratio(&self) -> Option<f64> {
        self.exact.as_ref().map(|(num, den)| {
            if num.is_zero() {
                return 0.0;
            }
            (ln_big_ratio(num, den) - self.estimate.ln_value).exp()
        })
    }
}

fn missing(flag: &str, formula: &str) -> CliError {
    CliError::InvalidConfig(format!("formula {formula} needs {flag}"))
}

pub fn run_asympt<W: Write>(out: &mut W, cfg: &AsymptConfig) -> Result<(), CliError> {
    if cfg.format == Format::Csv {
        writeln!(out, "q,m,n,formula,estimate,exact,ratio")?;
    }
    for n in cfg.n.iter() {
        let rows = asympt_rows_at(cfg, n)?;
        for row in rows {
            write_asympt_row(out, &row, cfg.format)?;
        }
    }
    Ok(())
}

fn asympt_rows_at(cfg: &AsymptConfig, n: u64) -> Result<Vec<AsymptRow>, CliError> {
    let mut rows = Vec::new();
    match cfg.formula {
        FormulaId::PrimePower => {
            let qr = cfg.q.ok_or_else(|| missing("--q", "prime-power"))?;
            for q in qr.iter() {
                let q = check_modulus(q)?;
                let estimate = asymptotics::p2_asymptotic(q, n)?;
                let exact = if cfg.with_exact {
                    let r = census::count_prime_power_m2(q, n)?;
                    Some((
                        r.probability().numerator.clone(),
                        r.probability().denominator.clone(),
                    ))
                } else {
                    None
                };
                rows.push(AsymptRow {
                    q: Some(q as u64),
                    m: Some(2),
                    n,
                    formula: "prime-power",
                    estimate,
                    exact,
                });
            }
        }
        FormulaId::ThreeRow => {
            let p = cfg.p.ok_or_else(|| missing("--p", "three-row"))?;
            let estimate = asymptotics::p3_asymptotic(p, n)?;
            let exact = if cfg.with_exact {
                let r = census::count_m3_prime(p, n)?;
                Some((
                    r.probability().numerator.clone(),
                    r.probability().denominator.clone(),
                ))
            } else {
                None
            };
            rows.push(AsymptRow {
                q: Some(p as u64),
                m: Some(3),
                n,
                formula: "three-row",
                estimate,
                exact,
            });
        }
        FormulaId::Dll => {
            let mr = cfg.m.ok_or_else(|| missing("--m", "dll"))?;
            for m in mr.iter() {
                let m32 =
                    u32::try_from(m).map_err(|_| CliError::InvalidConfig("m too large".into()))?;
                let estimate = asymptotics::pm_asymptotic_dll(m32, n)?;
                let exact = if cfg.with_exact {
                    let r = if (2..=4).contains(&m32) {
                        census::count_q2(m32, n)?
                    } else {
                        brute_force_census(2, m32, n, cfg.budget)?
                    };
                    Some((
                        r.probability().numerator.clone(),
                        r.probability().denominator.clone(),
                    ))
                } else {
                    None
                };
                rows.push(AsymptRow {
                    q: Some(2),
                    m: Some(m),
                    n,
                    formula: "dll",
                    estimate,
                    exact,
                });
            }
        }
        FormulaId::PowerSum => {
            let s = cfg.s.ok_or_else(|| missing("--s", "power-sum"))?;
            let p = cfg.p.ok_or_else(|| missing("--p", "power-sum"))?;
            let estimate = asymptotics::power_sum_estimate(s, p, n)?;
            let exact = if cfg.with_exact {
                Some((
                    census::sum_multinomial_powers(n, s as usize, p),
                    BigUint::from(1u32),
                ))
            } else {
                None
            };
            // s and p ride in the q and m columns for this formula
            rows.push(AsymptRow {
                q: Some(s as u64),
                m: Some(p as u64),
                n,
                formula: "power-sum",
                estimate,
                exact,
            });
        }
        FormulaId::OriginTwoRow => {
            let p = cfg.p.ok_or_else(|| missing("--p", "origin-2row"))?;
            let estimate =
                asymptotics::diagonal_return_asymptotics(p, n, OriginKind::TwoRowOrigin)?;
            let exact = if cfg.with_exact {
                Some((
                    census::two_prime_diagonal_term(p, n, 0),
                    BigUint::from(2 * p).pow(
                        u32::try_from(n)
                            .map_err(|_| CliError::InvalidConfig("n too large".into()))?,
                    ),
                ))
            } else {
                None
            };
            rows.push(AsymptRow {
                q: Some(2 * p as u64),
                m: Some(2),
                n,
                formula: "origin-2row",
                estimate,
                exact,
            });
        }
        FormulaId::OriginThreeRow => {
            let p = cfg.p.ok_or_else(|| missing("--p", "origin-3row"))?;
            let estimate =
                asymptotics::diagonal_return_asymptotics(p, n, OriginKind::ThreeRowOrigin)?;
            let exact = if cfg.with_exact {
                Some((
                    census::three_prime_origin_term(p, n),
                    BigUint::from(3 * p).pow(
                        u32::try_from(n)
                            .map_err(|_| CliError::InvalidConfig("n too large".into()))?,
                    ),
                ))
            } else {
                None
            };
            rows.push(AsymptRow {
                q: Some(3 * p as u64),
                m: Some(2),
                n,
                formula: "origin-3row",
                estimate,
                exact,
            });
        }
    }
    Ok(rows)
}

fn opt_cell<T: Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_asympt_row<W: Write>(
    out: &mut W,
    row: &AsymptRow,
    format: Format,
) -> Result<(), CliError> {
    let exact = row.exact_f64();
    let ratio = row.ratio();
    match format {
        Format::Csv => {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                opt_cell(row.q),
                opt_cell(row.m),
                row.n,
                row.formula,
                row.estimate.value,
                opt_cell(exact),
                opt_cell(ratio)
            )?;
        }
        Format::Json => {
            let v = serde_json::json!({
                "q": row.q,
                "m": row.m,
                "n": row.n,
                "formula": row.formula,
                "estimate": row.estimate.value,
                "ln_estimate": row.estimate.ln_value,
                "exact": exact,
                "ratio": ratio,
            });
            writeln!(out, "{v}")?;
        }
        Format::Text => {
            let mut line = format!(
                "{} q={} m={} n={} estimate={:e}",
                row.formula,
                opt_cell(row.q),
                opt_cell(row.m),
                row.n,
                row.estimate.value
            );
            if let Some(e) = exact {
                line.push_str(&format!(" exact={e:e}"));
            }
            if let Some(r) = ratio {
                line.push_str(&format!(" ratio={r:.6}"));
            }
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// walk
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkMode {
    Dp,
    Mc,
}

impl std::str::FromStr for WalkMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dp" => Ok(WalkMode::Dp),
            "mc" => Ok(WalkMode::Mc),
            other => Err(format!("unknown walk mode {other:?}; valid: dp, mc")),
        }
    }
}

pub struct WalkConfig {
    pub mode: WalkMode,
    pub p: Option<u32>,
    pub q: Option<u64>,
    pub m: Option<u64>,
    pub n: u64,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub budget: u64,
    pub format: Format,
}

pub fn run_walk<W: Write>(out: &mut W, cfg: &WalkConfig) -> Result<(), CliError> {
    match cfg.mode {
        WalkMode::Dp => {
            let p = cfg
                .p
                .ok_or_else(|| CliError::InvalidConfig("dp mode needs --p".into()))?;
            let prob = walks::exact_diagonal_return(p, cfg.n, cfg.budget)?;
            match cfg.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "p": p,
                        "n": cfg.n,
                        "method": "dp",
                        "probability": prob.display_reduced(),
                        "probability_float": prob.to_f64(),
                    });
                    writeln!(out, "{v}")?;
                }
                Format::Csv => {
                    writeln!(out, "p,n,method,probability,probability_float")?;
                    writeln!(
                        out,
                        "{},{},dp,{},{}",
                        p,
                        cfg.n,
                        prob.display_reduced(),
                        prob.to_f64()
                    )?;
                }
                Format::Text => writeln!(out, "{}", prob.display_reduced())?,
            }
        }
        WalkMode::Mc => {
            let q = check_modulus(
                cfg.q
                    .ok_or_else(|| CliError::InvalidConfig("mc mode needs --q".into()))?,
            )?;
            let m = cfg
                .m
                .ok_or_else(|| CliError::InvalidConfig("mc mode needs --m".into()))?;
            let m = u32::try_from(m).map_err(|_| CliError::InvalidConfig("m too large".into()))?;
            if m < 2 {
                return Err(CliError::InvalidConfig("mc mode needs m >= 2".into()));
            }
            let est = walks::mc_return_probability(q, m, cfg.n, cfg.samples, cfg.seed, cfg.workers);
            match cfg.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "q": q,
                        "m": m,
                        "n": cfg.n,
                        "method": "mc",
                        "samples": est.samples,
                        "seed": est.seed,
                        "workers": cfg.workers,
                        "hits": est.hits,
                        "estimate": est.estimate,
                        "stderr": est.stderr,
                    });
                    writeln!(out, "{v}")?;
                }
                Format::Csv => {
                    writeln!(
                        out,
                        "q,m,n,method,samples,seed,workers,hits,estimate,stderr"
                    )?;
                    writeln!(
                        out,
                        "{},{},{},mc,{},{},{},{},{},{}",
                        q,
                        m,
                        cfg.n,
                        est.samples,
                        est.seed,
                        cfg.workers,
                        est.hits,
                        est.estimate,
                        est.stderr
                    )?;
                }
                Format::Text => writeln!(
                    out,
                    "estimate {} +/- {} ({} hits in {} samples, seed {})",
                    est.estimate, est.stderr, est.hits, est.samples, est.seed
                )?,
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// tristochastic
// ---------------------------------------------------------------------

pub struct TristochasticConfig {
    pub p: usize,
    pub sum: u64,
    pub list: bool,
    pub format: Format,
}

pub fn run_tristochastic<W: Write>(out: &mut W, cfg: &TristochasticConfig) -> Result<(), CliError> {
    if cfg.p < 2 || cfg.p > 16 {
        return Err(CliError::InvalidConfig(format!(
            "matrix size must be in 2..=16, got {}",
            cfg.p
        )));
    }
    if cfg.list {
        let matrices = butson_core::tristochastic::enumerate_tristochastic(cfg.p, cfg.sum);
        match cfg.format {
            Format::Json => {
                for m in &matrices {
                    let rows: Vec<&[u64]> = m.rows().collect();
                    let v = serde_json::json!({
                        "p": cfg.p,
                        "sum": cfg.sum,
                        "rows": rows,
                    });
                    writeln!(out, "{v}")?;
                }
            }
            _ => {
                for m in &matrices {
                    let line = m
                        .rows()
                        .map(|r| {
                            r.iter()
                                .map(|e| e.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        })
                        .collect::<Vec<_>>()
                        .join(";");
                    writeln!(out, "{line}")?;
                }
            }
        }
    } else {
        let count = butson_core::tristochastic::count_tristochastic(cfg.p, cfg.sum);
        match cfg.format {
            Format::Json => {
                let v = serde_json::json!({
                    "p": cfg.p,
                    "sum": cfg.sum,
                    "count": count.to_string(),
                });
                writeln!(out, "{v}")?;
            }
            _ => writeln!(out, "{count}")?,
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// vanish
// ---------------------------------------------------------------------

pub struct VanishConfig {
    pub q: u64,
    pub exponents: Vec<u32>,
    pub format: Format,
}

pub fn run_vanish<W: Write>(out: &mut W, cfg: &VanishConfig) -> Result<(), CliError> {
    let q = check_modulus(cfg.q)?;
    if let Some(&e) = cfg.exponents.iter().find(|&&e| e >= q) {
        return Err(CliError::InvalidConfig(format!(
            "exponent {e} out of range for modulus {q}"
        )));
    }
    let v = MultiplicityVector::from_exponents(q, &cfg.exponents);
    let vanishing = cyclotomic::is_vanishing_sum(&v);
    let decomposition = if vanishing {
        cyclotomic::cycle_decomposition(&v)
    } else {
        None
    };
    match cfg.format {
        Format::Json | Format::Csv => {
            let terms = decomposition.as_ref().map(|d| {
                d.terms
                    .iter()
                    .map(|t| {
                        serde_json::json!({
                            "prime": t.prime,
                            "offset": t.offset,
                            "multiplicity": t.multiplicity,
                        })
                    })
                    .collect::<Vec<_>>()
            });
            let v = serde_json::json!({
                "q": q,
                "exponents": cfg.exponents,
                "size": cfg.exponents.len(),
                "vanishing": vanishing,
                "cycle_decomposition": terms,
            });
            writeln!(out, "{v}")?;
        }
        Format::Text => {
            writeln!(
                out,
                "sum of {} roots of unity (q={q}): {}",
                cfg.exponents.len(),
                if vanishing { "vanishing" } else { "nonzero" }
            )?;
            match &decomposition {
                Some(d) => {
                    for t in &d.terms {
                        writeln!(
                            out,
                            "  {} x {}-cycle at offset {}",
                            t.multiplicity, t.prime, t.offset
                        )?;
                    }
                }
                None if vanishing => {
                    writeln!(out, "  no nonnegative cycle decomposition")?;
                }
                None => {}
            }
        }
    }
    Ok(())
}
