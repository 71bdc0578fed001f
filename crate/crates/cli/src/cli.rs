//! Argument parsing for the `butson` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::{
    AsymptConfig, CensusConfig, CliError, Format, FormulaId, MethodChoice, Range,
    TristochasticConfig, VanishConfig, WalkConfig, WalkMode, DEFAULT_SEED, DEFAULT_WORKERS,
};
use butson_core::{DEFAULT_CENSUS_BUDGET, DEFAULT_WALK_BUDGET};

#[derive(Debug, Parser)]
#[command(
    name = "butson",
    about = "Exact counts, random-walk experiments, and asymptotics for partial Butson matrices",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Brute,
    Closed,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> MethodChoice {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Brute => MethodChoice::Brute,
            MethodArg::Closed => MethodChoice::Closed,
        }
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Work budget (candidate rows for censuses, lattice states for walk
    /// dp); overrides the BUTSON_BUDGET environment variable
    #[arg(long)]
    pub budget: Option<u64>,

    /// Worker threads (a fixed constant by default so output is
    /// machine-independent)
    #[arg(long, default_value_t = DEFAULT_WORKERS)]
    pub workers: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count partial Butson matrices over a (q, m, n) grid
    Census {
        /// Modulus, a value or inclusive range "a..b"
        #[arg(long, value_parser = parse_range)]
        q: Range,
        /// Row count, a value or inclusive range
        #[arg(long, value_parser = parse_range)]
        m: Range,
        /// Column count, a value or inclusive range
        #[arg(long, value_parser = parse_range)]
        n: Range,
        /// auto picks a closed form when one applies, else brute force
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Cross-check closed forms against brute force when affordable
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        common: CommonArgs,
    },

    /// Evaluate asymptotic formulas, optionally with exact counterparts
    Asympt {
        /// prime-power | three-row | dll | power-sum | origin-2row | origin-3row
        #[arg(long)]
        formula: FormulaId,
        #[arg(long, value_parser = parse_range)]
        q: Option<Range>,
        #[arg(long, value_parser = parse_range)]
        m: Option<Range>,
        #[arg(long, value_parser = parse_range)]
        n: Range,
        /// Number of parts (power-sum formula)
        #[arg(long)]
        s: Option<u32>,
        /// Power / prime parameter (power-sum, three-row, origin-*)
        #[arg(long)]
        p: Option<u32>,
        /// Also compute the exact value and the exact/estimate ratio
        #[arg(long)]
        with_exact: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        common: CommonArgs,
    },

    /// Exact (dp) or Monte Carlo (mc) walk return probabilities
    Walk {
        /// dp | mc
        #[arg(long)]
        mode: WalkMode,
        /// Walk dimension, an odd prime (dp mode)
        #[arg(long)]
        p: Option<u32>,
        /// Modulus (mc mode)
        #[arg(long)]
        q: Option<u64>,
        /// Row count (mc mode)
        #[arg(long)]
        m: Option<u64>,
        /// Number of steps / columns
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Seed for the mc generator; a fixed default, never the clock
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        common: CommonArgs,
    },

    /// Enumerate or count tristochastic matrices
    Tristochastic {
        /// Matrix size
        #[arg(long)]
        p: usize,
        /// Common row/column/diagonal sum
        #[arg(long)]
        sum: u64,
        /// Print one matrix per line (rows ;-separated, entries ,-separated)
        #[arg(long, conflicts_with = "count")]
        list: bool,
        /// Print the count only (default)
        #[arg(long)]
        count: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },

    /// Test a multiset of q-th roots of unity for vanishing
    Vanish {
        /// Modulus
        #[arg(long)]
        q: u64,
        /// Comma-separated exponent list, repeats allowed
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

impl Cli {
    /// Runs the parsed command, writing to `out`.
    pub fn run<W: std::io::Write>(self, out: &mut W) -> Result<(), CliError> {
        match self.command {
            Command::Census {
                q,
                m,
                n,
                method,
                verify,
                format,
                common,
            } => {
                crate::configure_workers(common.workers)?;
                let cfg = CensusConfig {
                    q,
                    m,
                    n,
                    method: method.into(),
                    budget: crate::resolve_budget(common.budget, DEFAULT_CENSUS_BUDGET)?,
                    verify,
                    format: format.into(),
                };
                crate::run_census(out, &cfg)
            }
            Command::Asympt {
                formula,
                q,
                m,
                n,
                s,
                p,
                with_exact,
                format,
                common,
            } => {
                crate::configure_workers(common.workers)?;
                let cfg = AsymptConfig {
                    formula,
                    q,
                    m,
                    n,
                    s,
                    p,
                    with_exact,
                    budget: crate::resolve_budget(common.budget, DEFAULT_CENSUS_BUDGET)?,
                    format: format.into(),
                };
                crate::run_asympt(out, &cfg)
            }
            Command::Walk {
                mode,
                p,
                q,
                m,
                n,
                samples,
                seed,
                format,
                common,
            } => {
                crate::configure_workers(common.workers)?;
                let default_budget = match mode {
                    WalkMode::Dp => DEFAULT_WALK_BUDGET,
                    WalkMode::Mc => DEFAULT_CENSUS_BUDGET,
                };
                let cfg = WalkConfig {
                    mode,
                    p,
                    q,
                    m,
                    n,
                    samples,
                    seed,
                    workers: common.workers,
                    budget: crate::resolve_budget(common.budget, default_budget)?,
                    format: format.into(),
                };
                crate::run_walk(out, &cfg)
            }
            Command::Tristochastic {
                p,
                sum,
                list,
                count: _,
                format,
            } => {
                let cfg = TristochasticConfig {
                    p,
                    sum,
                    list,
                    format: format.into(),
                };
                crate::run_tristochastic(out, &cfg)
            }
            Command::Vanish {
                q,
                exponents,
                format,
            } => {
                let cfg = VanishConfig {
                    q,
                    exponents,
                    format: format.into(),
                };
                crate::run_vanish(out, &cfg)
            }
        }
    }
}
