use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pentachain::closed_forms::Formula;
use pentachain::distribution::Standardization;
use pentachain::scalar::{parse_decimal_exact, parse_exact};
use pentachain::{AttachmentMode, Exact, Index};

#[derive(Parser, Debug)]
#[command(
    name = "pentachain",
    version,
    about = "Random pentagonal chains: indices, closed-form moments, enumeration and Monte Carlo"
)]
pub struct Cli {
    /// Write the result to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Largest n accepted by exhaustive enumeration (default: $PENTACHAIN_ENUM_CAP or 22)
    #[arg(long, global = true)]
    pub enum_cap: Option<usize>,

    /// Print the resolved run configuration as JSON on stderr
    #[arg(long, global = true)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a blueprint and print it with its edge list
    Generate(GenerateArgs),
    /// Index values of one blueprint, cross-checked by the matrix engines
    Indices(IndicesArgs),
    /// Closed-form moments against enumeration and Monte Carlo
    Report(ReportArgs),
    /// Exact distribution of one index
    Distribution(DistributionArgs),
    /// Seeded Monte Carlo samples
    Sample(SampleArgs),
    /// Kolmogorov-Smirnov distance of standardized samples to N(0, 1)
    Normality(NormalityArgs),
    /// Distance or resistance matrix of one blueprint as CSV
    Matrix(MatrixArgs),
}

/// `p1` as typed: `"1/2"` selects exact mode, `"0.5"` float mode. Either way
/// the exact value is kept for the enumeration oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct P1 {
    pub text: String,
    pub exact: Exact,
    pub rational: bool,
}

impl FromStr for P1 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let rational = !s.contains('.');
        let exact = if rational { parse_exact(s) } else { parse_decimal_exact(s) }
            .ok_or_else(|| format!("'{}' is neither a rational p/q nor a decimal", s))?;
        let zero = Exact::from_integer(0.into());
        let one = Exact::from_integer(1.into());
        if exact < zero || exact > one {
            return Err(format!("p1 must lie in [0, 1], got {}", s));
        }
        Ok(P1 { text: s.to_string(), exact, rational })
    }
}

pub fn parse_p1(s: &str) -> Result<P1, String> {
    s.parse()
}

pub fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|_| format!("'{}' is not a non-negative integer", s))?;
    if n == 0 {
        return Err("n must be at least 1, got 0".into());
    }
    Ok(n)
}

pub fn parse_positive(s: &str) -> Result<usize, String> {
    let v: usize = s.trim().parse().map_err(|_| format!("'{}' is not a non-negative integer", s))?;
    if v == 0 {
        return Err("value must be at least 1, got 0".into());
    }
    Ok(v)
}

pub fn parse_index(s: &str) -> Result<Index, String> {
    s.parse()
}

pub fn parse_formula(s: &str) -> Result<Formula, String> {
    s.parse()
}

pub fn parse_mode(s: &str) -> Result<AttachmentMode, String> {
    match s.to_ascii_uppercase().as_str() {
        "M1" | "MODE1" => Ok(AttachmentMode::Mode1),
        "M2" | "MODE2" => Ok(AttachmentMode::Mode2),
        _ => Err(format!("unknown attachment mode '{}' (expected M1 or M2)", s)),
    }
}

/// A list of pentagon counts given as one flag value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

/// Parses `"1..50"`, `"n=1..50"`, `"3"` or `"2,4,8"` into a list of `n`.
pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let body = s.trim().strip_prefix("n=").unwrap_or(s.trim());
    let mut out = Vec::new();
    for part in body.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let (lo, hi) = (parse_n(a)?, parse_n(b.trim_start_matches('='))?);
                if lo > hi {
                    return Err(format!("empty range {}", part));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse_n(part)?),
        }
    }
    Ok(NList(out))
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TextOrJson {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CsvOrJson {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StandardizeBy {
    ClosedForm,
    Sample,
}

impl From<StandardizeBy> for Standardization {
    fn from(s: StandardizeBy) -> Self {
        match s {
            StandardizeBy::ClosedForm => Standardization::ClosedForm,
            StandardizeBy::Sample => Standardization::SampleMoments,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricKindArg {
    Distance,
    Resistance,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Structured,
    Bfs,
    Laplacian,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long, default_value = "1/2", value_parser = parse_p1)]
    pub p1: P1,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
    pub format: TextOrJson,
}

/// Where a blueprint comes from: a JSON file, stdin, or a uniform chain.
#[derive(Args, Debug)]
pub struct BlueprintSource {
    /// Blueprint JSON file ("-" or absent: stdin)
    #[arg(value_name = "FILE", conflicts_with = "n")]
    pub input: Option<PathBuf>,
    /// Build a chain of this size instead of reading JSON
    #[arg(long, value_parser = parse_n, requires = "uniform")]
    pub n: Option<usize>,
    /// Attachment mode used at every step of the built chain
    #[arg(long, value_parser = parse_mode, requires = "n")]
    pub uniform: Option<AttachmentMode>,
}

#[derive(Args, Debug)]
pub struct IndicesArgs {
    #[command(flatten)]
    pub source: BlueprintSource,
    /// Run the matrix engines as a cross-check when n is at most this
    #[arg(long, default_value_t = 12)]
    pub verify_cap: usize,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Evaluate n = 1..=NMAX
    #[arg(long, value_parser = parse_n, conflicts_with_all = ["n", "grid"])]
    pub nmax: Option<usize>,
    /// Explicit n values: "8", "2,4,8" or "1..50"
    #[arg(long, value_parser = parse_n_list, conflicts_with = "grid")]
    pub n: Option<NList>,
    /// Grid of n values, e.g. "n=1..50"
    #[arg(long, value_parser = parse_n_list)]
    pub grid: Option<NList>,
    /// Comma-separated p1 values, rational ("1/5") or decimal ("0.2");
    /// defaults to 1/5,1/2,4/5 (1/2 with --normality)
    #[arg(long, value_delimiter = ',', value_parser = parse_p1)]
    pub p1: Option<Vec<P1>>,
    /// Only evaluate the closed forms (CSV surface, no oracle)
    #[arg(long)]
    pub expect_only: bool,
    /// Closed-form table for --expect-only and normality standardization;
    /// defaults to published (reconciled with --normality)
    #[arg(long, value_parser = parse_formula)]
    pub formula: Option<Formula>,
    /// Run the Kolmogorov-Smirnov experiment instead of the moment table
    #[arg(long)]
    pub normality: bool,
    /// Monte Carlo samples per (n, p1); 0 disables the Monte Carlo columns
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_parser = parse_positive)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = StandardizeBy::ClosedForm)]
    pub standardization: StandardizeBy,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
}

impl ReportArgs {
    pub fn p1_values(&self) -> Vec<P1> {
        if let Some(ps) = &self.p1 {
            return ps.clone();
        }
        let defaults: &[&str] = if self.normality { &["1/2"] } else { &["1/5", "1/2", "4/5"] };
        defaults.iter().map(|t| t.parse().expect("valid default")).collect()
    }

    pub fn formula(&self) -> Formula {
        self.formula.unwrap_or(if self.normality { Formula::Reconciled } else { Formula::Published })
    }
}

#[derive(Args, Debug)]
pub struct DistributionArgs {
    #[arg(long, value_parser = parse_index)]
    pub index: Index,
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long, default_value = "1/2", value_parser = parse_p1)]
    pub p1: P1,
    #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
    pub format: CsvOrJson,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long, default_value = "1/2", value_parser = parse_p1)]
    pub p1: P1,
    #[arg(long, default_value_t = 1000, value_parser = parse_positive)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_positive)]
    pub workers: Option<usize>,
    /// Index to dump (CSV); JSON output summarizes all four
    #[arg(long, default_value = "gutman", value_parser = parse_index)]
    pub index: Index,
    #[arg(long, value_enum, default_value_t = CsvOrJson::Csv)]
    pub format: CsvOrJson,
}

#[derive(Args, Debug)]
pub struct NormalityArgs {
    /// Index to test (default: all four)
    #[arg(long, value_parser = parse_index)]
    pub index: Option<Index>,
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long, default_value = "1/2", value_parser = parse_p1)]
    pub p1: P1,
    #[arg(long, default_value_t = 10_000, value_parser = parse_positive)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_parser = parse_positive)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = StandardizeBy::ClosedForm)]
    pub standardization: StandardizeBy,
    /// Closed-form table used for closed-form standardization
    #[arg(long, default_value = "reconciled", value_parser = parse_formula)]
    pub formula: Formula,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub source: BlueprintSource,
    #[arg(long, value_enum, default_value_t = MetricKindArg::Distance)]
    pub kind: MetricKindArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Structured)]
    pub engine: EngineArg,
}
