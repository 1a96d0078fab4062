use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wetspell::pipeline::MissingPolicy;
use wetspell::RepresentationTag;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "wetspell", version, about = "Extremes of daily precipitation within wet periods")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a daily series into wet periods and print them as JSON.
    Segment(SegmentArgs),
    /// Fit the limit law to per-period maxima.
    Fit(FitArgs),
    /// Uniform distance between fitted model and data for a range of censoring thresholds.
    GofSweep(SweepArgs),
    /// Draw variates from the limit law, its pre-limit approximation, or a synthetic daily series.
    Simulate(SimulateArgs),
    /// Print a quantile of the limit law.
    Quantile(QuantileArgs),
    /// Print a fractional moment of the limit law.
    Moment(MomentArgs),
}

#[derive(Debug, Args, Clone)]
pub struct SeriesInput {
    /// Input file (`-` reads standard input).
    #[arg(long)]
    pub input: PathBuf,
    /// Days with volume above this value are wet.
    #[arg(long, default_value_t = 0.0)]
    pub wet_threshold: f64,
    /// Cell value marking a missing day.
    #[arg(long, default_value = "NA")]
    pub missing_marker: String,
    /// Whether a missing day splits a wet run or counts as dry.
    #[arg(long, default_value = "split", value_parser = MissingPolicy::from_str)]
    pub missing_policy: MissingPolicy,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    /// Daily series (`date,value_mm` or `value_mm` rows).
    Series,
    /// Maxima sample, one value per line.
    Maxima,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quantile,
    Ls,
    Mle,
    All,
}

/// Value of `--r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeSource {
    Given(f64),
    FromDurations,
}

impl FromStr for ShapeSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "from-durations" {
            return Ok(ShapeSource::FromDurations);
        }
        match s.parse::<f64>() {
            Ok(r) if r.is_finite() && r > 0.0 => Ok(ShapeSource::Given(r)),
            _ => Err(format!("expected a positive number or `from-durations`, got `{s}`")),
        }
    }
}

/// Inclusive range `a..b` (also `a-b` or a single value).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HRange {
    pub from: usize,
    pub to: usize,
}

impl FromStr for HRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid h value `{t}` in range `{s}`"))
        };
        let (from, to) = match s.split_once("..").or_else(|| s.split_once('-')) {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if from == 0 || to < from {
            return Err(format!("h range `{s}` must satisfy 1 <= from <= to"));
        }
        Ok(HRange { from, to })
    }
}

#[derive(Debug, Args, Clone)]
pub struct EstimatorArgs {
    /// Estimation method.
    #[arg(long, value_enum, default_value = "all")]
    pub method: Method,
    /// Known shape `r`, or `from-durations` to take it from a negative-binomial fit of the wet-period lengths.
    #[arg(long)]
    pub r: Option<ShapeSource>,
    #[arg(long, default_value_t = 0.25)]
    pub p1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub p2: f64,
    #[arg(long, default_value_t = 0.75)]
    pub p3: f64,
    /// Comma-separated τ values; the quantile method then uses levels (τ, 1/2, 1−τ) and keeps the best τ.
    #[arg(long, value_delimiter = ',')]
    pub tau_grid: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    #[arg(long, value_enum, default_value = "series")]
    pub input_kind: InputKind,
    /// Minimum wet-period length `h` for a maximum to enter the sample.
    #[arg(long, default_value_t = 1)]
    pub min_wet_days: usize,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    /// Censoring thresholds, e.g. `1..15`.
    #[arg(long, default_value = "1..15")]
    pub h_range: HRange,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Directory receiving one plot-data TSV per threshold and method.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimulateMode {
    /// Limit-law variates through `--tag`.
    Limit,
    /// Normalized maxima of a negative-binomial number of Pareto variates.
    Prelimit,
    /// Synthetic daily series whose wet-period maxima follow the limit law.
    Series,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct ParamArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "limit")]
    pub mode: SimulateMode,
    /// Representation used in `limit` mode.
    #[arg(long, default_value = "direct", value_parser = RepresentationTag::from_str)]
    pub tag: RepresentationTag,
    /// Number of variates (wet periods in `series` mode).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Index `n` of the pre-limit scheme (`prelimit` mode).
    #[arg(long, default_value_t = 10_000)]
    pub prelimit_n: u64,
    /// Cap `q` on the count probability `min(q, λ/n)` (`prelimit` mode).
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Success probability of the wet-period length law (`series` mode).
    #[arg(long, default_value_t = 0.5)]
    pub duration_p: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Probability level in (0, 1).
    #[arg(long)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Order `δ`, `0 < δ < γ`.
    #[arg(long)]
    pub delta: f64,
}
