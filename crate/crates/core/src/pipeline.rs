//! Daily precipitation series → wet periods → per-period maxima.
//!
//! A wet period is a maximal run of days with volume above the wet
//! threshold. Periods are kept in calendar order.

use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{ModelParams, NegBinParams};
use crate::error::{Error, Result};
use crate::estimation::MaximaSample;
use crate::rng::open01;
use crate::samplers::{sample_negbin, LimitSampler, RepresentationTag};

/// Ordered daily volumes; `None` marks a missing day.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PrecipSeries {
    values: Vec<Option<f64>>,
    dates: Option<Vec<String>>,
}

impl PrecipSeries {
    /// Series without date labels. Negative or non-finite volumes are rejected.
    pub fn new(values: Vec<Option<f64>>) -> Result<Self> {
        Self::build(values, None)
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().copied().map(Some).collect())
    }

    pub fn with_dates(values: Vec<Option<f64>>, dates: Vec<String>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::InvalidParameter {
                name: "dates",
                value: dates.len() as f64,
                reason: "one date label per value is required",
            });
        }
        Self::build(values, Some(dates))
    }

    fn build(values: Vec<Option<f64>>, dates: Option<Vec<String>>) -> Result<Self> {
        if let Some(bad) = values.iter().flatten().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "volume",
                value: *bad,
                reason: "daily volumes must be finite and >= 0",
            });
        }
        Ok(PrecipSeries { values, dates })
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn dates(&self) -> Option<&[String]> {
        self.dates.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn missing_days(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }
}

/// Treatment of days marked missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingPolicy {
    /// A missing day ends the current wet run and is recorded as a warning.
    #[default]
    Split,
    /// A missing day counts as dry.
    Dry,
}

impl FromStr for MissingPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "split" => Ok(MissingPolicy::Split),
            "dry" => Ok(MissingPolicy::Dry),
            other => Err(format!("unknown missing-day policy `{other}` (expected split or dry)")),
        }
    }
}

/// A wet run cut short by a missing day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingSplit {
    /// 0-based index of the missing day in the series.
    pub day: usize,
    /// Index of the period that the missing day terminated.
    pub period: usize,
}

/// Segmented wet periods `X_{i,j}` with their lengths `m_i`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WetPeriods {
    pub periods: Vec<Vec<f64>>,
    pub lengths: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<MissingSplit>,
}

impl WetPeriods {
    pub fn from_periods(periods: Vec<Vec<f64>>) -> Self {
        let lengths = periods.iter().map(Vec::len).collect();
        WetPeriods {
            periods,
            lengths,
            warnings: Vec::new(),
        }
    }

    /// Number of periods `m`.
    pub fn count(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn max_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }
}

/// Minimum wet-period length `h` for a period's maximum to enter the sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensoringSpec {
    h: usize,
}

impl CensoringSpec {
    pub fn new(h: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidParameter {
                name: "h",
                value: 0.0,
                reason: "minimum wet-period length must be >= 1",
            });
        }
        Ok(CensoringSpec { h })
    }

    pub fn h(&self) -> usize {
        self.h
    }
}

impl Default for CensoringSpec {
    fn default() -> Self {
        CensoringSpec { h: 1 }
    }
}

pub fn segment(series: &PrecipSeries, wet_threshold: f64) -> Result<WetPeriods> {
    segment_with(series, wet_threshold, MissingPolicy::Split)
}

/// Splits the series into maximal runs of days with volume `> wet_threshold`.
pub fn segment_with(series: &PrecipSeries, wet_threshold: f64, policy: MissingPolicy) -> Result<WetPeriods> {
    if series.is_empty() {
        return Err(Error::Empty);
    }
    if !(wet_threshold >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "wet_threshold",
            value: wet_threshold,
            reason: "must be >= 0",
        });
    }
    let mut out = WetPeriods::default();
    let mut current: Vec<f64> = Vec::new();
    let close = |out: &mut WetPeriods, current: &mut Vec<f64>| {
        if !current.is_empty() {
            out.lengths.push(current.len());
            out.periods.push(std::mem::take(current));
        }
    };
    for (day, value) in series.values().iter().enumerate() {
        match value {
            Some(v) if *v > wet_threshold => current.push(*v),
            Some(_) => close(&mut out, &mut current),
            None => {
                if policy == MissingPolicy::Split && !current.is_empty() {
                    out.warnings.push(MissingSplit {
                        day,
                        period: out.periods.len(),
                    });
                }
                close(&mut out, &mut current);
            }
        }
    }
    close(&mut out, &mut current);
    Ok(out)
}

/// Per-period maxima `X*_k = max_j X_{k,j}` of periods with `m_k ≥ h`.
pub fn build_maxima(wp: &WetPeriods, c: &CensoringSpec) -> Result<MaximaSample> {
    let maxima: Vec<f64> = wp
        .periods
        .iter()
        .filter(|p| p.len() >= c.h())
        .map(|p| p.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    if maxima.is_empty() {
        return Err(Error::EmptySample {
            h: c.h(),
            max_len: wp.max_length(),
        });
    }
    MaximaSample::new(maxima)
}

/// Lengths `m_1, …, m_m` of the wet periods.
pub fn durations(wp: &WetPeriods) -> Vec<usize> {
    wp.lengths.clone()
}

/// Daily series with `periods` wet periods whose maxima follow the limit law.
///
/// Each period lasts `1 + N` days with `N ~ NegBin(durations)`; its maximum
/// `M` is drawn from `F(·; params)` and placed on a uniformly chosen day, the
/// other days receiving `M·U` with `U` uniform. Every period is preceded by
/// `1 + G` dry days, `G` geometric with success probability 1/2.
pub fn synthetic_series<R: Rng + ?Sized>(
    params: &ModelParams,
    durations: &NegBinParams,
    periods: usize,
    rng: &mut R,
) -> PrecipSeries {
    let maxima = LimitSampler::new(*params, RepresentationTag::Direct).expect("direct form has no domain limits");
    let gap = NegBinParams::new(1.0, 0.5).expect("valid geometric law");
    let mut values = Vec::new();
    for _ in 0..periods {
        let dry = 1 + sample_negbin(&gap, rng) as usize;
        values.extend(std::iter::repeat(Some(0.0)).take(dry));
        let len = 1 + sample_negbin(durations, rng) as usize;
        let peak = maxima.sample(rng);
        let at = ((open01(rng) * len as f64) as usize).min(len - 1);
        for day in 0..len {
            let v = if day == at { peak } else { peak * open01(rng) };
            values.push(Some(v));
        }
    }
    values.push(Some(0.0));
    PrecipSeries { values, dates: None }
}

/// CSV reading options.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvOptions {
    pub missing_marker: String,
    /// `None` detects a header row: the first row is a header when none of
    /// its cells contains a digit.
    pub has_header: Option<bool>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            missing_marker: "NA".to_string(),
            has_header: None,
        }
    }
}

/// Reads `date,value_mm` or single-column `value_mm` records.
pub fn ingest_csv<P: AsRef<Path>>(path: P, opts: &CsvOptions) -> Result<PrecipSeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(file, &path.display().to_string(), opts)
}

/// Parses CSV from any reader; `name` labels error messages.
pub fn parse_csv<R: Read>(reader: R, name: &str, opts: &CsvOptions) -> Result<PrecipSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let parse_err = |line: u64, message: String| Error::Parse {
        path: name.to_string(),
        line,
        message,
    };

    let mut values = Vec::new();
    let mut dates = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if idx == 0 {
            let header = opts
                .has_header
                .unwrap_or_else(|| record.iter().all(|c| !c.chars().any(|ch| ch.is_ascii_digit())));
            if header {
                width = Some(record.len());
                continue;
            }
        }
        let n = record.len();
        if !(n == 1 || n == 2) {
            return Err(parse_err(line, format!("expected 1 or 2 columns, found {n}")));
        }
        match width {
            Some(w) if w != n => {
                return Err(parse_err(line, format!("expected {w} columns, found {n}")))
            }
            _ => width = Some(n),
        }
        let cell = &record[n - 1];
        let value = if cell == opts.missing_marker {
            None
        } else {
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_err(line, format!("`{}` is not a number", record.iter().collect::<Vec<_>>().join(","))))?;
            if !v.is_finite() || v < 0.0 {
                return Err(parse_err(line, format!("volume `{cell}` must be finite and >= 0")));
            }
            Some(v)
        };
        values.push(value);
        if n == 2 {
            dates.push(record[0].to_string());
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyInput(name.to_string()));
    }
    if dates.is_empty() {
        PrecipSeries::new(values)
    } else {
        PrecipSeries::with_dates(values, dates)
    }
}
