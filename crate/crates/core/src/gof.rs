//! Empirical distribution functions, Kolmogorov–Smirnov distances, a Hill
//! tail-index diagnostic and plot-data emission.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::distributions::{limit_cdf, ModelParams};
use crate::error::{Error, Result};
use crate::estimation::MaximaSample;

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfTable {
    points: Vec<f64>,
    heights: Vec<f64>,
    m: usize,
}

impl EcdfTable {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        let mut sorted = values.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(Self::from_sorted(&sorted))
    }

    fn from_sorted(sorted: &[f64]) -> Self {
        let m = sorted.len();
        let mut points = Vec::new();
        let mut heights = Vec::new();
        for (i, &x) in sorted.iter().enumerate() {
            // ties merge into the jump at their last occurrence
            if i + 1 == m || sorted[i + 1] != x {
                points.push(x);
                heights.push((i + 1) as f64 / m as f64);
            }
        }
        EcdfTable { points, heights, m }
    }

    /// Jump locations, ascending and distinct.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Height of the function at each jump location.
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Fraction of the sample `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|&p| p <= x);
        if idx == 0 {
            0.0
        } else {
            self.heights[idx - 1]
        }
    }
}

pub fn ecdf(sample: &MaximaSample) -> EcdfTable {
    EcdfTable::from_sorted(sample.sorted())
}

/// Uniform distance between an empirical and a reference distribution function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub ks_distance: f64,
    /// Sample point at which the supremum is attained.
    pub location: f64,
    pub m: usize,
    /// Size of the second sample for two-sample statistics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_other: Option<usize>,
}

/// Exact `sup_x |ECDF(x) − F(x)|` for a continuous `F`, over sorted data.
pub fn ks_one_sample_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<GofResult> {
    if sorted.is_empty() {
        return Err(Error::Empty);
    }
    let m = sorted.len() as f64;
    let mut best = GofResult {
        ks_distance: -1.0,
        location: sorted[0],
        m: sorted.len(),
        m_other: None,
    };
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let d = ((i + 1) as f64 / m - f).abs().max((f - i as f64 / m).abs());
        if d > best.ks_distance {
            best.ks_distance = d;
            best.location = x;
        }
    }
    best.ks_distance = best.ks_distance.clamp(0.0, 1.0);
    Ok(best)
}

pub fn ks_one_sample<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> Result<GofResult> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    ks_one_sample_sorted(&sorted, cdf)
}

/// Uniform distance between the sample's ECDF and the limit law.
pub fn ks_model(sample: &MaximaSample, p: &ModelParams) -> GofResult {
    ks_one_sample_sorted(sample.sorted(), |x| limit_cdf(x, p).unwrap_or(0.0))
        .expect("maxima samples are nonempty")
}

/// Two-sample statistic `sup |ECDF_a − ECDF_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<GofResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = GofResult {
        ks_distance: 0.0,
        location: a[0].min(b[0]),
        m: a.len(),
        m_other: Some(b.len()),
    };
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        let d = (i as f64 / na - j as f64 / nb).abs();
        if d > best.ks_distance {
            best.ks_distance = d;
            best.location = x;
        }
    }
    Ok(best)
}

/// Asymptotic Kolmogorov critical value `c(α) = √(−½ ln(α/2))`.
pub fn ks_coefficient(level: f64) -> f64 {
    (-0.5 * (level / 2.0).ln()).sqrt()
}

/// One-sample critical distance at significance `level` for sample size `n`.
pub fn ks_critical(level: f64, n: usize) -> f64 {
    ks_coefficient(level) / (n as f64).sqrt()
}

/// Two-sample critical distance at significance `level`.
pub fn ks_critical_two_sample(level: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_coefficient(level) * ((n + m) / (n * m)).sqrt()
}

/// Hill estimate of the tail exponent from the top `k` order statistics:
/// `k / Σ_{j=1}^{k} ln(X_(m−j+1) / X_(m−k))`.
pub fn tail_index(values: &[f64], k: usize) -> Result<f64> {
    let m = values.len();
    if k < 2 || k >= m {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k as f64,
            reason: "must satisfy 2 <= k < sample size",
        });
    }
    if let Some(&bad) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sample value",
            value: bad,
            reason: "tail index needs finite positive values",
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let threshold = sorted[m - k - 1].ln();
    let spacing: f64 = sorted[m - k..].iter().map(|x| x.ln() - threshold).sum();
    if !(spacing > 0.0) {
        return Err(Error::DegenerateSample(
            "top order statistics have zero log-spacings".into(),
        ));
    }
    Ok(k as f64 / spacing)
}

/// Abscissae for plot data.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Explicit(Vec<f64>),
    /// `points` equally spaced values on `[from, to]`.
    Linear { from: f64, to: f64, points: usize },
    /// `points` equally spaced values from 0 to the sample maximum.
    SampleRange { points: usize },
}

impl GridSpec {
    fn resolve(&self, sample: &MaximaSample) -> Vec<f64> {
        let linear = |from: f64, to: f64, points: usize| -> Vec<f64> {
            match points {
                0 => Vec::new(),
                1 => vec![from],
                n => (0..n)
                    .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
                    .collect(),
            }
        };
        match self {
            GridSpec::Explicit(xs) => xs.clone(),
            GridSpec::Linear { from, to, points } => linear(*from, *to, *points),
            GridSpec::SampleRange { points } => linear(0.0, sample.max(), *points),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub x: f64,
    pub ecdf: f64,
    pub model: f64,
}

/// Empirical and model distribution functions on a grid, with the uniform
/// distance as header.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub gof: GofResult,
    pub params: ModelParams,
    pub rows: Vec<PlotRow>,
}

impl PlotTable {
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(self.to_tsv().as_bytes())
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# ks={} m={} r={} lambda={} gamma={}",
            self.gof.ks_distance,
            self.gof.m,
            self.params.r(),
            self.params.lambda(),
            self.params.gamma()
        );
        s.push_str("x\tecdf\tmodel\n");
        for row in &self.rows {
            let _ = writeln!(s, "{}\t{}\t{}", row.x, row.ecdf, row.model);
        }
        s
    }
}

pub fn emit_plot_data(sample: &MaximaSample, p: &ModelParams, grid: &GridSpec) -> PlotTable {
    let table = ecdf(sample);
    let rows = grid
        .resolve(sample)
        .into_iter()
        .map(|x| PlotRow {
            x,
            ecdf: table.eval(x),
            model: if x <= 0.0 { 0.0 } else { limit_cdf(x, p).unwrap_or(0.0) },
        })
        .collect();
    PlotTable {
        gof: ks_model(sample, p),
        params: *p,
        rows,
    }
}
