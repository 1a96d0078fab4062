use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("moment of order {delta} does not exist (requires delta < gamma = {gamma})")]
    MomentDoesNotExist { delta: f64, gamma: f64 },

    #[error("representation {tag} requires r and gamma in (0, 1], got r = {r}, gamma = {gamma}")]
    RepresentationDomain { tag: &'static str, r: f64, gamma: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("no sign change of the shape equation on s in [{lo}, {hi}]")]
    BracketingFailure { lo: f64, hi: f64 },

    #[error("tau grid is empty")]
    EmptyTauGrid,

    #[error("every tau failed: {}", format_tau_failures(.0))]
    TauScanFailed(Vec<(f64, String)>),

    #[error("regressor log X has zero variance")]
    ZeroVariance,

    #[error("log-likelihood is not finite at the starting point")]
    InvalidStart,

    #[error("no overdispersion (mean = {mean}, variance = {variance}); negative binomial fit unavailable, data are at or beyond the Poisson/geometric boundary")]
    NoOverdispersion { mean: f64, variance: f64 },

    #[error("no wet period of length >= {h} (longest available is {max_len})")]
    EmptySample { h: usize, max_len: usize },

    #[error("empty sample")]
    Empty,

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{0}: input contains no data rows")]
    EmptyInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_tau_failures(failures: &[(f64, String)]) -> String {
    failures
        .iter()
        .map(|(tau, msg)| format!("tau={tau}: {msg}"))
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn ensure_probability(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in (0, 1)",
        })
    }
}
