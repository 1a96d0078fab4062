//! Estimation of `(r, λ, γ)` from a sample of wet-period maxima, and of the
//! negative binomial law of wet-period durations.
//!
//! * [`fit_quantile`] matches three empirical quantiles to the explicit
//!   quantile function; [`fit_quantile_known_r`] does the same with `r` given.
//! * [`fit_least_squares`] regresses the linearized empirical d.f. for known `r`.
//! * [`fit_mle`] refines any starting point by direct search on the likelihood.
//! * [`fit_negbin`] fits durations (shifted to start at 0).

mod least_squares;
mod mle;
mod negbin;
mod quantile;
mod simplex;

pub use least_squares::{fit_least_squares, least_squares_objective, LeastSquaresFit};
pub use mle::{fit_mle, log_likelihood};
pub use negbin::{fit_negbin, negbin_profile_log_likelihood};
pub use quantile::{
    fit_quantile, fit_quantile_known_r, fit_quantile_tau_scan, fit_quantile_tau_scan_with, shape_equation_residual,
    TauScanFit,
};
pub use simplex::{minimize as simplex_minimize, SimplexOptions, SimplexResult};

use serde::{Deserialize, Serialize};

use crate::distributions::ModelParams;
use crate::error::{Error, Result};
use crate::gof::ks_model;

/// Per-period maxima `X*_1, …, X*_m` with a sorted copy.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximaSample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl MaximaSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(&bad) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "maximum",
                value: bad,
                reason: "sample values must be finite and > 0",
            });
        }
        let mut sorted = values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(MaximaSample { values, sorted })
    }

    /// Values in their original (period) order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics `X*_(1) ≤ … ≤ X*_(m)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Order statistic `X*_(i)`, 1-based.
    pub fn order_stat(&self, i: usize) -> f64 {
        self.sorted[i - 1]
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().expect("nonempty")
    }

    /// Index `[m p]` (integer part) clamped to `[1, m]`.
    pub fn quantile_index(&self, p: f64) -> usize {
        let m = self.len();
        ((m as f64 * p).floor() as usize).clamp(1, m)
    }
}

/// Probability levels `0 < p1 < p2 < p3 < 1` for quantile matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileTriple {
    p: [f64; 3],
}

impl QuantileTriple {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        if !(p1 > 0.0 && p1 < p2 && p2 < p3 && p3 < 1.0) {
            return Err(Error::InvalidParameter {
                name: "quantile levels",
                value: p1,
                reason: "need 0 < p1 < p2 < p3 < 1",
            });
        }
        Ok(QuantileTriple { p: [p1, p2, p3] })
    }

    /// `(τ, 1/2, 1 − τ)` for `τ ∈ (0, 1/4)`.
    pub fn from_tau(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 0.25) {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau,
                reason: "must lie in (0, 1/4)",
            });
        }
        QuantileTriple::new(tau, 0.5, 1.0 - tau)
    }

    pub fn levels(&self) -> [f64; 3] {
        self.p
    }
}

impl Default for QuantileTriple {
    /// `p_k = k/4`.
    fn default() -> Self {
        QuantileTriple {
            p: [0.25, 0.5, 0.75],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    QuantileRough,
    LeastSquares,
    Mle,
}

impl FitMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FitMethod::QuantileRough => "quantile-rough",
            FitMethod::LeastSquares => "least-squares",
            FitMethod::Mle => "mle",
        }
    }
}

/// Fitted parameters with the uniform distance to the empirical d.f.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub method: FitMethod,
    pub params: ModelParams,
    pub ks_distance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_likelihood: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    /// Chosen `τ` when the levels came from a τ scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

impl FitReport {
    /// Report for a closed-form fit; only the KS distance is computed.
    pub fn closed_form(method: FitMethod, sample: &MaximaSample, params: ModelParams) -> Self {
        FitReport {
            method,
            params,
            ks_distance: ks_model(sample, &params).ks_distance,
            log_likelihood: None,
            iterations: None,
            converged: None,
            tau: None,
        }
    }
}
