//! Extremes of daily precipitation within wet periods.
//!
//! When wet-period durations are negative binomial with shape `r` and daily
//! volumes have a regularly varying tail with exponent `γ`, the normalized
//! maximum daily volume within a wet period converges to
//!
//! ```text
//! F(x; r, λ, γ) = (λ x^γ / (1 + λ x^γ))^r,   x ≥ 0.
//! ```
//!
//! This crate evaluates that law and its relatives ([`distributions`]),
//! simulates it through several product representations ([`samplers`]),
//! estimates its parameters ([`estimation`]), turns daily series into
//! samples of per-period maxima ([`pipeline`]) and measures fit ([`gof`]).

pub mod distributions;
pub mod error;
pub mod estimation;
pub mod gof;
pub mod pipeline;
pub mod rng;
pub mod samplers;

pub use distributions::{GGParams, GammaParams, ModelParams, NegBinParams, StableIndex};
pub use error::{Error, Result};
pub use estimation::{FitMethod, FitReport, MaximaSample, QuantileTriple};
pub use gof::{EcdfTable, GofResult};
pub use pipeline::{CensoringSpec, PrecipSeries, WetPeriods};
pub use rng::RngState;
pub use samplers::{LimitSampler, RepresentationTag};
