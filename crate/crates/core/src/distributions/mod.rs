//! Closed-form evaluation of the limit law of the wet-period maximum and of
//! its component distributions.
//!
//! The limit law has distribution function
//!
//! ```text
//! F(x; r, λ, γ) = (λ x^γ / (1 + λ x^γ))^r,   x ≥ 0,
//! ```
//!
//! a gamma scale mixture of the Fréchet law. Gamma-function ratios are
//! evaluated through `ln Γ` so that large shape arguments do not overflow.

mod components;
pub(crate) mod limit;
mod negbin;

pub use components::{
    frechet_cdf, gamma_pdf, gg_pdf, snedecor_fisher_density, stable_moment,
    stable_ratio_density, weibull_cdf,
};
pub use limit::{limit_cdf, limit_moment, limit_pdf, limit_quantile, limit_survival};
pub use negbin::{negbin_pmf, theorem1_mixing_density_y, theorem1_mixing_density_z};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, ensure_probability, Error, Result};

/// Parameters `(r, λ, γ)` of the limit law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams")]
pub struct ModelParams {
    r: f64,
    lambda: f64,
    gamma: f64,
}

#[derive(Deserialize)]
struct RawModelParams {
    r: f64,
    lambda: f64,
    gamma: f64,
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawModelParams) -> Result<Self> {
        ModelParams::new(raw.r, raw.lambda, raw.gamma)
    }
}

impl ModelParams {
    pub fn new(r: f64, lambda: f64, gamma: f64) -> Result<Self> {
        ensure_positive("r", r)?;
        ensure_positive("lambda", lambda)?;
        ensure_positive("gamma", gamma)?;
        Ok(ModelParams { r, lambda, gamma })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Gamma law `G_{r,λ}` with shape `r` and rate `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    r: f64,
    lambda: f64,
}

impl GammaParams {
    pub fn new(r: f64, lambda: f64) -> Result<Self> {
        ensure_positive("r", r)?;
        ensure_positive("lambda", lambda)?;
        Ok(GammaParams { r, lambda })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Generalized gamma law with density `|γ| λ^r / Γ(r) · x^{γr−1} e^{−λ x^γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGParams {
    r: f64,
    gamma: f64,
    lambda: f64,
}

impl GGParams {
    pub fn new(r: f64, gamma: f64, lambda: f64) -> Result<Self> {
        ensure_positive("r", r)?;
        ensure_positive("lambda", lambda)?;
        if gamma == 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "must be finite and nonzero",
            });
        }
        Ok(GGParams { r, gamma, lambda })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Negative binomial law `N_{r,p}` on `{0, 1, 2, …}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNegBin")]
pub struct NegBinParams {
    r: f64,
    p: f64,
}

#[derive(Deserialize)]
struct RawNegBin {
    r: f64,
    p: f64,
}

impl TryFrom<RawNegBin> for NegBinParams {
    type Error = Error;

    fn try_from(raw: RawNegBin) -> Result<Self> {
        NegBinParams::new(raw.r, raw.p)
    }
}

impl NegBinParams {
    pub fn new(r: f64, p: f64) -> Result<Self> {
        ensure_positive("r", r)?;
        ensure_probability("p", p)?;
        Ok(NegBinParams { r, p })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Rate `μ = p / (1 − p)` of the gamma mixing law.
    pub fn mu(&self) -> f64 {
        self.p / (1.0 - self.p)
    }

    pub fn mean(&self) -> f64 {
        self.r * (1.0 - self.p) / self.p
    }

    pub fn variance(&self) -> f64 {
        self.r * (1.0 - self.p) / (self.p * self.p)
    }
}

/// Characteristic exponent of a one-sided strictly stable law `S_{α,1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableIndex(f64);

impl StableIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(StableIndex(alpha))
        } else {
            Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must lie in (0, 1]",
            })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_params_rejects_nonpositive() {
        assert!(ModelParams::new(0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, f64::NAN).is_err());
        // no upper bound on r
        assert!(ModelParams::new(25.0, 1.0, 3.0).is_ok());
    }

    #[test]
    fn model_params_serde_validates() {
        let p: ModelParams = serde_json::from_str(r#"{"r":0.8,"lambda":2.0,"gamma":1.4}"#).unwrap();
        assert_eq!(p, ModelParams::new(0.8, 2.0, 1.4).unwrap());
        assert!(serde_json::from_str::<ModelParams>(r#"{"r":-1,"lambda":2.0,"gamma":1.4}"#).is_err());
    }

    #[test]
    fn other_param_domains() {
        assert!(GGParams::new(1.0, 0.0, 1.0).is_err());
        assert!(GGParams::new(1.0, -2.0, 1.0).is_ok());
        assert!(NegBinParams::new(0.5, 1.0).is_err());
        assert!(NegBinParams::new(0.5, 0.0).is_err());
        assert!(StableIndex::new(0.0).is_err());
        assert!(StableIndex::new(1.0).is_ok());
        assert!(StableIndex::new(1.2).is_err());
        let nb = NegBinParams::new(0.847, 0.322).unwrap();
        assert!((nb.mean() - 0.847 * 0.678 / 0.322).abs() < 1e-12);
        assert!((nb.mu() - 0.322 / 0.678).abs() < 1e-15);
    }
}
