use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::{GGParams, GammaParams};
use crate::error::{ensure_positive, Error, Result};

/// Gamma density `λ^r x^{r−1} e^{−λx} / Γ(r)` on `x ≥ 0`.
pub fn gamma_pdf(x: f64, p: &GammaParams) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return match p.r() {
            r if r < 1.0 => f64::INFINITY,
            r if r == 1.0 => p.lambda(),
            _ => 0.0,
        };
    }
    let (r, l) = (p.r(), p.lambda());
    (r * l.ln() + (r - 1.0) * x.ln() - l * x - ln_gamma(r)).exp()
}

/// Generalized gamma density `|γ| λ^r x^{γr−1} e^{−λx^γ} / Γ(r)` for `x > 0`.
pub fn gg_pdf(x: f64, p: &GGParams) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let (r, g, l) = (p.r(), p.gamma(), p.lambda());
    let ln_x = x.ln();
    (g.abs().ln() + r * l.ln() + (g * r - 1.0) * ln_x - l * (g * ln_x).exp() - ln_gamma(r)).exp()
}

/// Weibull distribution function `1 − e^{−x^γ}`.
pub fn weibull_cdf(x: f64, gamma: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x.powf(gamma)).exp_m1()
    }
}

/// Fréchet distribution function `e^{−x^{−γ}}`, the law of `1 / W_γ`.
pub fn frechet_cdf(x: f64, gamma: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-x.powf(-gamma)).exp()
    }
}

/// `E S_{α,1}^β = Γ(1 − β/α) / Γ(1 − β)` for `0 < β < α ≤ 1`.
pub fn stable_moment(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (0, 1]",
        });
    }
    if !(beta > 0.0 && beta < alpha) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must lie in (0, alpha)",
        });
    }
    Ok((ln_gamma(1.0 - beta / alpha) - ln_gamma(1.0 - beta)).exp())
}

/// Density of the ratio of two independent `S_{α,1}` variates, `α ∈ (0, 1)`.
pub fn stable_ratio_density(x: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (0, 1); the ratio is degenerate at alpha = 1",
        });
    }
    if !(x > 0.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be > 0",
        });
    }
    let xa = x.powf(alpha);
    let denom = PI * (1.0 + xa * xa + 2.0 * xa * (PI * alpha).cos());
    Ok((PI * alpha).sin() * xa / x / denom)
}

/// Snedecor–Fisher density `r^{r+1} x^{r−1} / (1 + rx)^{r+1}`.
///
/// This is the law of `G_{r,1} / (r G_{1,1})`.
pub fn snedecor_fisher_density(x: f64, r: f64) -> Result<f64> {
    ensure_positive("r", r)?;
    if x < 0.0 {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be >= 0",
        });
    }
    if x == 0.0 {
        return Ok(match r {
            r if r < 1.0 => f64::INFINITY,
            r if r == 1.0 => 1.0,
            _ => 0.0,
        });
    }
    Ok(((r + 1.0) * r.ln() + (r - 1.0) * x.ln() - (r + 1.0) * (r * x).ln_1p()).exp())
}
