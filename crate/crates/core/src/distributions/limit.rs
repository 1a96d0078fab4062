use statrs::function::gamma::ln_gamma;

use super::ModelParams;
use crate::error::{ensure_probability, Error, Result};

fn check_nonneg(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be >= 0",
        })
    }
}

/// `−ln F(x) = r · ln(1 + 1/(λ x^γ))`; infinite at `x = 0`.
fn neg_log_cdf(x: f64, p: &ModelParams) -> f64 {
    let t = p.lambda * x.powf(p.gamma);
    p.r * (1.0 / t).ln_1p()
}

/// Distribution function `(λx^γ / (1 + λx^γ))^r`.
pub fn limit_cdf(x: f64, p: &ModelParams) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((-neg_log_cdf(x, p)).exp())
}

/// `1 − F(x)`, accurate in the upper tail.
pub fn limit_survival(x: f64, p: &ModelParams) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(-(-neg_log_cdf(x, p)).exp_m1())
}

/// Density `rγλ^r x^{γr−1} / (1 + λx^γ)^{r+1}` for `x > 0`.
pub fn limit_pdf(x: f64, p: &ModelParams) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "density is defined for x > 0",
        });
    }
    Ok(log_pdf_unchecked(x.ln(), p).exp())
}

/// Log-density at `ln x`, used by the likelihood.
pub(crate) fn log_pdf_unchecked(ln_x: f64, p: &ModelParams) -> f64 {
    let (r, lambda, gamma) = (p.r, p.lambda, p.gamma);
    let z = lambda.ln() + gamma * ln_x;
    r.ln() + gamma.ln() + r * lambda.ln() + (gamma * r - 1.0) * ln_x - (r + 1.0) * softplus(z)
}

/// `ln(1 + e^z)` without overflow.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    if z > 36.0 {
        z + (-z).exp()
    } else {
        z.exp().ln_1p()
    }
}

/// Quantile `(ε^{1/r} / (λ − λε^{1/r}))^{1/γ}` of order `eps ∈ (0, 1)`.
pub fn limit_quantile(eps: f64, p: &ModelParams) -> Result<f64> {
    ensure_probability("eps", eps)?;
    let a = eps.ln() / p.r;
    // ε^{1/r} / (1 − ε^{1/r}) with the denominator from expm1
    let ratio = a.exp() / -a.exp_m1();
    Ok((ratio / p.lambda).powf(1.0 / p.gamma))
}

/// Moment `E M^δ = Γ(r + δ/γ) Γ(1 − δ/γ) / (λ^{δ/γ} Γ(r))`, finite only for `δ < γ`.
pub fn limit_moment(delta: f64, p: &ModelParams) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "must be finite and > 0",
        });
    }
    if delta >= p.gamma {
        return Err(Error::MomentDoesNotExist {
            delta,
            gamma: p.gamma,
        });
    }
    let d = delta / p.gamma;
    Ok((ln_gamma(p.r + d) + ln_gamma(1.0 - d) - d * p.lambda.ln() - ln_gamma(p.r)).exp())
}
