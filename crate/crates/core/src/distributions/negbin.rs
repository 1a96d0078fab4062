use statrs::function::gamma::ln_gamma;

use super::NegBinParams;
use crate::error::{ensure_positive, ensure_probability, Error, Result};

/// `P(N = k) = Γ(r + k) p^r (1 − p)^k / (k! Γ(r))`.
pub fn negbin_pmf(k: u64, p: &NegBinParams) -> f64 {
    let kf = k as f64;
    let (r, prob) = (p.r(), p.p());
    (ln_gamma(r + kf) - ln_gamma(kf + 1.0) - ln_gamma(r) + r * prob.ln() + kf * (-prob).ln_1p())
        .exp()
}

fn check_mixing_shape(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "mixing density exists for r in (0, 1); r = 1 is the pure geometric case",
        })
    }
}

/// `ln(1 / (Γ(1 − r) Γ(r)))`
fn ln_mixing_norm(r: f64) -> f64 {
    -(ln_gamma(1.0 - r) + ln_gamma(r))
}

/// Density of the random success odds `Z_{r,μ}` that mixes geometric laws
/// into `N_{r,p}`:
/// `μ^r / (Γ(1−r)Γ(r)) · 1(z ≥ μ) / ((z − μ)^r z)`.
pub fn theorem1_mixing_density_z(z: f64, r: f64, mu: f64) -> Result<f64> {
    check_mixing_shape(r)?;
    ensure_positive("mu", mu)?;
    if z < mu {
        return Ok(0.0);
    }
    if z == mu {
        return Ok(f64::INFINITY);
    }
    Ok((ln_mixing_norm(r) + r * mu.ln() - r * (z - mu).ln() - z.ln()).exp())
}

/// Density of the random success probability `Y_{r,p}`:
/// `p^r / (Γ(1−r)Γ(r)) · (1 − y)^{r−1} / (y (y − p)^r)` on `p < y < 1`.
pub fn theorem1_mixing_density_y(y: f64, r: f64, p: f64) -> Result<f64> {
    check_mixing_shape(r)?;
    ensure_probability("p", p)?;
    if !(y > p && y < 1.0) {
        return Ok(0.0);
    }
    Ok((ln_mixing_norm(r) + r * p.ln() + (r - 1.0) * (-y).ln_1p() - y.ln() - r * (y - p).ln()).exp())
}
