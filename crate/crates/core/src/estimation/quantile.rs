use super::{MaximaSample, QuantileTriple};
use crate::distributions::ModelParams;
use crate::error::{Error, Result};
use crate::gof::ks_model;

const S_MIN: f64 = 1e-3;
const S_MAX: f64 = 1e3;
const GRID_POINTS: usize = 601;
const S_TOL: f64 = 1e-12;

/// `1 − p^s`
#[inline]
fn one_minus_pow(p: f64, s: f64) -> f64 {
    -(s * p.ln()).exp_m1()
}

#[derive(Debug, Clone, Copy)]
struct QuantilePoints {
    p: [f64; 3],
    ln_x: [f64; 3],
}

impl QuantilePoints {
    fn from_sample(sample: &MaximaSample, q: &QuantileTriple) -> Result<Self> {
        if sample.len() < 4 {
            return Err(Error::DegenerateSample(format!(
                "quantile fitting needs at least 4 maxima, got {}",
                sample.len()
            )));
        }
        let p = q.levels();
        let x = p.map(|pk| sample.order_stat(sample.quantile_index(pk)));
        if !(x[0] < x[1] && x[1] < x[2]) {
            return Err(Error::DegenerateSample(format!(
                "order statistics at levels {p:?} are not strictly increasing: {x:?}"
            )));
        }
        Ok(QuantilePoints {
            p,
            ln_x: x.map(f64::ln),
        })
    }

    fn residual(&self, s: f64) -> f64 {
        let [p1, p2, p3] = self.p;
        let l12 = self.ln_x[0] - self.ln_x[1];
        let l13 = self.ln_x[0] - self.ln_x[2];
        let c = l13 * (p1 / p2).ln() - l12 * (p1 / p3).ln();
        let d1 = one_minus_pow(p1, s);
        (one_minus_pow(p3, s) / d1).ln() * l12 - (one_minus_pow(p2, s) / d1).ln() * l13 - c * s
    }

    /// `γ` and `λ` in closed form given `s = 1/r`.
    fn gamma_lambda(&self, s: f64) -> (f64, f64) {
        let [p1, p2, p3] = self.p;
        let gamma = (s * (p1.ln() - p3.ln()) + one_minus_pow(p3, s).ln() - one_minus_pow(p1, s).ln())
            / (self.ln_x[0] - self.ln_x[2]);
        let ln_lambda = s * p2.ln() - one_minus_pow(p2, s).ln() - gamma * self.ln_x[1];
        (gamma, ln_lambda.exp())
    }

    fn params(&self, s: f64) -> Result<ModelParams> {
        let (gamma, lambda) = self.gamma_lambda(s);
        ModelParams::new(1.0 / s, lambda, gamma)
    }
}

/// Residual of the scalar equation for `s = 1/r` at the three matched
/// quantiles `x` of levels `p`.
pub fn shape_equation_residual(s: f64, p: [f64; 3], x: [f64; 3]) -> f64 {
    QuantilePoints {
        p,
        ln_x: x.map(f64::ln),
    }
    .residual(s)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= S_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves the three-quantile system `X*_([m p_k]) = x(p_k; r, λ, γ)`.
///
/// The equation in `s = 1/r` is bracketed on a log-spaced grid over
/// `[1e−3, 1e3]` and each bracket refined by bisection; the first root giving
/// positive finite `γ` and `λ` is returned.
pub fn fit_quantile(sample: &MaximaSample, q: &QuantileTriple) -> Result<ModelParams> {
    let pts = QuantilePoints::from_sample(sample, q)?;
    let f = |s: f64| pts.residual(s);
    let ratio = (S_MAX / S_MIN).ln() / (GRID_POINTS - 1) as f64;
    let grid = (0..GRID_POINTS).map(|i| S_MIN * (ratio * i as f64).exp());

    let mut prev: Option<(f64, f64)> = None;
    let mut last_err = None;
    for s in grid {
        let fs = f(s);
        if !fs.is_finite() {
            prev = None;
            continue;
        }
        let root = if fs == 0.0 {
            Some(s)
        } else {
            match prev {
                Some((s0, f0)) if (f0 < 0.0) != (fs < 0.0) => Some(bisect(&f, s0, s, f0)),
                _ => None,
            }
        };
        if let Some(root) = root {
            match pts.params(root) {
                Ok(p) => return Ok(p),
                Err(e) => last_err = Some(e),
            }
        }
        prev = Some((s, fs));
    }
    Err(last_err.unwrap_or(Error::BracketingFailure {
        lo: S_MIN,
        hi: S_MAX,
    }))
}

/// Closed-form `γ` and `λ` from the outer and middle quantiles with `r` known.
pub fn fit_quantile_known_r(sample: &MaximaSample, q: &QuantileTriple, r: f64) -> Result<ModelParams> {
    crate::error::ensure_positive("r", r)?;
    let pts = QuantilePoints::from_sample(sample, q)?;
    pts.params(1.0 / r)
}

/// Result of a τ scan over levels `(τ, 1/2, 1 − τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauScanFit {
    pub params: ModelParams,
    pub tau: f64,
    pub ks_distance: f64,
}

/// Fits with levels `(τ, 1/2, 1 − τ)` for each `τ` in the grid and keeps the
/// fit closest to the empirical d.f. in uniform distance (smallest `τ` on ties).
/// With `known_r` the closed forms for `γ` and `λ` are used instead.
pub fn fit_quantile_tau_scan_with(
    sample: &MaximaSample,
    tau_grid: &[f64],
    known_r: Option<f64>,
) -> Result<TauScanFit> {
    if tau_grid.is_empty() {
        return Err(Error::EmptyTauGrid);
    }
    let mut best: Option<TauScanFit> = None;
    let mut failures = Vec::new();
    for &tau in tau_grid {
        let fitted = QuantileTriple::from_tau(tau).and_then(|q| match known_r {
            Some(r) => fit_quantile_known_r(sample, &q, r),
            None => fit_quantile(sample, &q),
        });
        match fitted {
            Ok(params) => {
                let ks = ks_model(sample, &params).ks_distance;
                let better = match &best {
                    None => true,
                    Some(b) => ks < b.ks_distance || (ks == b.ks_distance && tau < b.tau),
                };
                if better {
                    best = Some(TauScanFit {
                        params,
                        tau,
                        ks_distance: ks,
                    });
                }
            }
            Err(e) => failures.push((tau, e.to_string())),
        }
    }
    best.ok_or(Error::TauScanFailed(failures))
}

pub fn fit_quantile_tau_scan(sample: &MaximaSample, tau_grid: &[f64]) -> Result<TauScanFit> {
    fit_quantile_tau_scan_with(sample, tau_grid, None)
}
