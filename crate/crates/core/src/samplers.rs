//! Random-variate generation for the limit law and every variable used to
//! represent it.
//!
//! All samplers are pure functions of their parameters and the generator, so
//! a fixed [`RngState`](crate::rng::RngState) seed reproduces the stream
//! bit for bit. Products and ratios are accumulated in log space.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::distributions::{GammaParams, ModelParams, NegBinParams, StableIndex};
use crate::error::{ensure_probability, Error, Result};
use crate::rng::open01;

#[inline]
fn ln_exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (-open01(rng).ln()).ln()
}

/// `ln G_{shape,1}`; `−∞` for the degenerate shape 0.
///
/// Marsaglia–Tsang squeeze for shape ≥ 1. Smaller shapes draw at `shape + 1`
/// and multiply by `U^{1/shape}`.
pub(crate) fn ln_std_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape == 0.0 {
        return f64::NEG_INFINITY;
    }
    if shape < 1.0 {
        return ln_std_gamma(shape + 1.0, rng) + open01(rng).ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = open01(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return (d * v).ln();
        }
    }
}

/// Gamma variate `G_{r,λ}` (shape `r`, rate `λ`).
pub fn sample_gamma<R: Rng + ?Sized>(p: &GammaParams, rng: &mut R) -> f64 {
    (ln_std_gamma(p.r(), rng) - p.lambda().ln()).exp()
}

/// Weibull variate `W_γ = W_1^{1/γ}` with distribution function `1 − e^{−x^γ}`.
///
/// # Panics
/// If `gamma` is not positive.
pub fn sample_weibull<R: Rng + ?Sized>(gamma: f64, rng: &mut R) -> f64 {
    assert!(gamma > 0.0, "Weibull exponent must be positive");
    (ln_exp1(rng) / gamma).exp()
}

/// `ln S_{α,1}` by Kanter's representation; `0` (the point mass at 1) for `α = 1`.
pub(crate) fn ln_stable_onesided<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 0.0;
    }
    let u = PI * open01(rng);
    let ln_sin_au = (alpha * u).sin().ln();
    let ln_a = (ln_sin_au - u.sin().ln()) / (1.0 - alpha) + ((1.0 - alpha) * u).sin().ln() - ln_sin_au;
    (1.0 - alpha) / alpha * (ln_a - ln_exp1(rng))
}

/// One-sided strictly stable variate `S_{α,1}` with Laplace transform `e^{−s^α}`.
pub fn sample_stable_onesided<R: Rng + ?Sized>(idx: StableIndex, rng: &mut R) -> f64 {
    ln_stable_onesided(idx.alpha(), rng).exp()
}

#[inline]
fn ln_stable_ratio<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 0.0;
    }
    ln_stable_onesided(alpha, rng) - ln_stable_onesided(alpha, rng)
}

/// Ratio `R_α = S_{α,1} / S'_{α,1}` of independent one-sided stable variates.
/// For `α = 1` the ratio is identically 1.
pub fn sample_stable_ratio<R: Rng + ?Sized>(idx: StableIndex, rng: &mut R) -> f64 {
    ln_stable_ratio(idx.alpha(), rng).exp()
}

#[inline]
fn ln_z<R: Rng + ?Sized>(r: f64, mu: f64, rng: &mut R) -> f64 {
    if r == 1.0 {
        return mu.ln();
    }
    let ln_gr = ln_std_gamma(r, rng);
    let ln_g1r = ln_std_gamma(1.0 - r, rng);
    mu.ln() + (ln_g1r - ln_gr).exp().ln_1p()
}

/// Mixing variable `Z_{r,μ} = μ (G_{r,1} + G_{1−r,1}) / G_{r,1}`.
///
/// At `r = 1` the mixing law is the point mass at `μ`.
///
/// # Panics
/// If `r ∉ (0, 1]` or `mu ≤ 0`.
pub fn sample_z<R: Rng + ?Sized>(r: f64, mu: f64, rng: &mut R) -> f64 {
    assert!(r > 0.0 && r <= 1.0, "Z requires r in (0, 1]");
    assert!(mu > 0.0, "Z requires mu > 0");
    ln_z(r, mu, rng).exp()
}

/// Negative binomial variate, drawn as Poisson with a `G_{r,μ}` random mean.
pub fn sample_negbin<R: Rng + ?Sized>(p: &NegBinParams, rng: &mut R) -> u64 {
    let mean = (ln_std_gamma(p.r(), rng) - p.mu().ln()).exp();
    poisson(mean, rng)
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    if mean > Poisson::<f64>::MAX_LAMBDA {
        return mean as u64;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
}

/// Product representations of the limit variable `M_{r,γ,λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepresentationTag {
    /// `G_{r,λ}^{1/γ} / W_γ`
    Direct,
    /// `G_{r,λ}^{1/γ} S_{γ,1} / W_1`
    StableForm,
    /// `(W_γ / W'_γ) · Z_{r,λ}^{−1/γ}`
    WeibullRatio,
    /// `Π R_γ / Z_{r,λ}^{1/γ}` with `P(Π > x) = 1/(1 + x)`
    ParetoRatio,
    /// `|X| √(2W_1) R_γ / (W'_1 Z_{r,λ}^{1/γ})`
    FoldedNormal,
    /// Exponential variate with random rate `W_1 R_γ Z_{r,λ}^{1/γ}`
    MixedExponential,
    /// `(r Q / λ)^{1/γ}` with `Q` Snedecor–Fisher, density `r^{r+1}x^{r−1}/(1+rx)^{r+1}`
    SnedecorFisher,
}

impl RepresentationTag {
    pub const ALL: [RepresentationTag; 7] = [
        RepresentationTag::Direct,
        RepresentationTag::StableForm,
        RepresentationTag::WeibullRatio,
        RepresentationTag::ParetoRatio,
        RepresentationTag::FoldedNormal,
        RepresentationTag::MixedExponential,
        RepresentationTag::SnedecorFisher,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RepresentationTag::Direct => "direct",
            RepresentationTag::StableForm => "stable-form",
            RepresentationTag::WeibullRatio => "weibull-ratio",
            RepresentationTag::ParetoRatio => "pareto-ratio",
            RepresentationTag::FoldedNormal => "folded-normal",
            RepresentationTag::MixedExponential => "mixed-exponential",
            RepresentationTag::SnedecorFisher => "snedecor-fisher",
        }
    }

    /// Whether the representation needs `r ∈ (0, 1]` and `γ ∈ (0, 1]`.
    pub fn requires_unit_domain(self) -> bool {
        !matches!(self, RepresentationTag::Direct | RepresentationTag::SnedecorFisher)
    }
}

impl fmt::Display for RepresentationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepresentationTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RepresentationTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = RepresentationTag::ALL.iter().map(|t| t.as_str()).collect();
                format!("unknown representation `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Sampler for the limit law through a chosen representation.
#[derive(Debug, Clone, Copy)]
pub struct LimitSampler {
    params: ModelParams,
    tag: RepresentationTag,
}

impl LimitSampler {
    pub fn new(params: ModelParams, tag: RepresentationTag) -> Result<Self> {
        let in_unit = |v: f64| v > 0.0 && v <= 1.0;
        if tag.requires_unit_domain() && !(in_unit(params.r()) && in_unit(params.gamma())) {
            return Err(Error::RepresentationDomain {
                tag: tag.as_str(),
                r: params.r(),
                gamma: params.gamma(),
            });
        }
        Ok(LimitSampler { params, tag })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn tag(&self) -> RepresentationTag {
        self.tag
    }

    fn ln_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (r, lambda, gamma) = (self.params.r(), self.params.lambda(), self.params.gamma());
        let ln_lambda = lambda.ln();
        match self.tag {
            RepresentationTag::Direct => (ln_std_gamma(r, rng) - ln_lambda - ln_exp1(rng)) / gamma,
            RepresentationTag::StableForm => {
                (ln_std_gamma(r, rng) - ln_lambda) / gamma + ln_stable_onesided(gamma, rng)
                    - ln_exp1(rng)
            }
            RepresentationTag::WeibullRatio => {
                (ln_exp1(rng) - ln_exp1(rng) - ln_z(r, lambda, rng)) / gamma
            }
            RepresentationTag::ParetoRatio => {
                let u = open01(rng);
                let ln_pareto = ((1.0 - u) / u).ln();
                ln_pareto + ln_stable_ratio(gamma, rng) - ln_z(r, lambda, rng) / gamma
            }
            RepresentationTag::FoldedNormal => {
                let x: f64 = rng.sample(StandardNormal);
                x.abs().ln() + 0.5 * (2f64.ln() + ln_exp1(rng)) + ln_stable_ratio(gamma, rng)
                    - ln_exp1(rng)
                    - ln_z(r, lambda, rng) / gamma
            }
            RepresentationTag::MixedExponential => {
                let ln_rate = ln_exp1(rng) + ln_stable_ratio(gamma, rng) + ln_z(r, lambda, rng) / gamma;
                ln_exp1(rng) - ln_rate
            }
            RepresentationTag::SnedecorFisher => {
                // Q by inversion of P(Q < x) = (rx / (1 + rx))^r
                let a = open01(rng).ln() / r;
                let ln_rq = a - (-a.exp_m1()).ln();
                (ln_rq - ln_lambda) / gamma
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.ln_sample(rng).exp()
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

impl Distribution<f64> for LimitSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        LimitSampler::sample(self, rng)
    }
}

/// One draw of `M_{r,γ,λ}` through representation `tag`.
pub fn sample_limit<R: Rng + ?Sized>(
    p: &ModelParams,
    tag: RepresentationTag,
    rng: &mut R,
) -> Result<f64> {
    Ok(LimitSampler::new(*p, tag)?.sample(rng))
}

/// Normalized maximum of a negative-binomial number of Pareto variates.
///
/// The count is `N ~ NegBin(r, p_n)` with `p_n = min(q, λ/n)`; the summands
/// have distribution function `1 − x^{−γ}` on `x ≥ 1` and the maximum is
/// divided by `F^{−1}(1 − 1/n) = n^{1/γ}`. Its law tends to
/// `F(x; r, λ, γ)` as `n → ∞`. An empty maximum (`N = 0`) is reported as 0.
#[derive(Debug, Clone, Copy)]
pub struct PrelimitMax {
    n: u64,
    count: NegBinParams,
    gamma: f64,
}

impl PrelimitMax {
    pub fn new(n: u64, params: &ModelParams, q: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "must be >= 1",
            });
        }
        ensure_probability("q", q)?;
        let p_n = q.min(params.lambda() / n as f64);
        Ok(PrelimitMax {
            n,
            count: NegBinParams::new(params.r(), p_n)?,
            gamma: params.gamma(),
        })
    }

    pub fn count_law(&self) -> &NegBinParams {
        &self.count
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let count = sample_negbin(&self.count, rng);
        if count == 0 {
            return 0.0;
        }
        // the maximum of N uniforms is U^{1/N}; invert the Pareto d.f. at it
        let ln_u = open01(rng).ln() / count as f64;
        let ln_max = -(-ln_u.exp_m1()).ln() / self.gamma;
        (ln_max - (self.n as f64).ln() / self.gamma).exp()
    }
}

/// One draw of the normalized pre-limit maximum; the Pareto tail index is
/// `params.gamma()`.
pub fn simulate_prelimit_max<R: Rng + ?Sized>(
    n: u64,
    params: &ModelParams,
    q: f64,
    rng: &mut R,
) -> Result<f64> {
    Ok(PrelimitMax::new(n, params, q)?.sample(rng))
}
