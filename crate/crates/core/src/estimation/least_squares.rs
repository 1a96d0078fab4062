use super::MaximaSample;
use crate::error::{ensure_positive, Error, Result};

/// Closed-form least-squares estimates for known `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeastSquaresFit {
    pub lambda: f64,
    pub gamma: f64,
}

/// Regression targets `c_i = ln(i^{1/r} / (m^{1/r} − i^{1/r}))`, `i = 1..m−1`.
fn targets(m: usize, r: f64) -> impl Iterator<Item = f64> {
    // c_i = −ln((m/i)^{1/r} − 1)
    (1..m).map(move |i| -(((m as f64 / i as f64).ln() / r).exp_m1()).ln())
}

/// `Σ_{i=1}^{m−1} (ln λ + γ ln X*_(i) − c_i)²`.
pub fn least_squares_objective(sample: &MaximaSample, r: f64, ln_lambda: f64, gamma: f64) -> f64 {
    let m = sample.len();
    sample
        .sorted()
        .iter()
        .zip(targets(m, r))
        .map(|(x, c)| {
            let e = ln_lambda + gamma * x.ln() - c;
            e * e
        })
        .sum()
}

/// Least-squares fit of `ln λ + γ ln X*_(i) ≈ c_i` over the order statistics
/// `i = 1..m−1` (the sample maximum has no finite target).
pub fn fit_least_squares(sample: &MaximaSample, r: f64) -> Result<LeastSquaresFit> {
    ensure_positive("r", r)?;
    let m = sample.len();
    if m < 3 {
        return Err(Error::DegenerateSample(format!(
            "least squares needs at least 3 maxima, got {m}"
        )));
    }
    let n = (m - 1) as f64;
    let (mut sx, mut sc, mut sxx, mut sxc) = (0.0, 0.0, 0.0, 0.0);
    for (x, c) in sample.sorted()[..m - 1].iter().zip(targets(m, r)) {
        let lx = x.ln();
        sx += lx;
        sc += c;
        sxx += lx * lx;
        sxc += lx * c;
    }
    // centered sums are less prone to cancellation than the raw normal equations
    let mean_x = sx / n;
    let mean_c = sc / n;
    let var = sxx - n * mean_x * mean_x;
    let cov = sxc - n * mean_x * mean_c;
    let spread = sample.sorted()[m - 2].ln() - sample.sorted()[0].ln();
    if !(spread > 0.0) || !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let gamma = cov / var;
    let lambda = (mean_c - gamma * mean_x).exp();
    if !(gamma > 0.0 && lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::DegenerateSample(format!(
            "least squares produced gamma = {gamma}, lambda = {lambda}"
        )));
    }
    Ok(LeastSquaresFit { lambda, gamma })
}
