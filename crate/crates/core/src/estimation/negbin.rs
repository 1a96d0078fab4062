use std::collections::BTreeMap;

use statrs::function::gamma::ln_gamma;

use crate::distributions::NegBinParams;
use crate::error::{Error, Result};

/// Counts `k ↦ multiplicity` of the shifted durations.
struct CountTable {
    counts: BTreeMap<u64, u64>,
    n: f64,
    mean: f64,
}

impl CountTable {
    fn profile(&self, r: f64) -> f64 {
        let lg_r = ln_gamma(r);
        let body: f64 = self
            .counts
            .iter()
            .map(|(&k, &c)| c as f64 * (ln_gamma(r + k as f64) - lg_r))
            .sum();
        let denom = r + self.mean;
        body + self.n * r * (r / denom).ln() + self.n * self.mean * (self.mean / denom).ln()
    }
}

fn shifted_table(durations: &[u64]) -> Result<CountTable> {
    let mut counts = BTreeMap::new();
    for &d in durations {
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "duration",
                value: 0.0,
                reason: "wet-period durations are >= 1 day",
            });
        }
        *counts.entry(d - 1).or_insert(0u64) += 1;
    }
    if counts.len() < 2 {
        let mean = counts.keys().next().map_or(0.0, |&k| k as f64);
        return Err(Error::NoOverdispersion {
            mean,
            variance: 0.0,
        });
    }
    let n = durations.len() as f64;
    let mean = counts.iter().map(|(&k, &c)| (k * c) as f64).sum::<f64>() / n;
    Ok(CountTable { counts, n, mean })
}

/// Profile log-likelihood of `r` for durations shifted by one, with `p`
/// profiled out as `r / (r + mean)` (constant `−Σ ln k!` dropped).
pub fn negbin_profile_log_likelihood(durations: &[u64], r: f64) -> Result<f64> {
    Ok(shifted_table(durations)?.profile(r))
}

/// Fits `N_{r,p}` to wet-period durations minus one.
///
/// Starts from the method-of-moments shape `mean² / (var − mean)` and maximizes
/// the profile likelihood over `ln r` by golden-section search.
pub fn fit_negbin(durations: &[u64]) -> Result<NegBinParams> {
    let table = shifted_table(durations)?;
    let (n, mean) = (table.n, table.mean);
    let variance = table
        .counts
        .iter()
        .map(|(&k, &c)| c as f64 * (k as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    if !(variance > mean) || mean <= 0.0 {
        return Err(Error::NoOverdispersion { mean, variance });
    }
    let r0 = mean * mean / (variance - mean);

    let f = |t: f64| table.profile(t.exp());
    let (mut lo, mut hi) = (r0.ln() - 8.0, r0.ln() + 8.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-10 {
        if fa > fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    let r = (0.5 * (lo + hi)).exp();
    NegBinParams::new(r, r / (r + mean))
}
