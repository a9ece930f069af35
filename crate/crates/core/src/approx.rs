//! Log-linear estimator: fit `ln π_k ≈ a·k + b` on small `k`, extrapolate.

use crate::count::ln_biguint;
use crate::counting::CountingFunction;
use crate::error::{Error, Result};
use crate::stats::linear_fit;
use crate::words::Word;

/// Default fitting range, `15..=25`.
pub const DEFAULT_FIT_RANGE: (usize, usize) = (15, 25);

/// The slope is not capped at `ln|Σ|`: `π_{k+1} / π_k` can exceed `|Σ|` at small
/// `k` (e.g. 22276 / 4831 for `w = γ = AAA`, `k = 8`), so short-range fits may
/// overshoot the asymptotic growth rate.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(k, ln π_k)`
    pub fit_points: Vec<(usize, f64)>,
    pub residual_sse: f64,
}

impl RegressionFit {
    /// Predicted `ln π_k`.
    pub fn predict(&self, k: usize) -> f64 {
        self.slope * k as f64 + self.intercept
    }
}

/// Ordinary least squares on `(k, ln π_k^γ(w))` for each `k` in `k_values`.
pub fn fit(w: &Word, gamma: &Word, k_values: &[usize]) -> Result<RegressionFit> {
    let mut distinct = k_values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::invalid("regression needs at least 2 distinct k values"));
    }
    let function = CountingFunction::new(w, gamma)?;
    let counts = function.count_many(k_values)?;
    let mut fit_points = Vec::with_capacity(k_values.len());
    for (&k, count) in k_values.iter().zip(&counts) {
        if count.bits() == 0 {
            return Err(Error::DegenerateMinimizer { k });
        }
        fit_points.push((k, ln_biguint(count)));
    }
    let xs: Vec<f64> = fit_points.iter().map(|&(k, _)| k as f64).collect();
    let ys: Vec<f64> = fit_points.iter().map(|&(_, y)| y).collect();
    let (slope, intercept) = linear_fit(&xs, &ys)
        .ok_or_else(|| Error::Internal("least squares failed on distinct k values".into()))?;
    let residual_sse = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    Ok(RegressionFit {
        slope,
        intercept,
        fit_points,
        residual_sse,
    })
}

/// `lo..=hi` as a list of k values.
pub fn k_range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}
