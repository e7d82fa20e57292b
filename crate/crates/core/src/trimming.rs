//! Trimmed regression criteria: which rows to keep and what to minimize.
//!
//! Two families are provided. `objective_lts` is the least-trimmed-squares
//! criterion, the sum of the `h` smallest squared residuals. `objective_lst`
//! keeps rows whose residual outlyingness is at most `alpha` (at least half
//! the rows for `alpha >= 1` on tie-free data) and sums their squared
//! residuals; `objective_lst_k` is the fixed-count variant that keeps the
//! `k` deepest residuals instead of thresholding.

use serde::Serialize;

use crate::error::Error;
use crate::regression::{residuals, Coefficients, Dataset};
use crate::robust::{outlyingness, OutlyingnessProfile};
use crate::Result;

/// Threshold configuration for outlyingness trimming.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrimConfig {
    alpha: f64,
}

impl TrimConfig {
    /// Requires `alpha >= 1`; smaller thresholds could trim a majority.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha must be a finite value >= 1, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for TrimConfig {
    /// The conventional working threshold of 3 MAD units.
    fn default() -> Self {
        Self { alpha: 3.0 }
    }
}

/// Rows kept by an outlyingness threshold, with the profile that chose them.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimSet {
    /// Sorted 0-based row indices with outlyingness <= alpha.
    pub indices: Vec<usize>,
    /// The residual outlyingness profile the selection was based on.
    pub profile: OutlyingnessProfile,
}

/// Rows whose residual outlyingness under `beta` is at most `alpha`.
///
/// Boundary ties are kept: the comparison is `<=`.
pub fn trim_set(d: &Dataset, beta: &Coefficients, config: TrimConfig) -> Result<TrimSet> {
    let r = residuals(d, beta)?;
    let profile = outlyingness(&r)?;
    let indices = profile
        .values
        .iter()
        .enumerate()
        .filter(|(_, o)| **o <= config.alpha)
        .map(|(i, _)| i)
        .collect();
    Ok(TrimSet { indices, profile })
}

/// Sum of squared residuals over the rows kept by [`trim_set`].
pub fn objective_lst(d: &Dataset, beta: &Coefficients, config: TrimConfig) -> Result<f64> {
    let kept = trim_set(d, beta, config)?;
    let r = residuals(d, beta)?;
    Ok(kept.indices.iter().map(|&i| r[i] * r[i]).sum())
}

/// Sum of squared residuals over the `k` rows with smallest outlyingness.
///
/// Ties in outlyingness are broken toward the smaller row index, and the
/// kept squares are summed in row order.
pub fn objective_lst_k(d: &Dataset, beta: &Coefficients, k: usize) -> Result<f64> {
    let n = d.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "k must be in 1..={n}, got {k}"
        )));
    }
    let r = residuals(d, beta)?;
    let profile = outlyingness(&r)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        profile.values[a]
            .total_cmp(&profile.values[b])
            .then(a.cmp(&b))
    });
    let mut kept = order[..k].to_vec();
    kept.sort_unstable();
    Ok(kept.iter().map(|&i| r[i] * r[i]).sum())
}

/// Sum of the `h` smallest squared residuals.
pub fn objective_lts(d: &Dataset, beta: &Coefficients, h: usize) -> Result<f64> {
    let n = d.n();
    if h == 0 || h > n {
        return Err(Error::InvalidParameter(format!(
            "h must be in 1..={n}, got {h}"
        )));
    }
    let mut squares: Vec<f64> = residuals(d, beta)?.iter().map(|r| r * r).collect();
    squares.sort_by(f64::total_cmp);
    Ok(squares[..h].iter().sum())
}

/// Rule for picking the trimming count `h` from the data shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HRule {
    /// `floor((n + p + 1) / 2)`, the default used by ltsReg-style software.
    LtsRegDefault,
    /// `floor(n / 2) + floor((p + 1) / 2)`, the breakdown-optimal choice.
    BreakdownOptimal,
}

/// Default trimming count for `n` observations and `p` coefficients.
pub fn default_h(n: usize, p: usize, rule: HRule) -> Result<usize> {
    if p < 2 || n < p {
        return Err(Error::InvalidParameter(format!(
            "need n >= p >= 2, got n = {n}, p = {p}"
        )));
    }
    Ok(match rule {
        HRule::LtsRegDefault => (n + p).div_ceil(2),
        HRule::BreakdownOptimal => n / 2 + p.div_ceil(2),
    })
}
