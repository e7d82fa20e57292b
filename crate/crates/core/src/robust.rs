//! Median, MAD, and the outlyingness ratio used to rank residuals by depth.
//!
//! Conventions that the rest of the crate relies on:
//!
//! * sorting is stable and ascending; an even-length median averages the two
//!   middle order statistics;
//! * MAD carries no consistency constant, it is the raw median absolute
//!   deviation;
//! * if at least `floor((n + 1) / 2)` sample values are identical (exact
//!   `==`), MAD is defined as 1 and the result is flagged degenerate, so the
//!   outlyingness of the tied majority stays 0 instead of 0/0.

use crate::error::Error;
use crate::Result;

/// Median and MAD of one sample, plus the majority-tie flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocationScale {
    pub median: f64,
    pub mad: f64,
    /// True when a majority of identical values forced `mad = 1`.
    pub degenerate: bool,
}

/// Per-observation outlyingness together with the center and scale used.
#[derive(Debug, Clone, PartialEq)]
pub struct OutlyingnessProfile {
    /// `|x_i - median| / mad` for every observation, in input order.
    pub values: Vec<f64>,
    pub median: f64,
    pub mad: f64,
    pub degenerate: bool,
}

fn check_finite(sample: &[f64]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    match sample.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Median of a sorted slice. Caller guarantees order and non-emptiness.
fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Sample median. Even lengths average the two central order statistics.
pub fn median(sample: &[f64]) -> Result<f64> {
    check_finite(sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(median_of_sorted(&sorted))
}

/// Longest run of exactly equal values in a sorted slice.
fn longest_tie(sorted: &[f64]) -> usize {
    let mut best = 1;
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            best = best.max(run);
        } else {
            run = 1;
        }
    }
    best
}

/// Median and raw MAD (no consistency constant).
///
/// When at least `floor((n + 1) / 2)` values are identical, the deviations
/// of that majority are all zero and MAD would collapse; the scale is then
/// defined as 1 and `degenerate` is set.
pub fn mad(sample: &[f64]) -> Result<LocationScale> {
    check_finite(sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = median_of_sorted(&sorted);
    if longest_tie(&sorted) >= n.div_ceil(2) {
        return Ok(LocationScale {
            median,
            mad: 1.0,
            degenerate: true,
        });
    }
    let mut deviations: Vec<f64> = sorted.iter().map(|v| (v - median).abs()).collect();
    deviations.sort_by(f64::total_cmp);
    Ok(LocationScale {
        median,
        mad: median_of_sorted(&deviations),
        degenerate: false,
    })
}

/// Outlyingness of every observation: distance from the median in MAD units.
///
/// Errors with [`Error::ZeroScale`] if MAD is 0 without a degenerate
/// majority, since the ratio is undefined there.
pub fn outlyingness(sample: &[f64]) -> Result<OutlyingnessProfile> {
    let scale = mad(sample)?;
    if !scale.degenerate && scale.mad == 0.0 {
        return Err(Error::ZeroScale);
    }
    let values = sample
        .iter()
        .map(|v| (v - scale.median).abs() / scale.mad)
        .collect();
    Ok(OutlyingnessProfile {
        values,
        median: scale.median,
        mad: scale.mad,
        degenerate: scale.degenerate,
    })
}
