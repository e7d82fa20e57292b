//! Least trimmed squares: minimize the sum of the `h` smallest squared
//! residuals.
//!
//! Two search modes are provided. The exhaustive mode fits least squares on
//! every `h`-subset (guarded by a hard cap on the subset count) and keeps
//! the fit whose full-data criterion is smallest; it is exact within the
//! subset-fit search space and serves as ground truth for the fast mode.
//! The concentration mode is the usual FAST-LTS scheme: random size-`p`
//! starts grown to `h` rows, improved by concentration steps that refit on
//! the current `h` rows and then re-select the `h` smallest residuals.

use std::time::Instant;

use itertools::Itertools;
use serde::Serialize;

use crate::error::Error;
use crate::regression::{ls_fit, residuals, Coefficients, Dataset, FitResult};
use crate::rng::stream_rng;
use crate::trimming::objective_lts;
use crate::Result;

/// Hard cap on the number of subsets the exhaustive mode may enumerate.
pub const MAX_EXHAUSTIVE_SUBSETS: u64 = 1_000_000;

/// Search mode selector for [`lts_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LtsMode {
    Exhaustive,
    Concentration,
}

/// Parameters for the least-trimmed-squares search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LtsConfig {
    /// Number of residuals whose squares are summed, `p <= h <= n`.
    pub h: usize,
    /// Random starts for the concentration search.
    pub n_starts: usize,
    /// Concentration step budget per start.
    pub n_csteps: usize,
    pub seed: u64,
    pub mode: LtsMode,
}

impl LtsConfig {
    /// Concentration search with the given `h` and the usual budget of
    /// 500 starts and 30 steps.
    pub fn new(h: usize, seed: u64) -> Self {
        Self {
            h,
            n_starts: 500,
            n_csteps: 30,
            seed,
            mode: LtsMode::Concentration,
        }
    }

    pub fn with_starts(mut self, n_starts: usize) -> Self {
        self.n_starts = n_starts;
        self
    }

    pub fn with_csteps(mut self, n_csteps: usize) -> Self {
        self.n_csteps = n_csteps;
        self
    }

    pub fn with_mode(mut self, mode: LtsMode) -> Self {
        self.mode = mode;
        self
    }
}

fn check_h(d: &Dataset, h: usize) -> Result<()> {
    if h < d.p() || h > d.n() {
        return Err(Error::InvalidParameter(format!(
            "h must be in {}..={}, got {h}",
            d.p(),
            d.n()
        )));
    }
    Ok(())
}

/// `C(n, h)`, saturating once the exhaustive cap is exceeded.
fn subset_count(n: usize, h: usize) -> u64 {
    let h = h.min(n - h);
    let mut acc: u128 = 1;
    for i in 0..h {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > MAX_EXHAUSTIVE_SUBSETS as u128 {
            return MAX_EXHAUSTIVE_SUBSETS + 1;
        }
    }
    acc as u64
}

/// The `h` rows with smallest squared residuals, ties toward lower indices.
fn h_smallest(d: &Dataset, beta: &Coefficients, h: usize) -> Vec<usize> {
    let squares: Vec<f64> = residuals(d, beta)
        .expect("beta dimension already checked")
        .iter()
        .map(|r| r * r)
        .collect();
    let mut order: Vec<usize> = (0..d.n()).collect();
    order.sort_by(|&a, &b| squares[a].total_cmp(&squares[b]).then(a.cmp(&b)));
    let mut kept = order[..h].to_vec();
    kept.sort_unstable();
    kept
}

/// Exact-within-search-space LTS: least squares on every `h`-subset.
///
/// The criterion is always evaluated on the full data; the subset only
/// seeds the fit. Ties resolve to the lexicographically smallest subset
/// because enumeration is lexicographic and improvement is strict.
pub fn lts_exhaustive(d: &Dataset, h: usize) -> Result<FitResult> {
    let started = Instant::now();
    check_h(d, h)?;
    let n = d.n();
    if subset_count(n, h) > MAX_EXHAUSTIVE_SUBSETS {
        return Err(Error::TooManySubsets {
            n,
            h,
            cap: MAX_EXHAUSTIVE_SUBSETS,
        });
    }

    let mut evaluations = 0u64;
    let mut best: Option<(f64, Coefficients, Vec<usize>)> = None;
    for subset in (0..n).combinations(h) {
        evaluations += 1;
        let fit = match ls_fit(d, Some(&subset)) {
            Ok(f) => f,
            Err(Error::SingularDesign) => continue,
            Err(e) => return Err(e),
        };
        let objective = objective_lts(d, &fit.coefficients, h)?;
        let better = match &best {
            Some((current, _, _)) => objective < *current,
            None => true,
        };
        if better {
            best = Some((objective, fit.coefficients, subset));
        }
    }

    let (objective, coefficients, kept) = best.ok_or(Error::SingularDesign)?;
    Ok(FitResult {
        coefficients,
        objective,
        kept,
        evaluations,
        elapsed: started.elapsed(),
    })
}

/// FAST-LTS style concentration search.
///
/// Starts whose seed fit is singular are skipped; if every start is skipped
/// the search fails with [`Error::AllStartsSingular`].
pub fn lts_concentration(d: &Dataset, config: &LtsConfig) -> Result<FitResult> {
    let started = Instant::now();
    check_h(d, config.h)?;
    if config.n_starts == 0 || config.n_csteps == 0 {
        return Err(Error::InvalidParameter(
            "n_starts and n_csteps must be at least 1".into(),
        ));
    }
    let n = d.n();
    let p = d.p();
    let h = config.h;

    let mut evaluations = 0u64;
    let mut best: Option<(f64, Coefficients, Vec<usize>)> = None;
    for start in 0..config.n_starts {
        let mut rng = stream_rng(config.seed, start as u64);
        let mut seed_rows: Vec<usize> = rand::seq::index::sample(&mut rng, n, p).into_vec();
        seed_rows.sort_unstable();

        evaluations += 1;
        let seed_fit = match ls_fit(d, Some(&seed_rows)) {
            Ok(f) => f,
            Err(Error::SingularDesign) => continue,
            Err(e) => return Err(e),
        };
        let mut set = h_smallest(d, &seed_fit.coefficients, h);

        let mut current: Option<(f64, Coefficients, Vec<usize>)> = None;
        for _ in 0..config.n_csteps {
            evaluations += 1;
            let fit = match ls_fit(d, Some(&set)) {
                Ok(f) => f,
                Err(Error::SingularDesign) => break,
                Err(e) => return Err(e),
            };
            let objective = objective_lts(d, &fit.coefficients, h)?;
            current = Some((objective, fit.coefficients.clone(), set.clone()));
            let next = h_smallest(d, &fit.coefficients, h);
            if next == set {
                break;
            }
            set = next;
        }

        if let Some((objective, coefficients, kept)) = current {
            let better = match &best {
                Some((current_best, _, _)) => objective < *current_best,
                None => true,
            };
            if better {
                best = Some((objective, coefficients, kept));
            }
        }
    }

    let (objective, coefficients, kept) = best.ok_or(Error::AllStartsSingular)?;
    Ok(FitResult {
        coefficients,
        objective,
        kept,
        evaluations,
        elapsed: started.elapsed(),
    })
}

/// Dispatches on [`LtsConfig::mode`].
pub fn lts_fit(d: &Dataset, config: &LtsConfig) -> Result<FitResult> {
    match config.mode {
        LtsMode::Exhaustive => lts_exhaustive(d, config.h),
        LtsMode::Concentration => lts_concentration(d, config),
    }
}
