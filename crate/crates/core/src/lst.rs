//! Randomized search for the depth-trimmed least-squares fit.
//!
//! Each replication samples one pair of rows with distinct predictors and
//! turns it into `2 + 4p` candidate coefficient vectors: two exact-fit
//! anchors (intercept 0 and intercept 1) plus every single-component
//! perturbation of them by `+delta` and `-delta`. A candidate is discarded
//! when two of its kept rows have equal residuals and therefore tied
//! outlyingness, since it then sits exactly on a boundary between trimming
//! regions. Tied outlyingness between rows whose residuals merely mirror
//! each other around the median is tolerated: every even-sized sample ties
//! its two central residuals that way, because the median is their average.
//! Surviving candidates are refit by least squares on the kept rows and the
//! refit with the smallest residual sum of squares wins.
//!
//! Ties in the winning objective resolve to the earliest replication and
//! then the earliest candidate, so results do not depend on evaluation
//! order.

use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::regression::{ls_fit, residuals, Coefficients, Dataset, FitResult};
use crate::rng::stream_rng;
use crate::robust::outlyingness;
use crate::trimming::TrimConfig;
use crate::Result;

/// Search parameters for [`lst_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LstConfig {
    /// Outlyingness threshold, `>= 1`.
    pub alpha: f64,
    /// Perturbation step for candidate generation, `> 0`.
    pub delta: f64,
    /// Number of pair-sampling replications; clamped to `n (n - 1) / 2`.
    pub replications: usize,
    pub seed: u64,
}

impl LstConfig {
    /// Single-replication search with `alpha = 3` and `delta = 0.5`.
    pub fn new(seed: u64) -> Self {
        Self {
            alpha: 3.0,
            delta: 0.5,
            replications: 1,
            seed,
        }
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }
}

/// Candidate coefficient vectors generated from one sampled row pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    /// `2 + 4p` candidates: both anchors, then all perturbations.
    pub betas: Vec<Coefficients>,
    /// The sampled rows; both anchors give them equal residuals.
    pub anchor: (usize, usize),
}

/// Largest number of pair-sampling attempts, and the replication cap.
fn pair_cap(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Builds the candidate set for one replication.
///
/// Rows are sampled uniformly until their predictor rows differ; after
/// `n (n - 1) / 2` failed attempts the predictors are declared degenerate.
pub fn candidate_betas(d: &Dataset, delta: f64, rng: &mut ChaCha8Rng) -> Result<CandidateSet> {
    let n = d.n();
    let p = d.p();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "candidate generation needs at least 2 rows, got {n}"
        )));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta must be a finite value > 0, got {delta}"
        )));
    }

    let mut anchor = None;
    for _ in 0..pair_cap(n).max(1) {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if d.predictor_row(i) != d.predictor_row(j) {
            anchor = Some((i, j));
            break;
        }
    }
    let (i, j) = anchor.ok_or(Error::DegeneratePredictors)?;

    let xi = d.predictor_row(i);
    let xj = d.predictor_row(j);
    let k = (0..p - 1)
        .find(|&k| xi[k] != xj[k])
        .expect("rows differ in some component");
    let slope = (d.response(i) - d.response(j)) / (xi[k] - xj[k]);

    let mut anchors = Vec::with_capacity(2);
    for intercept in [0.0, 1.0] {
        let mut b = vec![0.0; p];
        b[0] = intercept;
        b[k + 1] = slope;
        anchors.push(b);
    }

    let mut betas = Vec::with_capacity(2 + 4 * p);
    for b in &anchors {
        betas.push(Coefficients::new(b.clone())?);
    }
    for b in &anchors {
        for component in 0..p {
            for step in [delta, -delta] {
                let mut v = b.clone();
                v[component] += step;
                betas.push(Coefficients::new(v)?);
            }
        }
    }
    Ok(CandidateSet {
        betas,
        anchor: (i, j),
    })
}

/// One examined candidate, recorded for audit purposes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum CandidateOutcome {
    /// Refit succeeded with this residual sum of squares on the kept rows.
    Refit { ss: f64, kept: usize },
    /// Equal-residual ties, too few kept rows, an undefined scale, or a
    /// singular subset design removed the candidate.
    Skipped,
}

fn lst_fit_inner(
    d: &Dataset,
    config: &LstConfig,
    mut trace: Option<&mut Vec<CandidateOutcome>>,
) -> Result<FitResult> {
    let started = Instant::now();
    let n = d.n();
    let p = d.p();
    if n <= 2 {
        return Err(Error::InvalidParameter(format!(
            "the search needs n > 2 rows, got {n}"
        )));
    }
    if n < p {
        return Err(Error::SubsetTooSmall { need: p, got: n });
    }
    let threshold = TrimConfig::new(config.alpha)?;
    let replications = config.replications.clamp(1, pair_cap(n));

    let mut evaluations = 0u64;
    let mut best: Option<(f64, Coefficients, Vec<usize>)> = None;

    for rep in 0..replications {
        let mut rng = stream_rng(config.seed, rep as u64);
        let candidates = candidate_betas(d, config.delta, &mut rng)?;

        for beta in &candidates.betas {
            evaluations += 1;
            let mut record = |outcome: CandidateOutcome| {
                if let Some(t) = trace.as_deref_mut() {
                    t.push(outcome);
                }
            };

            let r = match residuals(d, beta) {
                Ok(r) => r,
                Err(_) => {
                    record(CandidateOutcome::Skipped);
                    continue;
                }
            };
            let profile = match outlyingness(&r) {
                Ok(p) => p,
                Err(_) => {
                    record(CandidateOutcome::Skipped);
                    continue;
                }
            };

            let mut kept: Vec<(f64, usize)> = profile
                .values
                .iter()
                .copied()
                .enumerate()
                .filter(|(_, o)| *o <= threshold.alpha())
                .map(|(i, o)| (o, i))
                .collect();
            kept.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

            // Tied outlyingness marks a boundary candidate only when the
            // tied rows have equal residuals; residuals that mirror each
            // other around the median tie as well (every even-sized sample
            // ties its two central residuals this way) and are let through.
            let admissible = kept.chunk_by(|a, b| a.0 == b.0).all(|run| {
                run.iter()
                    .tuple_combinations()
                    .all(|(a, b)| r[a.1] != r[b.1])
            });
            if !admissible || kept.len() < p {
                record(CandidateOutcome::Skipped);
                continue;
            }

            let mut indices: Vec<usize> = kept.iter().map(|(_, i)| *i).collect();
            indices.sort_unstable();

            let refit = match ls_fit(d, Some(&indices)) {
                Ok(f) => f,
                Err(Error::SingularDesign) => {
                    record(CandidateOutcome::Skipped);
                    continue;
                }
                Err(e) => return Err(e),
            };
            record(CandidateOutcome::Refit {
                ss: refit.objective,
                kept: indices.len(),
            });

            let better = match &best {
                Some((ss, _, _)) => refit.objective < *ss,
                None => true,
            };
            if better {
                best = Some((refit.objective, refit.coefficients, indices));
            }
        }
    }

    let (objective, coefficients, kept) = best.ok_or(Error::NoAdmissibleCandidate)?;
    Ok(FitResult {
        coefficients,
        objective,
        kept,
        evaluations,
        elapsed: started.elapsed(),
    })
}

/// Depth-trimmed least squares via randomized candidate search.
///
/// The returned objective is the residual sum of squares of the winning
/// refit over its kept rows (not the thresholded objective re-evaluated at
/// the refit coefficients; callers wanting that can apply
/// [`crate::trimming::objective_lst`] to the result).
pub fn lst_fit(d: &Dataset, config: &LstConfig) -> Result<FitResult> {
    lst_fit_inner(d, config, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;
    use crate::regression::Dataset;
    use crate::trimming::{objective_lst, TrimConfig};
    use proptest::prelude::*;

    fn toy() -> Dataset {
        demo::toy_line_data()
    }

    /// Seed whose first sampled pair is the given anchor (order ignored).
    fn seed_for_anchor(d: &Dataset, want: (usize, usize)) -> u64 {
        for seed in 0..10_000 {
            let mut rng = stream_rng(seed, 0);
            let c = candidate_betas(d, 0.5, &mut rng).unwrap();
            let got = (c.anchor.0.min(c.anchor.1), c.anchor.0.max(c.anchor.1));
            if got == want {
                return seed;
            }
        }
        panic!("no seed found for anchor {want:?}");
    }

    #[test]
    fn candidate_count_is_two_plus_four_p() {
        let d = toy();
        let mut rng = stream_rng(1, 0);
        let c = candidate_betas(&d, 0.5, &mut rng).unwrap();
        assert_eq!(c.betas.len(), 2 + 4 * d.p());

        let wide = Dataset::new(
            vec![
                vec![1.0, 2.0, 3.0],
                vec![4.0, 5.0, 6.0],
                vec![7.0, 8.0, 10.0],
                vec![2.0, 1.0, 0.0],
            ],
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        let c = candidate_betas(&wide, 1.0, &mut rng).unwrap();
        assert_eq!(c.betas.len(), 2 + 4 * 4);
    }

    #[test]
    fn candidates_from_known_anchor() {
        // Rows 0 and 2 of the demo data: slope (y0 - y2) / (x0 - x2) = -6.5.
        let d = toy();
        let seed = seed_for_anchor(&d, (0, 2));
        let mut rng = stream_rng(seed, 0);
        let c = candidate_betas(&d, 0.5, &mut rng).unwrap();

        assert_eq!(c.betas[0].as_slice(), &[0.0, -6.5]);
        assert_eq!(c.betas[1].as_slice(), &[1.0, -6.5]);
        let perturbed: Vec<&[f64]> = c.betas[2..].iter().map(|b| b.as_slice()).collect();
        assert!(perturbed.contains(&[0.5, -6.5].as_slice()));
        assert!(perturbed.contains(&[-0.5, -6.5].as_slice()));
        assert!(perturbed.contains(&[0.0, -6.0].as_slice()));
        assert!(perturbed.contains(&[0.0, -7.0].as_slice()));
        assert!(perturbed.contains(&[1.5, -6.5].as_slice()));
        assert!(perturbed.contains(&[1.0, -6.0].as_slice()));

        // Both anchors give the sampled rows exactly equal residuals here.
        for beta in &c.betas[..2] {
            let r = residuals(&d, beta).unwrap();
            assert_eq!(r[0], r[2]);
        }
    }

    #[test]
    fn anchor_residuals_agree_on_every_pair() {
        let d = toy();
        let mut seen = std::collections::HashSet::new();
        for seed in 0..2_000 {
            let mut rng = stream_rng(seed, 0);
            let c = candidate_betas(&d, 0.5, &mut rng).unwrap();
            let (i, j) = c.anchor;
            seen.insert((i.min(j), i.max(j)));
            for beta in &c.betas[..2] {
                let r = residuals(&d, beta).unwrap();
                assert!(
                    (r[i] - r[j]).abs() <= 1e-12 * (1.0 + r[i].abs()),
                    "anchor ({i}, {j}) residuals differ: {} vs {}",
                    r[i],
                    r[j]
                );
            }
        }
        assert_eq!(seen.len(), 21, "sampling should reach all unordered pairs");
    }

    #[test]
    fn equal_responses_give_zero_anchor() {
        let d = Dataset::from_columns(&[vec![0.0, 1.0, 2.0]], &[5.0, 5.0, 5.0]).unwrap();
        for seed in 0..20 {
            let mut rng = stream_rng(seed, 0);
            let c = candidate_betas(&d, 0.5, &mut rng).unwrap();
            assert_eq!(c.betas[0].as_slice(), &[0.0, 0.0]);
        }
    }

    #[test]
    fn identical_predictors_are_degenerate() {
        let d = Dataset::from_columns(&[vec![5.0, 5.0, 5.0, 5.0]], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let mut rng = stream_rng(0, 0);
        assert_eq!(
            candidate_betas(&d, 0.5, &mut rng).unwrap_err(),
            Error::DegeneratePredictors
        );
        let cfg = LstConfig::new(0);
        assert_eq!(lst_fit(&d, &cfg).unwrap_err(), Error::DegeneratePredictors);
    }

    #[test]
    fn recovers_noiseless_line() {
        let mut rng = stream_rng(99, 0);
        let xs: Vec<f64> = (0..20).map(|_| rng.random_range(-5.0..5.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 + 2.0 * x).collect();
        let d = Dataset::from_columns(&[xs], &ys).unwrap();
        let fit = lst_fit(&d, &LstConfig::new(7).with_replications(3)).unwrap();
        assert!((fit.coefficients.intercept() - 3.0).abs() < 1e-8);
        assert!((fit.coefficients.slopes()[0] - 2.0).abs() < 1e-8);
        assert!(fit.objective < 1e-16);
    }

    #[test]
    fn beats_or_matches_full_least_squares_on_toy_data() {
        let d = toy();
        let cfg = LstConfig::new(3).with_replications(21);
        let fit = lst_fit(&d, &cfg).unwrap();
        let ls = ls_fit(&d, None).unwrap();
        let threshold = TrimConfig::default();
        let trimmed_lst = objective_lst(&d, &fit.coefficients, threshold).unwrap();
        let trimmed_ls = objective_lst(&d, &ls.coefficients, threshold).unwrap();
        assert!(
            trimmed_lst <= trimmed_ls,
            "trimmed objective {trimmed_lst} should not exceed the LS value {trimmed_ls}"
        );
        assert_eq!(fit.evaluations, 21 * 10);
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let d = toy();
        let cfg = LstConfig::new(11).with_replications(10);
        let a = lst_fit(&d, &cfg).unwrap();
        let b = lst_fit(&d, &cfg).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.kept, b.kept);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn objective_is_monotone_in_replications() {
        let d = toy();
        let few = lst_fit(&d, &LstConfig::new(5).with_replications(4)).unwrap();
        let many = lst_fit(&d, &LstConfig::new(5).with_replications(12)).unwrap();
        assert!(many.objective <= few.objective);
    }

    #[test]
    fn replications_clamp_to_pair_count() {
        let d = toy();
        let fit = lst_fit(&d, &LstConfig::new(2).with_replications(10_000)).unwrap();
        // 21 pairs at most, 10 candidates per replication.
        assert_eq!(fit.evaluations, 21 * 10);
    }

    #[test]
    fn returned_objective_is_minimum_of_refits() {
        let d = toy();
        let cfg = LstConfig::new(13).with_replications(15);
        let mut trace = Vec::new();
        let fit = lst_fit_inner(&d, &cfg, Some(&mut trace)).unwrap();
        assert_eq!(trace.len(), fit.evaluations as usize);
        let min_refit = trace
            .iter()
            .filter_map(|t| match t {
                CandidateOutcome::Refit { ss, .. } => Some(*ss),
                CandidateOutcome::Skipped => None,
            })
            .fold(f64::INFINITY, f64::min);
        assert_eq!(fit.objective, min_refit);
    }

    #[test]
    fn accepted_sets_keep_at_least_half() {
        let d = toy();
        let cfg = LstConfig::new(17).with_replications(21);
        let mut trace = Vec::new();
        let fit = lst_fit_inner(&d, &cfg, Some(&mut trace)).unwrap();
        let half = d.n().div_ceil(2);
        assert!(fit.kept.len() >= half);
        for t in &trace {
            if let CandidateOutcome::Refit { kept, .. } = t {
                assert!(*kept >= half);
            }
        }
    }

    #[test]
    fn all_candidates_skipped_is_an_error() {
        // Duplicated predictor columns leave every subset design singular,
        // so no candidate survives to a refit.
        let x = vec![1.0, 2.0, 4.0];
        let d = Dataset::from_columns(&[x.clone(), x], &[0.0, 1.0, 5.0]).unwrap();
        let cfg = LstConfig::new(1).with_replications(3);
        assert_eq!(lst_fit(&d, &cfg).unwrap_err(), Error::NoAdmissibleCandidate);
    }

    #[test]
    fn mirrored_ties_around_the_median_stay_admissible() {
        // Flat responses: the zero-slope candidates all tie with equal
        // residuals and are discarded, but slope-perturbed candidates tie
        // only by mirroring around the median and must survive, recovering
        // the flat line exactly.
        let d = Dataset::from_columns(&[vec![0.0, 1.0, 2.0]], &[0.0, 0.0, 0.0]).unwrap();
        let cfg = LstConfig::new(1).with_replications(3);
        let fit = lst_fit(&d, &cfg).unwrap();
        assert_eq!(fit.coefficients.as_slice(), &[0.0, 0.0]);
        assert_eq!(fit.objective, 0.0);
    }

    #[test]
    fn majority_on_a_line_defeats_leverage_cluster() {
        // Nine points on y = 3 + 2x, six leverage outliers far below it.
        let mut rng = stream_rng(42, 0);
        let mut xs: Vec<f64> = (0..9).map(|_| rng.random_range(0.0..4.0)).collect();
        let mut ys: Vec<f64> = xs.iter().map(|x| 3.0 + 2.0 * x).collect();
        for _ in 0..6 {
            let x = 10.0 + rng.random_range(-0.3..0.3);
            xs.push(x);
            ys.push(-20.0 + rng.random_range(-0.5..0.5));
        }
        let d = Dataset::from_columns(&[xs], &ys).unwrap();
        let cap = d.n() * (d.n() - 1) / 2;
        let fit = lst_fit(&d, &LstConfig::new(8).with_replications(cap)).unwrap();
        assert!((fit.coefficients.intercept() - 3.0).abs() < 1e-6);
        assert!((fit.coefficients.slopes()[0] - 2.0).abs() < 1e-6);

        let ls = ls_fit(&d, None).unwrap();
        assert!((ls.coefficients.slopes()[0] - 2.0).abs() > 0.5);
    }

    #[test]
    fn rejects_tiny_datasets_and_bad_parameters() {
        let d = Dataset::from_columns(&[vec![0.0, 1.0]], &[0.0, 1.0]).unwrap();
        assert!(matches!(
            lst_fit(&d, &LstConfig::new(0)).unwrap_err(),
            Error::InvalidParameter(_)
        ));
        let d = toy();
        let bad_alpha = LstConfig {
            alpha: 0.5,
            ..LstConfig::new(0)
        };
        assert!(matches!(
            lst_fit(&d, &bad_alpha).unwrap_err(),
            Error::InvalidParameter(_)
        ));
        let bad_delta = LstConfig {
            delta: 0.0,
            ..LstConfig::new(0)
        };
        assert!(matches!(
            lst_fit(&d, &bad_delta).unwrap_err(),
            Error::InvalidParameter(_)
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// The winning kept set always covers at least half the rows.
        #[test]
        fn kept_majority_on_random_data(
            xs in prop::collection::vec(-20.0f64..20.0, 5..25),
            noise in prop::collection::vec(-1.0f64..1.0, 25),
            seed in 0u64..500,
        ) {
            let n = xs.len();
            let ys: Vec<f64> = xs
                .iter()
                .zip(&noise[..n])
                .map(|(x, e)| 1.0 + 0.5 * x + e)
                .collect();
            let d = Dataset::from_columns(&[xs], &ys).unwrap();
            let cfg = LstConfig::new(seed).with_replications(5);
            match lst_fit(&d, &cfg) {
                Ok(fit) => prop_assert!(fit.kept.len() >= n.div_ceil(2)),
                Err(Error::NoAdmissibleCandidate | Error::DegeneratePredictors) => {}
                Err(e) => return Err(TestCaseError::fail(format!("unexpected error: {e}"))),
            }
        }
    }
}
