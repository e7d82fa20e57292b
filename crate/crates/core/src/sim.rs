//! Seeded Monte-Carlo harness comparing estimators by empirical MSE.
//!
//! A scenario fixes the data law (dimensions, predictor covariance, true
//! coefficients, contamination) and a seed. Every replication derives its
//! own RNG streams from `(seed, replication index)`, so replications can be
//! evaluated serially or in parallel with identical results; only the
//! timing totals vary between runs.
//!
//! Reported metrics per method:
//!
//! * `emse`: mean of `||beta_hat - beta0||^2` over successful replications,
//! * `svar`: sample variance of `beta_hat` around its mean (same norm),
//! * `tt_seconds`: total wall time spent inside the fit calls,
//! * `re` / `re_svar`: the LS value of emse / svar divided by this
//!   method's value (present only when LS is among the methods),
//! * `failures`: replications whose fit returned an error; these are
//!   disclosed, never retried.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Error;
use crate::lst::{lst_fit, LstConfig};
use crate::lts::{lts_concentration, LtsConfig};
use crate::regression::{ls_fit, Coefficients, Dataset};
use crate::rng::{derive_seed, stream_rng};
use crate::trimming::{default_h, HRule};
use crate::Result;

/// Predictor covariance structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Covariance {
    /// Independent standard normal predictors.
    Identity,
    /// Unit variances with a common pairwise correlation `rho` in `[0, 1)`.
    Equicorrelated { rho: f64 },
}

/// Estimators the harness can benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ls,
    Lts,
    Lst,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Ls => "ls",
            Method::Lts => "lts",
            Method::Lst => "lst",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One benchmark scenario: data law, contamination, and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub n: usize,
    /// Coefficient count including the intercept; `p - 1` predictors.
    pub p: usize,
    /// Contamination fraction in `[0, 0.5)`; `ceil(n * epsilon)` rows are
    /// replaced by `outlier_row`.
    pub epsilon: f64,
    /// Monte-Carlo replications.
    pub replications: usize,
    pub seed: u64,
    pub covariance: Covariance,
    /// True coefficients, intercept first.
    pub beta0: Coefficients,
    /// Replacement row: `p - 1` predictor values followed by the response.
    pub outlier_row: Vec<f64>,
}

impl ScenarioConfig {
    /// Scenario with the conventional defaults: no contamination, identity
    /// covariance, sparse true coefficients `(1, 1, 0, ..., 0)`, and the
    /// outlier row `(4.5, ..., 4.5, -4.5)`.
    pub fn new(n: usize, p: usize, replications: usize, seed: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!(
                "p must be at least 2, got {p}"
            )));
        }
        let mut beta0 = vec![0.0; p];
        beta0[0] = 1.0;
        beta0[1] = 1.0;
        let mut outlier_row = vec![4.5; p];
        outlier_row[p - 1] = -4.5;
        let config = Self {
            n,
            p,
            epsilon: 0.0,
            replications,
            seed,
            covariance: Covariance::Identity,
            beta0: Coefficients::new(beta0)?,
            outlier_row,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_covariance(mut self, covariance: Covariance) -> Self {
        self.covariance = covariance;
        self
    }

    pub fn with_outlier_row(mut self, outlier_row: Vec<f64>) -> Self {
        self.outlier_row = outlier_row;
        self
    }

    pub fn with_beta0(mut self, beta0: Coefficients) -> Self {
        self.beta0 = beta0;
        self
    }

    /// Checks every field range; called by [`run_benchmark`].
    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::InvalidParameter(format!(
                "p must be at least 2, got {}",
                self.p
            )));
        }
        if self.n <= self.p {
            return Err(Error::InvalidParameter(format!(
                "n must exceed p, got n = {}, p = {}",
                self.n, self.p
            )));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter(
                "replications must be at least 1".into(),
            ));
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 || self.epsilon >= 0.5 {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 0.5), got {}",
                self.epsilon
            )));
        }
        let m = (self.n as f64 * self.epsilon).ceil() as usize;
        if 2 * m >= self.n {
            return Err(Error::InvalidParameter(format!(
                "contaminated rows ({m}) must stay below n / 2"
            )));
        }
        if self.beta0.len() != self.p {
            return Err(Error::DimensionMismatch {
                context: "beta0 per scenario p",
                expected: self.p,
                got: self.beta0.len(),
            });
        }
        if self.outlier_row.len() != self.p {
            return Err(Error::DimensionMismatch {
                context: "outlier_row (p - 1 predictors plus response)",
                expected: self.p,
                got: self.outlier_row.len(),
            });
        }
        if let Some(index) = self.outlier_row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Covariance::Equicorrelated { rho } = self.covariance {
            if !rho.is_finite() || !(0.0..1.0).contains(&rho) {
                return Err(Error::InvalidParameter(format!(
                    "equicorrelated rho must lie in [0, 1), got {rho}"
                )));
            }
        }
        Ok(())
    }
}

/// Estimator knobs shared by every scenario of a benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSettings {
    /// Outlyingness threshold for the trimmed search.
    pub alpha: f64,
    /// Candidate perturbation step for the trimmed search.
    pub delta: f64,
    /// Pair-sampling replications; `None` means `min(50, n (n - 1) / 2)`.
    pub lst_replications: Option<usize>,
    /// Trimming count for LTS; `None` means `floor((n + p + 1) / 2)`.
    pub lts_h: Option<usize>,
    pub lts_starts: usize,
    pub lts_csteps: usize,
}

impl Default for MethodSettings {
    fn default() -> Self {
        Self {
            alpha: 3.0,
            delta: 0.5,
            lst_replications: None,
            lts_h: None,
            lts_starts: 500,
            lts_csteps: 30,
        }
    }
}

/// Aggregated metrics for one method within one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub emse: f64,
    pub svar: f64,
    /// Squared distance between the mean fitted coefficients and `beta0`.
    pub bias_sq: f64,
    pub tt_seconds: f64,
    pub re: Option<f64>,
    pub re_svar: Option<f64>,
    pub failures: usize,
    pub successes: usize,
    /// `||beta_hat - beta0||^2` per replication, `None` where the fit
    /// failed. Always `replications` entries long.
    pub per_replication: Vec<Option<f64>>,
}

impl MetricsReport {
    /// Absolute gap in the decomposition
    /// `emse = svar * (s - 1) / s + bias_sq` over the `s` successes.
    pub fn identity_gap(&self) -> f64 {
        let s = self.successes as f64;
        if self.successes == 0 {
            return 0.0;
        }
        (self.emse - (self.svar * (s - 1.0) / s + self.bias_sq)).abs()
    }
}

/// Draws one replication of the scenario's clean data law.
///
/// Deterministic in `(config.seed, replication)`; contamination is applied
/// separately by [`contaminate`].
pub fn generate(config: &ScenarioConfig, replication: usize) -> Result<Dataset> {
    config.validate()?;
    let mut rng = stream_rng(config.seed, 2 * replication as u64);
    let width = config.p - 1;
    let mut rows = Vec::with_capacity(config.n);
    let mut responses = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let mut row = Vec::with_capacity(width);
        match config.covariance {
            Covariance::Identity => {
                for _ in 0..width {
                    row.push(rng.sample::<f64, _>(StandardNormal));
                }
            }
            Covariance::Equicorrelated { rho } => {
                let shared: f64 = rng.sample(StandardNormal);
                let common = rho.sqrt() * shared;
                let own = (1.0 - rho).sqrt();
                for _ in 0..width {
                    let z: f64 = rng.sample(StandardNormal);
                    row.push(common + own * z);
                }
            }
        }
        let noise: f64 = rng.sample(StandardNormal);
        let mut y = config.beta0.intercept() + noise;
        for (x, b) in row.iter().zip(config.beta0.slopes()) {
            y += x * b;
        }
        rows.push(row);
        responses.push(y);
    }
    Dataset::new(rows, responses)
}

/// Replaces `ceil(n * epsilon)` distinct random rows with `outlier_row`.
pub fn contaminate(
    d: &Dataset,
    epsilon: f64,
    outlier_row: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<Dataset> {
    if !epsilon.is_finite() || !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    if outlier_row.len() != d.p() {
        return Err(Error::DimensionMismatch {
            context: "outlier_row (p - 1 predictors plus response)",
            expected: d.p(),
            got: outlier_row.len(),
        });
    }
    let n = d.n();
    let m = (n as f64 * epsilon).ceil() as usize;
    if m >= n {
        return Err(Error::InvalidParameter(format!(
            "contamination would replace every row ({m} of {n})"
        )));
    }
    let mut out = d.clone();
    if m == 0 {
        return Ok(out);
    }
    let (x_part, y_part) = outlier_row.split_at(d.p() - 1);
    for i in rand::seq::index::sample(rng, n, m) {
        out.set_row(i, x_part, y_part[0]);
    }
    Ok(out)
}

/// A fit routine under benchmark: dataset and a derived seed to coefficients.
pub(crate) type FitterFn = dyn Fn(&Dataset, u64) -> Result<Coefficients> + Sync;

fn standard_fitter(method: Method, settings: &MethodSettings) -> Box<FitterFn> {
    let settings = settings.clone();
    match method {
        Method::Ls => Box::new(|d: &Dataset, _seed: u64| Ok(ls_fit(d, None)?.coefficients)),
        Method::Lts => Box::new(move |d: &Dataset, seed: u64| {
            let h = match settings.lts_h {
                Some(h) => h,
                None => default_h(d.n(), d.p(), HRule::LtsRegDefault)?,
            };
            let config = LtsConfig::new(h, seed)
                .with_starts(settings.lts_starts)
                .with_csteps(settings.lts_csteps);
            Ok(lts_concentration(d, &config)?.coefficients)
        }),
        Method::Lst => Box::new(move |d: &Dataset, seed: u64| {
            let pairs = d.n() * (d.n() - 1) / 2;
            let replications = settings.lst_replications.unwrap_or_else(|| pairs.min(50));
            let config = LstConfig {
                alpha: settings.alpha,
                delta: settings.delta,
                replications,
                seed,
            };
            Ok(lst_fit(d, &config)?.coefficients)
        }),
    }
}

struct RepOutcome {
    /// One entry per method: fitted coefficients or failure, plus seconds.
    fits: Vec<(Result<Coefficients>, f64)>,
}

pub(crate) fn run_with_fitters(
    config: &ScenarioConfig,
    fitters: &[(Method, Box<FitterFn>)],
    parallelism: usize,
) -> Result<BTreeMap<Method, MetricsReport>> {
    config.validate()?;
    if fitters.is_empty() {
        return Err(Error::InvalidParameter("no methods requested".into()));
    }

    let run_rep = |rep: usize| -> Result<RepOutcome> {
        let mut d = generate(config, rep)?;
        if config.epsilon > 0.0 {
            let mut rng = stream_rng(config.seed, 2 * rep as u64 + 1);
            d = contaminate(&d, config.epsilon, &config.outlier_row, &mut rng)?;
        }
        let mut fits = Vec::with_capacity(fitters.len());
        for (index, (_, fitter)) in fitters.iter().enumerate() {
            let fit_seed = derive_seed(config.seed, rep as u64, index as u64 + 1);
            let clock = Instant::now();
            let outcome = fitter(&d, fit_seed);
            fits.push((outcome, clock.elapsed().as_secs_f64()));
        }
        Ok(RepOutcome { fits })
    };

    let outcomes: Vec<Result<RepOutcome>> = if parallelism > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            (0..config.replications)
                .into_par_iter()
                .map(run_rep)
                .collect()
        })
    } else {
        (0..config.replications).map(run_rep).collect()
    };
    let outcomes: Vec<RepOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let mut reports = BTreeMap::new();
    for (index, (method, _)) in fitters.iter().enumerate() {
        let mut per_replication = Vec::with_capacity(config.replications);
        let mut fitted: Vec<&Coefficients> = Vec::new();
        let mut tt_seconds = 0.0;
        for outcome in &outcomes {
            let (result, seconds) = &outcome.fits[index];
            tt_seconds += seconds;
            match result {
                Ok(beta) => {
                    per_replication.push(Some(beta.squared_distance(&config.beta0)?));
                    fitted.push(beta);
                }
                Err(_) => per_replication.push(None),
            }
        }

        let successes = fitted.len();
        let failures = config.replications - successes;
        let (emse, svar, bias_sq) = if successes == 0 {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let s = successes as f64;
            let emse = per_replication.iter().flatten().sum::<f64>() / s;
            let mut mean = vec![0.0; config.p];
            for beta in &fitted {
                for (m, b) in mean.iter_mut().zip(beta.as_slice()) {
                    *m += b;
                }
            }
            for m in &mut mean {
                *m /= s;
            }
            let spread: f64 = fitted
                .iter()
                .map(|beta| {
                    beta.as_slice()
                        .iter()
                        .zip(&mean)
                        .map(|(b, m)| (b - m) * (b - m))
                        .sum::<f64>()
                })
                .sum();
            let svar = if successes > 1 {
                spread / (s - 1.0)
            } else {
                0.0
            };
            let bias_sq = mean
                .iter()
                .zip(config.beta0.as_slice())
                .map(|(m, b)| (m - b) * (m - b))
                .sum();
            (emse, svar, bias_sq)
        };

        reports.insert(
            *method,
            MetricsReport {
                emse,
                svar,
                bias_sq,
                tt_seconds,
                re: None,
                re_svar: None,
                failures,
                successes,
                per_replication,
            },
        );
    }

    // Relative efficiency is defined against LS, when present.
    if let Some((ls_emse, ls_svar)) = reports.get(&Method::Ls).map(|r| (r.emse, r.svar)) {
        for report in reports.values_mut() {
            report.re = Some(ls_emse / report.emse);
            report.re_svar = Some(ls_svar / report.svar);
        }
    }
    Ok(reports)
}

/// Runs the scenario for every requested method.
///
/// `parallelism` of 0 or 1 runs replications serially; larger values use a
/// dedicated thread pool of that size. Results are identical either way.
pub fn run_benchmark(
    config: &ScenarioConfig,
    methods: &[Method],
    settings: &MethodSettings,
    parallelism: usize,
) -> Result<BTreeMap<Method, MetricsReport>> {
    let mut unique = Vec::new();
    for method in methods {
        if unique.iter().any(|(m, _)| m == method) {
            return Err(Error::InvalidParameter(format!(
                "method {method} listed twice"
            )));
        }
        unique.push((*method, standard_fitter(*method, settings)));
    }
    run_with_fitters(config, &unique, parallelism)
}

/// JSON document for one (scenario, method) pair, schema version 1.
#[derive(Serialize)]
struct ReportDocument<'a> {
    schema_version: u32,
    scenario: &'a str,
    method: &'a str,
    n: usize,
    p: usize,
    epsilon: f64,
    replications: usize,
    seed: u64,
    emse: f64,
    svar: f64,
    bias_sq: f64,
    tt_seconds: f64,
    re: Option<f64>,
    re_svar: Option<f64>,
    failures: usize,
    successes: usize,
    per_replication: &'a [Option<f64>],
}

/// Serializes one report as pretty JSON. With `include_timing` off the
/// timing total is written as 0 so repeated runs are byte-identical.
pub fn report_json(
    scenario_id: &str,
    config: &ScenarioConfig,
    method: Method,
    report: &MetricsReport,
    include_timing: bool,
) -> String {
    let document = ReportDocument {
        schema_version: 1,
        scenario: scenario_id,
        method: method.name(),
        n: config.n,
        p: config.p,
        epsilon: config.epsilon,
        replications: config.replications,
        seed: config.seed,
        emse: report.emse,
        svar: report.svar,
        bias_sq: report.bias_sq,
        tt_seconds: if include_timing {
            report.tt_seconds
        } else {
            0.0
        },
        re: report.re,
        re_svar: report.re_svar,
        failures: report.failures,
        successes: report.successes,
        per_replication: &report.per_replication,
    };
    serde_json::to_string_pretty(&document).expect("report serialization cannot fail")
}

/// One row of the flat summary: scenario identifier plus its results.
pub struct SummaryRow<'a> {
    pub scenario_id: &'a str,
    pub config: &'a ScenarioConfig,
    pub method: Method,
    pub report: &'a MetricsReport,
}

fn csv_number(value: f64) -> String {
    if value.is_nan() {
        String::new()
    } else {
        format!("{value}")
    }
}

/// Flat CSV with one row per (scenario, method).
pub fn summary_csv(rows: &[SummaryRow<'_>], include_timing: bool) -> String {
    let mut out = String::from(
        "scenario,method,n,p,epsilon,replications,emse,svar,tt_seconds,re,re_svar,failures\n",
    );
    for row in rows {
        let tt = if include_timing {
            row.report.tt_seconds
        } else {
            0.0
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.scenario_id,
            row.method.name(),
            row.config.n,
            row.config.p,
            row.config.epsilon,
            row.config.replications,
            csv_number(row.report.emse),
            csv_number(row.report.svar),
            csv_number(tt),
            row.report.re.map_or(String::new(), csv_number),
            row.report.re_svar.map_or(String::new(), csv_number),
            row.report.failures,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_scenario() -> ScenarioConfig {
        ScenarioConfig::new(30, 2, 8, 404).unwrap()
    }

    fn correlation(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let mut cov = 0.0;
        let mut va = 0.0;
        let mut vb = 0.0;
        for (x, y) in a.iter().zip(b) {
            cov += (x - ma) * (y - mb);
            va += (x - ma) * (x - ma);
            vb += (y - mb) * (y - mb);
        }
        cov / (va.sqrt() * vb.sqrt())
    }

    #[test]
    fn generate_is_deterministic_per_replication() {
        let config = small_scenario();
        let a = generate(&config, 3).unwrap();
        let b = generate(&config, 3).unwrap();
        assert_eq!(a, b);
        let c = generate(&config, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generated_responses_match_the_model_moments() {
        // With beta0 = 0 the response is standard normal noise.
        let mut config = ScenarioConfig::new(10_000, 2, 1, 99).unwrap();
        config.beta0 = Coefficients::new(vec![0.0, 0.0]).unwrap();
        let d = generate(&config, 0).unwrap();
        let mean = d.responses().iter().sum::<f64>() / d.n() as f64;
        let var = d
            .responses()
            .iter()
            .map(|y| (y - mean) * (y - mean))
            .sum::<f64>()
            / (d.n() as f64 - 1.0);
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn identity_covariance_is_uncorrelated() {
        let config = ScenarioConfig::new(10_000, 4, 1, 7).unwrap();
        let d = generate(&config, 0).unwrap();
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|j| (0..d.n()).map(|i| d.predictor_row(i)[j]).collect())
            .collect();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let r = correlation(&cols[a], &cols[b]);
                assert!(r.abs() < 0.05, "columns {a},{b}: correlation {r}");
            }
        }
    }

    #[test]
    fn equicorrelated_covariance_hits_target_rho() {
        let config = ScenarioConfig::new(10_000, 4, 1, 8)
            .unwrap()
            .with_covariance(Covariance::Equicorrelated { rho: 0.9 });
        let d = generate(&config, 0).unwrap();
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|j| (0..d.n()).map(|i| d.predictor_row(i)[j]).collect())
            .collect();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let r = correlation(&cols[a], &cols[b]);
                assert!((r - 0.9).abs() < 0.03, "columns {a},{b}: correlation {r}");
            }
        }
    }

    #[test]
    fn contaminate_replaces_the_right_count() {
        let config = ScenarioConfig::new(100, 3, 1, 5).unwrap();
        let clean = generate(&config, 0).unwrap();
        let row = [4.5, 4.5, -4.5];
        let mut rng = stream_rng(5, 1);
        let dirty = contaminate(&clean, 0.2, &row, &mut rng).unwrap();
        let replaced = (0..dirty.n())
            .filter(|&i| dirty.predictor_row(i) == [4.5, 4.5] && dirty.response(i) == -4.5)
            .count();
        assert_eq!(replaced, 20);
        // The source dataset is untouched.
        assert_ne!(clean, dirty);
        let untouched = (0..dirty.n())
            .filter(|&i| clean.predictor_row(i) == dirty.predictor_row(i))
            .count();
        assert_eq!(untouched, 80);
    }

    #[test]
    fn contaminate_zero_epsilon_is_identity() {
        let config = small_scenario();
        let clean = generate(&config, 1).unwrap();
        let mut rng = stream_rng(1, 1);
        let same = contaminate(&clean, 0.0, &[4.5, -4.5], &mut rng).unwrap();
        assert_eq!(clean, same);
    }

    #[test]
    fn contaminate_range_checks() {
        let config = small_scenario();
        let d = generate(&config, 0).unwrap();
        let mut rng = stream_rng(0, 0);
        assert!(contaminate(&d, 1.0, &[4.5, -4.5], &mut rng).is_err());
        assert!(contaminate(&d, -0.1, &[4.5, -4.5], &mut rng).is_err());
        assert!(contaminate(&d, 0.2, &[4.5], &mut rng).is_err());
        assert!(contaminate(&d, 0.99, &[4.5, -4.5], &mut rng).is_err());
    }

    #[test]
    fn scenario_validation() {
        assert!(ScenarioConfig::new(10, 1, 5, 0).is_err());
        assert!(ScenarioConfig::new(3, 4, 5, 0).is_err());
        let bad = small_scenario().with_epsilon(0.5);
        assert!(bad.validate().is_err());
        let bad = small_scenario().with_outlier_row(vec![1.0]);
        assert!(bad.validate().is_err());
        let bad = small_scenario().with_covariance(Covariance::Equicorrelated { rho: 1.0 });
        assert!(bad.validate().is_err());
    }

    #[test]
    fn oracle_stub_reaches_zero_emse() {
        let config = small_scenario();
        let beta0 = config.beta0.clone();
        let stub: Box<FitterFn> = Box::new(move |_d, _s| Ok(beta0.clone()));
        let reports = run_with_fitters(&config, &[(Method::Lst, stub)], 1).unwrap();
        let report = &reports[&Method::Lst];
        assert_eq!(report.emse, 0.0);
        assert_eq!(report.svar, 0.0);
        assert_eq!(report.bias_sq, 0.0);
        assert_eq!(report.failures, 0);
        assert_eq!(report.successes, config.replications);
        assert!(report.per_replication.iter().all(|v| *v == Some(0.0)));
    }

    #[test]
    fn failures_are_disclosed_not_retried() {
        let config = small_scenario();
        let beta0 = config.beta0.clone();
        let flaky: Box<FitterFn> = Box::new(move |d, _s| {
            // Fail whenever the first response is negative; data-dependent
            // so it is stable across runs.
            if d.response(0) < 0.0 {
                Err(Error::SingularDesign)
            } else {
                Ok(beta0.clone())
            }
        });
        let reports = run_with_fitters(&config, &[(Method::Ls, flaky)], 1).unwrap();
        let report = &reports[&Method::Ls];
        assert!(report.failures > 0, "statistically certain with 8 reps");
        assert_eq!(report.successes + report.failures, config.replications);
        assert_eq!(
            report
                .per_replication
                .iter()
                .filter(|v| v.is_none())
                .count(),
            report.failures
        );
        // EMSE still averages only the successes.
        assert_eq!(report.emse, 0.0);
    }

    #[test]
    fn ls_relative_efficiency_is_exactly_one() {
        let config = small_scenario();
        let settings = MethodSettings::default();
        let reports = run_benchmark(&config, &[Method::Ls], &settings, 1).unwrap();
        assert_eq!(reports[&Method::Ls].re, Some(1.0));
        assert_eq!(reports[&Method::Ls].re_svar, Some(1.0));
    }

    #[test]
    fn re_is_absent_without_ls() {
        let config = small_scenario();
        let settings = MethodSettings::default();
        let reports = run_benchmark(&config, &[Method::Lst], &settings, 1).unwrap();
        assert_eq!(reports[&Method::Lst].re, None);
    }

    #[test]
    fn parallel_and_serial_runs_agree() {
        let config = small_scenario();
        let settings = MethodSettings {
            lts_starts: 25,
            lst_replications: Some(5),
            ..MethodSettings::default()
        };
        let methods = [Method::Ls, Method::Lts, Method::Lst];
        let serial = run_benchmark(&config, &methods, &settings, 1).unwrap();
        let parallel = run_benchmark(&config, &methods, &settings, 4).unwrap();
        for method in methods {
            let a = &serial[&method];
            let b = &parallel[&method];
            assert_eq!(a.per_replication, b.per_replication, "{method}");
            assert_eq!(a.emse, b.emse);
            assert_eq!(a.svar, b.svar);
            assert_eq!(a.re, b.re);
        }
    }

    #[test]
    fn emse_decomposition_holds() {
        let config = small_scenario();
        let settings = MethodSettings {
            lst_replications: Some(5),
            ..MethodSettings::default()
        };
        let reports = run_benchmark(&config, &[Method::Ls, Method::Lst], &settings, 1).unwrap();
        for (method, report) in &reports {
            assert!(
                report.identity_gap() < 1e-10,
                "{method}: gap {}",
                report.identity_gap()
            );
        }
    }

    #[test]
    fn duplicate_methods_are_rejected() {
        let config = small_scenario();
        let settings = MethodSettings::default();
        assert!(run_benchmark(&config, &[Method::Ls, Method::Ls], &settings, 1).is_err());
    }

    #[test]
    fn json_report_shape() {
        let config = small_scenario();
        let settings = MethodSettings::default();
        let reports = run_benchmark(&config, &[Method::Ls], &settings, 1).unwrap();
        let json = report_json("demo", &config, Method::Ls, &reports[&Method::Ls], false);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["schema_version"], 1);
        assert_eq!(value["method"], "ls");
        assert_eq!(value["tt_seconds"], 0.0);
        assert_eq!(value["per_replication"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn csv_layout() {
        let config = small_scenario();
        let settings = MethodSettings::default();
        let reports = run_benchmark(&config, &[Method::Ls], &settings, 1).unwrap();
        let rows = [SummaryRow {
            scenario_id: "demo",
            config: &config,
            method: Method::Ls,
            report: &reports[&Method::Ls],
        }];
        let csv = summary_csv(&rows, false);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario,method,n,p,epsilon,replications,emse,svar,tt_seconds,re,re_svar,failures"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("demo,ls,30,2,0,8,"));
        assert!(row.ends_with(",1,1,0"));
    }
}
