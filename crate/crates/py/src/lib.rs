//! Python bindings over the trimfit estimators.
//!
//! Builds as a `cdylib` named `trimfit`; `python/smoke_test.py` shows how to
//! load the shared object straight from `target/`. Everything speaks plain
//! Python lists and floats, so the module has no numpy dependency.

use pyo3::exceptions::{PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

/// Bad inputs become `ValueError`; failures of the fit itself (singular
/// design, zero scale, no admissible candidate, ...) become `RuntimeError`.
fn to_py_err(e: trimfit_core::Error) -> PyErr {
    use trimfit_core::Error::*;
    match e {
        EmptySample
        | NonFinite { .. }
        | DimensionMismatch { .. }
        | SubsetTooSmall { .. }
        | InvalidSubset(_)
        | InvalidParameter(_) => PyValueError::new_err(e.to_string()),
        SingularDesign
        | ZeroScale
        | TooManySubsets { .. }
        | DegeneratePredictors
        | NoAdmissibleCandidate
        | AllStartsSingular => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_beta(values: Vec<f64>) -> PyResult<trimfit_core::Coefficients> {
    trimfit_core::Coefficients::new(values).map_err(to_py_err)
}

/// Regression data with an implicit intercept column, so `p` counts the
/// intercept plus one slope per predictor.
#[pyclass(frozen)]
struct Dataset {
    inner: trimfit_core::Dataset,
}

#[pymethods]
impl Dataset {
    /// `predictors` is row-major: one inner list per observation, all of the
    /// same length, and `responses` supplies `y` in the same row order.
    #[new]
    fn new(predictors: Vec<Vec<f64>>, responses: Vec<f64>) -> PyResult<Self> {
        trimfit_core::Dataset::new(predictors, responses)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    /// Builds from predictor columns instead of rows.
    #[staticmethod]
    fn from_columns(columns: Vec<Vec<f64>>, responses: Vec<f64>) -> PyResult<Self> {
        trimfit_core::Dataset::from_columns(&columns, &responses)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    /// The built-in seven-point demo data (five points near `y = x` plus a
    /// low cluster at high `x`), the same set the `example1` command prints.
    #[staticmethod]
    fn demo() -> Self {
        Self {
            inner: trimfit_core::demo::toy_line_data(),
        }
    }

    /// Number of observations.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Number of coefficients, intercept included.
    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    /// Predictor values of row `i` (without the intercept column).
    fn predictor_row(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.n() {
            return Err(PyIndexError::new_err(format!(
                "row {i} out of range for {} observations",
                self.inner.n()
            )));
        }
        Ok(self.inner.predictor_row(i).to_vec())
    }

    /// All responses in row order.
    fn responses(&self) -> Vec<f64> {
        self.inner.responses().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Dataset(n={}, p={})", self.inner.n(), self.inner.p())
    }
}

/// Coefficients plus bookkeeping from one fitting run.
#[pyclass(frozen, get_all)]
struct FitResult {
    /// Intercept first, then one slope per predictor.
    coefficients: Vec<f64>,
    /// Criterion value at the returned coefficients.
    objective: f64,
    /// Sorted 0-based rows used in the final least-squares solve.
    kept: Vec<usize>,
    /// Candidate solutions examined along the way.
    evaluations: u64,
    elapsed_seconds: f64,
}

#[pymethods]
impl FitResult {
    fn __repr__(&self) -> String {
        format!(
            "FitResult(coefficients={:?}, objective={}, kept {} of the rows)",
            self.coefficients,
            self.objective,
            self.kept.len()
        )
    }
}

impl From<trimfit_core::FitResult> for FitResult {
    fn from(fit: trimfit_core::FitResult) -> Self {
        Self {
            coefficients: fit.coefficients.as_slice().to_vec(),
            objective: fit.objective,
            kept: fit.kept,
            evaluations: fit.evaluations,
            elapsed_seconds: fit.elapsed.as_secs_f64(),
        }
    }
}

/// Sample median; even lengths average the two middle order statistics.
#[pyfunction]
fn median(values: Vec<f64>) -> PyResult<f64> {
    trimfit_core::median(&values).map_err(to_py_err)
}

/// `(median, mad, degenerate)` of a sample. The MAD carries no consistency
/// constant; a majority of exactly equal values forces `mad = 1.0` and sets
/// the degenerate flag.
#[pyfunction]
fn mad(values: Vec<f64>) -> PyResult<(f64, f64, bool)> {
    trimfit_core::mad(&values)
        .map(|s| (s.median, s.mad, s.degenerate))
        .map_err(to_py_err)
}

/// `|x_i - median| / mad` for every value, in input order.
#[pyfunction]
fn outlyingness(values: Vec<f64>) -> PyResult<Vec<f64>> {
    trimfit_core::outlyingness(&values)
        .map(|profile| profile.values)
        .map_err(to_py_err)
}

/// Sum of the `h` smallest squared residuals at `beta`.
#[pyfunction]
fn objective_lts(dataset: &Dataset, beta: Vec<f64>, h: usize) -> PyResult<f64> {
    trimfit_core::objective_lts(&dataset.inner, &to_beta(beta)?, h).map_err(to_py_err)
}

/// Sum of squared residuals over the rows whose residual outlyingness is at
/// most `alpha`.
#[pyfunction(signature = (dataset, beta, alpha = 3.0))]
fn objective_lst(dataset: &Dataset, beta: Vec<f64>, alpha: f64) -> PyResult<f64> {
    let config = trimfit_core::TrimConfig::new(alpha).map_err(to_py_err)?;
    trimfit_core::objective_lst(&dataset.inner, &to_beta(beta)?, config).map_err(to_py_err)
}

/// Sum of squared residuals over the `k` rows with smallest outlyingness,
/// ties broken toward lower row indices.
#[pyfunction]
fn objective_lst_k(dataset: &Dataset, beta: Vec<f64>, k: usize) -> PyResult<f64> {
    trimfit_core::objective_lst_k(&dataset.inner, &to_beta(beta)?, k).map_err(to_py_err)
}

/// Default trimming count for `n` observations and `p` coefficients.
///
/// `rule` is `"ltsreg"` for `floor((n + p + 1) / 2)` or `"breakdown"` for
/// the breakdown-optimal `floor(n / 2) + floor((p + 1) / 2)`.
#[pyfunction(signature = (n, p, rule = "ltsreg"))]
fn default_h(n: usize, p: usize, rule: &str) -> PyResult<usize> {
    let rule = match rule {
        "ltsreg" => trimfit_core::HRule::LtsRegDefault,
        "breakdown" => trimfit_core::HRule::BreakdownOptimal,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown h rule `{other}`, expected \"ltsreg\" or \"breakdown\""
            )))
        }
    };
    trimfit_core::default_h(n, p, rule).map_err(to_py_err)
}

/// Ordinary least squares, optionally restricted to a 0-based row subset.
#[pyfunction(signature = (dataset, subset = None))]
fn ls_fit(dataset: &Dataset, subset: Option<Vec<usize>>) -> PyResult<FitResult> {
    trimfit_core::ls_fit(&dataset.inner, subset.as_deref())
        .map(Into::into)
        .map_err(to_py_err)
}

/// Least trimmed squares: minimizes the sum of the `h` smallest squared
/// residuals.
///
/// `h = None` applies the ltsreg default. The search runs `starts` random
/// concentration starts of at most `csteps` steps each; `exhaustive = True`
/// enumerates every h-subset instead (refused beyond one million subsets).
#[pyfunction(signature = (dataset, h = None, seed = 0, starts = 500, csteps = 30, exhaustive = false))]
fn lts_fit(
    dataset: &Dataset,
    h: Option<usize>,
    seed: u64,
    starts: usize,
    csteps: usize,
    exhaustive: bool,
) -> PyResult<FitResult> {
    let d = &dataset.inner;
    let h = match h {
        Some(h) => h,
        None => trimfit_core::default_h(d.n(), d.p(), trimfit_core::HRule::LtsRegDefault)
            .map_err(to_py_err)?,
    };
    let mode = if exhaustive {
        trimfit_core::LtsMode::Exhaustive
    } else {
        trimfit_core::LtsMode::Concentration
    };
    let config = trimfit_core::LtsConfig::new(h, seed)
        .with_starts(starts)
        .with_csteps(csteps)
        .with_mode(mode);
    trimfit_core::lts_fit(d, &config)
        .map(Into::into)
        .map_err(to_py_err)
}

/// Trimmed least squares driven by residual outlyingness: candidate lines
/// come from sampled row pairs, rows within `alpha` MAD units of the
/// residual median are refit, and the smallest refit criterion wins.
///
/// `replications = None` samples `min(n (n - 1) / 2, 50)` row pairs, the
/// same default the command-line `fit` uses.
#[pyfunction(signature = (dataset, alpha = 3.0, delta = 0.5, replications = None, seed = 0))]
fn lst_fit(
    dataset: &Dataset,
    alpha: f64,
    delta: f64,
    replications: Option<usize>,
    seed: u64,
) -> PyResult<FitResult> {
    let d = &dataset.inner;
    let pair_cap = d.n() * (d.n() - 1) / 2;
    let replications = replications.unwrap_or_else(|| pair_cap.min(50)).max(1);
    let config = trimfit_core::LstConfig::new(seed)
        .with_alpha(alpha)
        .with_delta(delta)
        .with_replications(replications);
    trimfit_core::lst_fit(d, &config)
        .map(Into::into)
        .map_err(to_py_err)
}

/// Robust linear regression: plain, trimmed, and depth-trimmed least
/// squares over small in-memory datasets.
#[pymodule]
fn trimfit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dataset>()?;
    m.add_class::<FitResult>()?;
    m.add_function(wrap_pyfunction!(median, m)?)?;
    m.add_function(wrap_pyfunction!(mad, m)?)?;
    m.add_function(wrap_pyfunction!(outlyingness, m)?)?;
    m.add_function(wrap_pyfunction!(objective_lts, m)?)?;
    m.add_function(wrap_pyfunction!(objective_lst, m)?)?;
    m.add_function(wrap_pyfunction!(objective_lst_k, m)?)?;
    m.add_function(wrap_pyfunction!(default_h, m)?)?;
    m.add_function(wrap_pyfunction!(ls_fit, m)?)?;
    m.add_function(wrap_pyfunction!(lts_fit, m)?)?;
    m.add_function(wrap_pyfunction!(lst_fit, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
