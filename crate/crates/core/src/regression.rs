//! Datasets, coefficient vectors, and the least-squares baseline fit.
//!
//! A [`Dataset`] stores `n` rows of `p - 1` predictors plus a response; the
//! model always includes an intercept, so coefficient vectors have length
//! `p` with the intercept first. Index sets passed to [`ls_fit`] are 0-based
//! and must be strictly increasing.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Error;
use crate::linalg;
use crate::Result;

/// Regression data: predictor rows and one response per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Row-major `n x (p - 1)` predictor block.
    predictors: Vec<f64>,
    responses: Vec<f64>,
    n: usize,
    p: usize,
}

impl Dataset {
    /// Builds a dataset from predictor rows and responses.
    ///
    /// Every row must have the same nonzero length and every value must be
    /// finite.
    pub fn new(rows: Vec<Vec<f64>>, responses: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if responses.len() != n {
            return Err(Error::DimensionMismatch {
                context: "responses per predictor row",
                expected: n,
                got: responses.len(),
            });
        }
        let width = rows[0].len();
        if width == 0 {
            return Err(Error::DimensionMismatch {
                context: "predictors per row",
                expected: 1,
                got: 0,
            });
        }
        let mut predictors = Vec::with_capacity(n * width);
        for row in &rows {
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    context: "predictors per row",
                    expected: width,
                    got: row.len(),
                });
            }
            predictors.extend_from_slice(row);
        }
        if let Some(index) = predictors.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(index) = responses.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            predictors,
            responses,
            n,
            p: width + 1,
        })
    }

    /// Builds a dataset from predictor columns and a response column.
    pub fn from_columns(columns: &[Vec<f64>], responses: &[f64]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "predictor columns",
                expected: 1,
                got: 0,
            });
        }
        let n = responses.len();
        for col in columns {
            if col.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "rows per predictor column",
                    expected: n,
                    got: col.len(),
                });
            }
        }
        let rows = (0..n)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Self::new(rows, responses.to_vec())
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of model coefficients (predictors plus intercept).
    pub fn p(&self) -> usize {
        self.p
    }

    /// Predictor row `i` without the intercept entry.
    pub fn predictor_row(&self, i: usize) -> &[f64] {
        let w = self.p - 1;
        &self.predictors[i * w..(i + 1) * w]
    }

    /// All responses in row order.
    pub fn responses(&self) -> &[f64] {
        &self.responses
    }

    /// Response of row `i`.
    pub fn response(&self, i: usize) -> f64 {
        self.responses[i]
    }

    pub(crate) fn set_row(&mut self, i: usize, predictors: &[f64], response: f64) {
        debug_assert_eq!(predictors.len(), self.p - 1);
        let w = self.p - 1;
        self.predictors[i * w..(i + 1) * w].copy_from_slice(predictors);
        self.responses[i] = response;
    }
}

/// Model coefficients, intercept first.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Coefficients(Vec<f64>);

impl Coefficients {
    /// Wraps a coefficient vector; requires finite values and length >= 2.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::DimensionMismatch {
                context: "coefficients (intercept + at least one slope)",
                expected: 2,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    pub fn intercept(&self) -> f64 {
        self.0[0]
    }

    /// Slope coefficients in predictor order.
    pub fn slopes(&self) -> &[f64] {
        &self.0[1..]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Squared Euclidean distance to another coefficient vector.
    pub fn squared_distance(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context: "coefficient vectors",
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }
}

/// Outcome of a fit: coefficients plus bookkeeping about how they were found.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub coefficients: Coefficients,
    /// Criterion value at the returned coefficients. For least squares this
    /// is the residual sum of squares over the rows that were fit.
    pub objective: f64,
    /// Sorted 0-based rows used in the final least-squares solve.
    pub kept: Vec<usize>,
    /// Candidate solutions examined along the way (1 for a plain LS fit).
    pub evaluations: u64,
    pub elapsed: Duration,
}

fn check_beta(d: &Dataset, beta: &Coefficients) -> Result<()> {
    if beta.len() != d.p() {
        return Err(Error::DimensionMismatch {
            context: "coefficients per dataset",
            expected: d.p(),
            got: beta.len(),
        });
    }
    Ok(())
}

fn predict_row(d: &Dataset, beta: &Coefficients, i: usize) -> f64 {
    let mut acc = beta.intercept();
    for (x, b) in d.predictor_row(i).iter().zip(beta.slopes()) {
        acc += x * b;
    }
    acc
}

/// Fitted values `X beta` for every row.
pub fn predict(d: &Dataset, beta: &Coefficients) -> Result<Vec<f64>> {
    check_beta(d, beta)?;
    Ok((0..d.n()).map(|i| predict_row(d, beta, i)).collect())
}

/// Residuals `y - X beta` for every row.
///
/// Computed as `y_i` minus the fitted value, so `residuals + predict == y`
/// holds exactly.
pub fn residuals(d: &Dataset, beta: &Coefficients) -> Result<Vec<f64>> {
    check_beta(d, beta)?;
    Ok((0..d.n())
        .map(|i| d.response(i) - predict_row(d, beta, i))
        .collect())
}

fn check_subset(d: &Dataset, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty index set".into()));
    }
    for pair in subset.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::InvalidSubset(format!(
                "indices must be strictly increasing, got {} before {}",
                pair[0], pair[1]
            )));
        }
    }
    let last = *subset.last().expect("nonempty");
    if last >= d.n() {
        return Err(Error::InvalidSubset(format!(
            "index {} out of range for {} rows",
            last,
            d.n()
        )));
    }
    Ok(())
}

/// Ordinary least squares, optionally restricted to a row subset.
///
/// `subset` is a strictly increasing list of 0-based rows; `None` uses all
/// rows. The objective is the residual sum of squares over the rows fit.
pub fn ls_fit(d: &Dataset, subset: Option<&[usize]>) -> Result<FitResult> {
    let started = Instant::now();
    let all: Vec<usize>;
    let rows: &[usize] = match subset {
        Some(s) => {
            check_subset(d, s)?;
            s
        }
        None => {
            all = (0..d.n()).collect();
            &all
        }
    };

    let p = d.p();
    let m = rows.len();
    let mut a = Vec::with_capacity(m * p);
    let mut b = Vec::with_capacity(m);
    for &i in rows {
        a.push(1.0);
        a.extend_from_slice(d.predictor_row(i));
        b.push(d.response(i));
    }
    let solution = linalg::least_squares(m, p, a, b)?;
    let coefficients = Coefficients::new(solution)?;

    let mut objective = 0.0;
    for &i in rows {
        let r = d.response(i) - predict_row(d, &coefficients, i);
        objective += r * r;
    }
    Ok(FitResult {
        coefficients,
        objective,
        kept: rows.to_vec(),
        evaluations: 1,
        elapsed: started.elapsed(),
    })
}
