//! Error type shared by every module in the crate.

use thiserror::Error;

/// Failure modes of the estimators and the simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A statistic was requested on an empty sample.
    #[error("empty sample")]
    EmptySample,

    /// A sample contained a NaN or infinite value.
    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    /// MAD is zero but no majority of identical values explains it, so the
    /// outlyingness ratio is undefined.
    #[error("zero scale: MAD is 0 without a majority tie")]
    ZeroScale,

    /// Rows, columns, or coefficient vectors disagree in length.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// The design matrix for a least-squares solve is rank deficient.
    #[error("singular design")]
    SingularDesign,

    /// A least-squares solve was requested on fewer rows than coefficients.
    #[error("subset too small: {got} rows for {need} coefficients")]
    SubsetTooSmall { need: usize, got: usize },

    /// An index set referenced a row outside the dataset or repeated a row.
    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    /// A configuration value is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Exhaustive subset enumeration would exceed the hard cap.
    #[error("too many subsets: C({n}, {h}) exceeds {cap}")]
    TooManySubsets { n: usize, h: usize, cap: u64 },

    /// No pair of rows with distinct predictors was found.
    #[error("degenerate predictors: no two rows differ")]
    DegeneratePredictors,

    /// Every candidate in every replication was skipped or singular.
    #[error("no admissible candidate")]
    NoAdmissibleCandidate,

    /// Every concentration start hit a singular design.
    #[error("all starts singular")]
    AllStartsSingular,
}
