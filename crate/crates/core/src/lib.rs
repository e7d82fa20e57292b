//! Robust linear regression estimators built around depth-trimmed residuals.
//!
//! The crate provides three fitting strategies over a common [`Dataset`]:
//!
//! * ordinary least squares ([`ls_fit`]), solved by Householder QR,
//! * least trimmed squares ([`lts_exhaustive`], [`lts_concentration`]),
//!   which minimizes the sum of the `h` smallest squared residuals,
//! * trimmed least squares ([`lst_fit`]), which discards observations whose
//!   residuals are far from the residual median in MAD units and refits on
//!   the retained subset.
//!
//! Supporting pieces are exported as modules: [`robust`] (median / MAD /
//! outlyingness), [`trimming`] (trimmed objectives and subset selection),
//! and [`sim`] (a seeded Monte-Carlo harness that compares estimators by
//! empirical mean squared error).
//!
//! All randomized code takes explicit seeds and derives one RNG stream per
//! replication, so results are reproducible and safe to evaluate in
//! parallel.

pub mod demo;
pub mod error;
pub mod linalg;
pub mod lst;
pub mod lts;
pub mod regression;
pub mod rng;
pub mod robust;
pub mod sim;
pub mod trimming;

pub use error::Error;
pub use lst::{candidate_betas, lst_fit, CandidateSet, LstConfig};
pub use lts::{lts_concentration, lts_exhaustive, lts_fit, LtsConfig, LtsMode};
pub use regression::{ls_fit, predict, residuals, Coefficients, Dataset, FitResult};
pub use robust::{mad, median, outlyingness, LocationScale, OutlyingnessProfile};
pub use sim::{
    contaminate, generate, run_benchmark, Covariance, Method, MethodSettings, MetricsReport,
    ScenarioConfig,
};
pub use trimming::{
    default_h, objective_lst, objective_lst_k, objective_lts, trim_set, HRule, TrimConfig, TrimSet,
};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
