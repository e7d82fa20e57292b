//! Benchmark manifests: one `[[scenario]]` table per scenario.
//!
//! ```toml
//! [[scenario]]
//! id = "clean_p10_n100"
//! n = 100
//! p = 10
//! epsilon = 0.0
//! replications = 200
//! seed = 1
//! covariance = "identity"     # or "equicorrelated" with `rho = 0.9`
//! methods = ["ls", "lts", "lst"]
//! ```
//!
//! Optional per-scenario keys: `beta0` (length-p coefficient vector,
//! intercept first), `outlier_row` (p - 1 predictor values plus the
//! response), and the estimator knobs `alpha`, `delta`,
//! `lst_replications`, `lts_h`, `lts_starts`, `lts_csteps`. Unknown keys
//! are rejected so typos surface by name.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;
use trimfit_core::{Coefficients, Covariance, Method, MethodSettings, ScenarioConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    #[serde(default)]
    scenario: Vec<ScenarioEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioEntry {
    id: String,
    n: usize,
    p: usize,
    #[serde(default)]
    epsilon: f64,
    replications: usize,
    seed: u64,
    #[serde(default = "identity")]
    covariance: String,
    rho: Option<f64>,
    methods: Vec<String>,
    beta0: Option<Vec<f64>>,
    outlier_row: Option<Vec<f64>>,
    alpha: Option<f64>,
    delta: Option<f64>,
    lst_replications: Option<usize>,
    lts_h: Option<usize>,
    lts_starts: Option<usize>,
    lts_csteps: Option<usize>,
}

fn identity() -> String {
    "identity".to_owned()
}

/// One fully validated benchmark scenario.
#[derive(Debug, Clone)]
pub struct PlannedScenario {
    pub id: String,
    pub config: ScenarioConfig,
    pub methods: Vec<Method>,
    pub settings: MethodSettings,
}

fn bad(id: &str, field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::usage(format!(
        "manifest scenario `{id}`, field `{field}`: {message}"
    ))
}

impl ScenarioEntry {
    fn plan(&self, seed_override: Option<u64>) -> Result<PlannedScenario> {
        let id = &self.id;
        if id.is_empty()
            || !id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(bad(
                id,
                "id",
                "must be non-empty and use only letters, digits, `_`, `-` \
                 (it names the report files)",
            ));
        }

        let covariance = match self.covariance.as_str() {
            "identity" => {
                if self.rho.is_some() {
                    return Err(bad(
                        id,
                        "rho",
                        "only valid with covariance = \"equicorrelated\"",
                    ));
                }
                Covariance::Identity
            }
            "equicorrelated" => {
                let rho = self
                    .rho
                    .ok_or_else(|| bad(id, "rho", "required for equicorrelated covariance"))?;
                Covariance::Equicorrelated { rho }
            }
            other => {
                return Err(bad(
                    id,
                    "covariance",
                    format!("unknown value `{other}` (expected `identity` or `equicorrelated`)"),
                ))
            }
        };

        if self.methods.is_empty() {
            return Err(bad(id, "methods", "must list at least one of ls, lts, lst"));
        }
        let mut methods = Vec::with_capacity(self.methods.len());
        for name in &self.methods {
            let method = match name.as_str() {
                "ls" => Method::Ls,
                "lts" => Method::Lts,
                "lst" => Method::Lst,
                other => {
                    return Err(bad(
                        id,
                        "methods",
                        format!("unknown method `{other}` (expected ls, lts, or lst)"),
                    ))
                }
            };
            if methods.contains(&method) {
                return Err(bad(id, "methods", format!("method `{name}` listed twice")));
            }
            methods.push(method);
        }

        let seed = seed_override.unwrap_or(self.seed);
        let mut config = ScenarioConfig::new(self.n, self.p, self.replications, seed)
            .map_err(|e| bad(id, "n/p/replications", e))?
            .with_epsilon(self.epsilon)
            .with_covariance(covariance);
        if let Some(beta0) = &self.beta0 {
            config = config
                .with_beta0(Coefficients::new(beta0.clone()).map_err(|e| bad(id, "beta0", e))?);
        }
        if let Some(row) = &self.outlier_row {
            config = config.with_outlier_row(row.clone());
        }
        config.validate().map_err(|e| bad(id, "scenario", e))?;

        let defaults = MethodSettings::default();
        let settings = MethodSettings {
            alpha: self.alpha.unwrap_or(defaults.alpha),
            delta: self.delta.unwrap_or(defaults.delta),
            lst_replications: self.lst_replications.or(defaults.lst_replications),
            lts_h: self.lts_h.or(defaults.lts_h),
            lts_starts: self.lts_starts.unwrap_or(defaults.lts_starts),
            lts_csteps: self.lts_csteps.unwrap_or(defaults.lts_csteps),
        };

        Ok(PlannedScenario {
            id: id.clone(),
            config,
            methods,
            settings,
        })
    }
}

/// Parses and validates a manifest; `seed_override` replaces every
/// scenario's seed when given.
pub fn parse(text: &str, seed_override: Option<u64>) -> Result<Vec<PlannedScenario>> {
    let file: ManifestFile =
        toml::from_str(text).map_err(|e| CliError::usage(format!("manifest: {e}")))?;
    if file.scenario.is_empty() {
        return Err(CliError::usage("manifest: no `[[scenario]]` tables found"));
    }
    let mut seen = BTreeSet::new();
    let mut planned = Vec::with_capacity(file.scenario.len());
    for entry in &file.scenario {
        if !seen.insert(entry.id.clone()) {
            return Err(bad(&entry.id, "id", "duplicate scenario id"));
        }
        planned.push(entry.plan(seed_override)?);
    }
    Ok(planned)
}

pub fn load(path: &Path, seed_override: Option<u64>) -> Result<Vec<PlannedScenario>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, seed_override)
}
