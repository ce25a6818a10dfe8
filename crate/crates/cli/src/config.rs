use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vlex_core::approx::MeasureConfig;
use vlex_core::estimate::SearchConfig;
use vlex_core::exponent::ExponentSpec;
use vlex_core::grid::Grid;
use vlex_core::oracle::{OracleBudget, RieszThorinConfig, SuiteConfig};
use vlex_core::symbol::SymbolSpec;

use crate::Failure;

/// `‖S‖` bound for one exponent, looked up by exact spec equality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SBoundEntry {
    pub exponent: ExponentSpec,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxConfig {
    pub theta: f64,
    /// Overrides the admissible θ-range when the exponent has no analytic certificate.
    #[serde(default)]
    pub tau: Option<f64>,
    /// `‖S‖` bound on `L^{p_θ(·)}`; takes precedence over the `s_bounds` table.
    #[serde(default)]
    pub s_bound_theta: Option<f64>,
    /// Mode b only.
    #[serde(default)]
    pub p0: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub measure: Option<MeasureConfig>,
    /// Size and span of the cyclic model used for the consistency check; skipped when absent.
    #[serde(default)]
    pub oracle_check: Option<OracleCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheck {
    pub size: usize,
    pub span: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub size: usize,
    pub span: f64,
    #[serde(default)]
    pub budget: Option<OracleBudget>,
    #[serde(default)]
    pub riesz_thorin: Option<RieszThorinConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<ExponentSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_bounds: Vec<SBoundEntry>,
    /// Upper bound for `mulnorm` taken on trust.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supplied_upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<SymbolSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approximation: Option<ApproxConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<ExperimentConfig, Failure> {
        let Some(path) = path else {
            return Ok(ExperimentConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
    }

    /// Applies `--seed` to every seeded section.
    pub fn reseed(&mut self, seed: u64) {
        self.seed = seed;
        if let Some(s) = self.search.as_mut() {
            s.seed = seed;
        }
        if let Some(s) = self.suite.as_mut() {
            s.seed = seed;
            if let Some(b) = s.budget.as_mut() {
                b.seed = seed;
            }
        }
        if let Some(b) = self.oracle.as_mut().and_then(|o| o.budget.as_mut()) {
            b.seed = seed;
        }
    }

    pub fn s_bound_for(&self, p: &ExponentSpec) -> Option<f64> {
        self.s_bounds.iter().find(|e| &e.exponent == p).map(|e| e.value)
    }

    pub fn search(&self) -> SearchConfig {
        self.search.unwrap_or(SearchConfig { seed: self.seed, ..SearchConfig::default() })
    }

    pub fn grid(&self) -> Result<Grid, Failure> {
        let g = self.grid.unwrap_or(Grid { half_width: 64.0, count: 4096 });
        Grid::new(g.half_width, g.count).map_err(Failure::domain)
    }

    pub fn exponent(&self) -> Result<&ExponentSpec, Failure> {
        self.exponent.as_ref().ok_or_else(|| Failure::parse("config has no `exponent`"))
    }
}
