//! Declarative experiment configuration, read from JSON.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use cadlag_limits_core::error::{Error, Result};
use cadlag_limits_core::sim::{Model, ModelConfig, DEFAULT_BURN_IN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Convergence,
    Counterexample,
    ThetaStudy,
    ClusterStudy,
    Diagnostics,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Counterexample => "counterexample",
            ExperimentKind::ThetaStudy => "theta_study",
            ExperimentKind::ClusterStudy => "cluster_study",
            ExperimentKind::Diagnostics => "diagnostics",
        }
    }
}

/// Engineering thresholds and knobs; every default is overridable from the
/// config file. The paper-side results are asymptotic, so these encode the
/// desk-scale surrogates, not claims from the source material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// KS threshold for stable/Frechet marginal comparisons.
    pub ks: f64,
    /// KS threshold for inter-cluster gap exponentiality.
    pub gap_ks: f64,
    /// Absolute band for the blocks extremal-index estimate.
    pub theta_abs: f64,
    /// Bracket tolerance for one-off metric computations.
    pub metric_tol: f64,
    /// Bracket tolerance for the product-metric distance between large
    /// partial-sum paths.
    pub dp_tol: f64,
    /// Bracket tolerance for strong-M1 lower bounds on large paths.
    pub lb_tol: f64,
    /// Minimum pooled cluster count before cluster statistics are
    /// considered conclusive.
    pub min_clusters: usize,
    /// Number of leading replications on which the expensive product-metric
    /// distance is evaluated.
    pub dp_replications: usize,
    /// Slack, in joint standard errors of the two medians, allowed when
    /// asserting that the strong-M1 lower bound does not decrease in n.
    pub monotonicity_se: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ks: 0.05,
            gap_ks: 0.1,
            theta_abs: 0.07,
            metric_tol: 1e-4,
            dp_tol: 5e-4,
            lb_tol: 5e-3,
            min_clusters: 30,
            dp_replications: 64,
            monotonicity_se: 2.0,
        }
    }
}

fn default_replications() -> usize {
    2000
}

fn default_u_grid() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_burn_in() -> usize {
    DEFAULT_BURN_IN
}

/// One experiment: model, tail index, sample-length grid, replication count
/// and master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub model: Model,
    pub alpha: f64,
    pub n_grid: Vec<usize>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_u_grid")]
    pub u_grid: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub seed: u64,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replications must be at least 1".into()));
        }
        if self.n_grid.is_empty() {
            return Err(Error::InvalidParameter("n_grid must be nonempty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("n_grid must be strictly ascending".into()));
        }
        if self.u_grid.is_empty() || self.u_grid.iter().any(|&u| u <= 0.0) {
            return Err(Error::InvalidParameter("u_grid must be nonempty and positive".into()));
        }
        self.model_config(self.n_grid[0], self.seed).validate()
    }

    /// Model configuration for one replication at sample length `n`.
    pub fn model_config(&self, n: usize, seed: u64) -> ModelConfig {
        ModelConfig { alpha: self.alpha, model: self.model, n, seed, burn_in: self.burn_in }
    }
}

/// Default block length `floor(n^0.6)`, clamped into `1..=n`.
pub fn default_block_length(n: usize) -> usize {
    ((n as f64).powf(0.6).floor() as usize).clamp(1, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_and_defaults() {
        let text = r#"{
            "experiment": "theta_study",
            "model": {"kind": "lagged", "q": 1},
            "alpha": 1.0,
            "n_grid": [100000],
            "seed": 7
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.replications, 2000);
        assert_eq!(cfg.u_grid, vec![0.5, 1.0, 2.0]);
        assert_eq!(cfg.tolerances.ks, 0.05);
        let back = serde_json::to_string(&cfg).unwrap();
        let again: ExperimentConfig = serde_json::from_str(&back).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_bad_grids() {
        let mut cfg: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"convergence","model":{"kind":"iid_pareto"},
                "alpha":1.5,"n_grid":[100, 50],"seed":1}"#,
        )
        .unwrap();
        assert!(cfg.validate().is_err());
        cfg.n_grid = vec![];
        assert!(cfg.validate().is_err());
        cfg.n_grid = vec![100];
        cfg.replications = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn block_length_rate() {
        assert_eq!(default_block_length(100_000), 1000);
        assert_eq!(default_block_length(1), 1);
    }
}
