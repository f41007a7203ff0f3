//! End-to-end experiment runners.
//!
//! Each runner consumes an [`ExperimentConfig`] and produces a [`Report`].
//! Replications are farmed out to a rayon pool; reductions always happen in
//! replication order on the collected vector, so results do not depend on
//! the thread count.

mod clusters;
mod convergence;
mod counterexample;
mod diagnostics;
mod theta;

pub use clusters::run_cluster_study;
pub use convergence::run_convergence;
pub use counterexample::run_counterexample;
pub use diagnostics::run_diagnostics;
pub use theta::run_theta_study;

use std::time::Instant;

use rayon::prelude::*;

use cadlag_limits_core::error::Result;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::report::{Report, ReportMetadata, ReportRow};

/// Run the experiment named in the configuration.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::Convergence => run_convergence(cfg),
        ExperimentKind::Counterexample => run_counterexample(cfg),
        ExperimentKind::ThetaStudy => run_theta_study(cfg),
        ExperimentKind::ClusterStudy => run_cluster_study(cfg),
        ExperimentKind::Diagnostics => run_diagnostics(cfg),
    }
}

/// Map replication indices through `f` in parallel, collecting in index
/// order and propagating the first error.
pub(crate) fn par_replications<T: Send>(
    count: usize,
    f: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..count as u64).into_par_iter().map(f).collect()
}

/// Report under construction: shared row plumbing for the runners.
pub(crate) struct ReportBuilder {
    experiment: String,
    model: String,
    alpha: f64,
    seed: u64,
    started: Instant,
    rows: Vec<ReportRow>,
    plots: Vec<crate::report::PlotSeries>,
    inconclusive: bool,
}

impl ReportBuilder {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        ReportBuilder {
            experiment: cfg.experiment.label().to_string(),
            model: cfg.model.label(),
            alpha: cfg.alpha,
            seed: cfg.seed,
            started: Instant::now(),
            rows: Vec::new(),
            plots: Vec::new(),
            inconclusive: false,
        }
    }

    pub fn value(&mut self, n: usize, statistic: &str, value: f64, stderr: Option<f64>) {
        self.rows.push(ReportRow {
            experiment: self.experiment.clone(),
            model: self.model.clone(),
            alpha: self.alpha,
            n,
            statistic: statistic.to_string(),
            value,
            stderr,
            criterion: None,
            pass: None,
        });
    }

    pub fn criterion(
        &mut self,
        n: usize,
        statistic: &str,
        value: f64,
        stderr: Option<f64>,
        criterion: String,
        pass: bool,
    ) {
        self.rows.push(ReportRow {
            experiment: self.experiment.clone(),
            model: self.model.clone(),
            alpha: self.alpha,
            n,
            statistic: statistic.to_string(),
            value,
            stderr,
            criterion: Some(criterion),
            pass: Some(pass),
        });
    }

    pub fn plot(&mut self, name: &str, x_label: &str, y_label: &str, points: Vec<(f64, f64)>) {
        self.plots.push(crate::report::PlotSeries {
            name: name.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            points,
        });
    }

    pub fn flag_inconclusive(&mut self) {
        self.inconclusive = true;
    }

    pub fn finish(self) -> Report {
        Report {
            experiment: self.experiment,
            rows: self.rows,
            metadata: ReportMetadata {
                seed: self.seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_s: self.started.elapsed().as_secs_f64(),
                threads: rayon::current_num_threads(),
            },
            inconclusive: self.inconclusive,
            plots: self.plots,
        }
    }
}

/// Stream index for replication `k` of grid cell `cell`, so different grid
/// cells never share RNG streams.
pub(crate) fn stream_index(cell: usize, replications: usize, k: u64) -> u64 {
    (cell * replications) as u64 + k
}
