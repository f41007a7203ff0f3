//! Marginal convergence of the partial-sum process at t = 1 to its stable
//! limit, checked by KS against the numerically inverted stable CDF.

use cadlag_limits_core::error::Result;
use cadlag_limits_core::limit::{partial_sum_process, Centering};
use cadlag_limits_core::sim::stable::stable_limit_params;
use cadlag_limits_core::sim::{generate, replication_seed, Model};
use cadlag_limits_core::stats;

use crate::config::ExperimentConfig;
use crate::experiments::{par_replications, stream_index, ReportBuilder};
use crate::report::Report;

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Report> {
    let total_params = stable_limit_params(cfg.alpha, cfg.model)?;
    let coord_params = match cfg.model {
        Model::Lagged { .. } => Some(stable_limit_params(cfg.alpha, Model::IidPareto)?),
        _ => None,
    };
    let mut report = ReportBuilder::new(cfg);
    let dim = cfg.model.dim();
    for (ni, &n) in cfg.n_grid.iter().enumerate() {
        let endpoints: Vec<Vec<f64>> = par_replications(cfg.replications, |k| {
            let seed = replication_seed(cfg.seed, stream_index(ni, cfg.replications, k));
            let sample = generate(&cfg.model_config(n, seed))?;
            let v = partial_sum_process(&sample, Centering::TruncatedMean);
            v.eval(1.0)
        })?;
        let totals: Vec<f64> = endpoints.iter().map(|v| v.iter().sum()).collect();
        let ks_total = stats::ks_statistic(&totals, |x| total_params.cdf(x));
        report.criterion(
            n,
            "ks_vn1_total",
            ks_total,
            None,
            format!("C3:alpha={},n={n}", cfg.alpha),
            ks_total < cfg.tolerances.ks,
        );
        report.value(n, "vn1_total_median", stats::median(&totals), Some(stats::median_stderr(&totals)));
        if let Some(cp) = &coord_params {
            for j in 0..dim {
                let coord: Vec<f64> = endpoints.iter().map(|v| v[j]).collect();
                let ks = stats::ks_statistic(&coord, |x| cp.cdf(x));
                report.value(n, &format!("ks_vn1_coord{j}"), ks, None);
            }
        }
        if ni + 1 == cfg.n_grid.len() {
            let ecdf = stats::ecdf(&totals);
            report.plot("vn1_total_ecdf", "x", "empirical_cdf", ecdf.clone());
            report.plot(
                "vn1_total_model_cdf",
                "x",
                "stable_cdf",
                ecdf.iter().map(|&(x, _)| (x, total_params.cdf(x))).collect(),
            );
        }
    }
    Ok(report.finish())
}
