//! Machine-readable experiment reports.
//!
//! `report.csv` carries only the result rows, formatted with Rust's
//! shortest-round-trip float printing, so a rerun with the same
//! configuration and seed is byte identical. Run metadata (seed, version,
//! wall time, thread count) lives in `report.json`; plot series go to
//! `plotdata/*.csv`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub model: String,
    pub alpha: f64,
    pub n: usize,
    pub statistic: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub criterion: Option<String>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportMetadata {
    pub seed: u64,
    pub version: String,
    pub wall_time_s: f64,
    pub threads: usize,
}

/// A named plot series written as a two-column CSV.
#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    pub metadata: ReportMetadata,
    pub inconclusive: bool,
    #[serde(skip)]
    pub plots: Vec<PlotSeries>,
}

impl Report {
    /// Deterministic CSV rendering of the rows.
    pub fn csv_string(&self) -> String {
        let mut s = String::new();
        s.push_str("experiment,model,alpha,n,statistic,value,stderr,criterion,pass\n");
        for r in &self.rows {
            let stderr = r.stderr.map(|v| v.to_string()).unwrap_or_default();
            let criterion = r.criterion.clone().unwrap_or_default();
            let pass = match r.pass {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "",
            };
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.experiment, r.model, r.alpha, r.n, r.statistic, r.value, stderr, criterion, pass
            );
        }
        s
    }

    /// Write report.csv, report.json and plotdata/*.csv under `dir`.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.csv"), self.csv_string())?;
        let json = serde_json::to_string_pretty(self).expect("report serializes");
        fs::write(dir.join("report.json"), json)?;
        if !self.plots.is_empty() {
            let plot_dir = dir.join("plotdata");
            fs::create_dir_all(&plot_dir)?;
            for p in &self.plots {
                let mut s = String::new();
                let _ = writeln!(s, "{},{}", p.x_label, p.y_label);
                for (x, y) in &p.points {
                    let _ = writeln!(s, "{x},{y}");
                }
                fs::write(plot_dir.join(format!("{}.csv", p.name)), s)?;
            }
        }
        Ok(())
    }

    /// All criterion rows passed / any failed / flagged inconclusive.
    pub fn outcome(&self) -> Outcome {
        if self.rows.iter().any(|r| r.pass == Some(false)) {
            Outcome::Fail
        } else if self.inconclusive {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        }
    }

    /// Rows carrying a criterion, for summaries.
    pub fn criterion_rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.criterion.is_some())
    }

    /// Each named criterion must be referenced by exactly one row, and
    /// every pass/fail row must cite a criterion.
    pub fn criteria_consistent(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for r in &self.rows {
            if r.pass.is_some() && r.criterion.is_none() {
                return false;
            }
            if let Some(c) = &r.criterion {
                if !seen.insert(c.clone()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn row(&self, statistic: &str, n: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.statistic == statistic && r.n == n)
    }
}
