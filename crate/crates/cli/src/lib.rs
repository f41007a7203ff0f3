//! Experiment harness over the cadlag-limits core: declarative experiment
//! configurations, deterministic Monte Carlo runs with per-replication RNG
//! streams, and machine-readable reports (CSV rows, JSON metadata, plot
//! data).

pub mod config;
pub mod experiments;
pub mod report;
