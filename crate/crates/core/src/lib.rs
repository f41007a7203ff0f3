//! Computable Skorohod M1 machinery for d-dimensional cadlag step paths on
//! [0,1], together with the heavy-tailed simulation and point-process
//! estimation toolkit used to study partial-sum limits of stationary
//! regularly varying sequences.
//!
//! The crate is organized around four layers:
//!
//! - [`step_function`]: immutable step paths, their completed graphs and the
//!   elementary path operations (evaluation, projections, linear
//!   combinations, sup norm).
//! - [`metrics`]: the scalar M1 distance (bracketed dynamic program over
//!   completed-graph polylines), the product/weak-M1 metric, the uniform
//!   metric and a certified strong-M1 lower bound via linear combinations.
//! - [`sim`]: Pareto-driven stationary models (i.i.d., lagged, stochastic
//!   recurrence), alpha-stable sampling and the numeric stable CDF used as a
//!   Monte Carlo reference.
//! - [`limit`]: partial-sum processes, the summation functional on point
//!   measures, exceedance/cluster extraction and the estimators and
//!   diagnostics built on them (extremal index, tail process, truncated
//!   Levy-measure tails, small-jump and Karamata statistics).
//!
//! All values are plain immutable data; every operation is a pure function
//! of its inputs plus an explicit seed, so parallel callers can share them
//! freely.

pub mod error;
pub mod limit;
pub mod metrics;
pub mod sim;
pub mod stats;
pub mod step_function;

pub use error::{Error, Result};
pub use step_function::{CompletedGraph, StepFunction};
