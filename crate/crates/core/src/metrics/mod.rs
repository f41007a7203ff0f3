//! Skorohod M1 distances on cadlag step paths.
//!
//! The scalar M1 distance is the infimum over parametric representations of
//! the two completed graphs of the larger of the time and space
//! discrepancies. For step paths both graphs are polylines, and the infimum
//! equals the Frechet distance between the polylines under the
//! `max(|dt|, |dz|)` metric, which we bracket by a monotone-matching dynamic
//! program on refined samplings: the program value is a true upper bound and
//! exceeds the infimum by at most the sampling mesh.
//!
//! The product (weak M1) metric `d_p` is the max of the scalar distances of
//! the coordinate projections. The strong M1 distance is never computed
//! directly; linear combinations of coordinates provide certified lower
//! bounds for it.

mod polyline;

use crate::error::{Error, Result};
use crate::step_function::StepFunction;
use polyline::{
    discrete_frechet, frechet_with_coupling, max_segment_length, sample_per_segment,
    sample_with_mesh, scalar_vertices, SampledCurve, MAX_POINTS_PER_CURVE,
    MAX_SUBDIV_PER_SEGMENT,
};

/// Default bracket tolerance for metric computations.
pub const DEFAULT_TOL: f64 = 1e-4;

/// Graph-membership tolerance used when validating parametric
/// representations (tol / 10 for the default tolerance).
pub const DEFAULT_TOL_GRAPH: f64 = DEFAULT_TOL / 10.0;

/// A bracketed metric value: `lower_bound <= true distance <= value`, with
/// `value = upper_bound` the dynamic-program result at the finest refinement
/// level reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResult {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub refinement_levels: u32,
}

impl MetricResult {
    pub fn bracket_width(&self) -> f64 {
        self.upper_bound - self.lower_bound
    }

    pub fn converged(&self, tol: f64) -> bool {
        self.bracket_width() <= tol
    }

    fn exact(value: f64) -> Self {
        MetricResult { value, lower_bound: value, upper_bound: value, refinement_levels: 0 }
    }

    fn scaled(self, factor: f64) -> Self {
        MetricResult {
            value: self.value * factor,
            lower_bound: self.lower_bound * factor,
            upper_bound: self.upper_bound * factor,
            refinement_levels: self.refinement_levels,
        }
    }
}

fn require_scalar(f: &StepFunction) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch { left: f.dim(), right: 1 });
    }
    Ok(())
}

fn require_same_dim(x: &StepFunction, y: &StepFunction) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: y.dim() });
    }
    Ok(())
}

/// Scalar M1 distance with a certified bracket of width at most `tol`
/// (mesh permitting: segment sampling is capped, and when the cap is hit
/// the achieved bracket is reported instead).
pub fn m1_distance(x: &StepFunction, y: &StepFunction, tol: f64) -> Result<MetricResult> {
    require_scalar(x)?;
    require_scalar(y)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let (tx, zx) = scalar_vertices(x);
    let (ty, zy) = scalar_vertices(y);
    let longest = max_segment_length(&tx, &zx).max(max_segment_length(&ty, &zy));
    // 16 points on the longest segment at level zero, doubling per level.
    let mut mesh_target = longest / 15.0;
    let mut levels = 0u32;
    let mut result;
    loop {
        let a = sample_with_mesh(&tx, &zx, mesh_target);
        let b = sample_with_mesh(&ty, &zy, mesh_target);
        let value = discrete_frechet(&a, &b);
        let mesh = a.mesh.max(b.mesh);
        result = MetricResult {
            value,
            lower_bound: (value - mesh).max(0.0),
            upper_bound: value,
            refinement_levels: levels,
        };
        if result.bracket_width() <= tol {
            break;
        }
        let saturated = mesh_target <= longest / MAX_SUBDIV_PER_SEGMENT as f64;
        let too_large = a.t.len().max(b.t.len()) * 2 > MAX_POINTS_PER_CURVE;
        if saturated || too_large {
            break; // report the achieved bracket
        }
        mesh_target /= 2.0;
        levels += 1;
    }
    Ok(result)
}

/// Brute-force validation oracle: monotone-matching program over both
/// polylines sampled uniformly at `samples_per_segment` points per segment.
/// Converges to the M1 distance from above as the density grows.
pub fn m1_oracle(x: &StepFunction, y: &StepFunction, samples_per_segment: usize) -> Result<f64> {
    require_scalar(x)?;
    require_scalar(y)?;
    if samples_per_segment < 2 {
        return Err(Error::InvalidParameter(format!(
            "samples_per_segment must be at least 2, got {samples_per_segment}"
        )));
    }
    let (tx, zx) = scalar_vertices(x);
    let (ty, zy) = scalar_vertices(y);
    let a = sample_per_segment(&tx, &zx, samples_per_segment);
    let b = sample_per_segment(&ty, &zy, samples_per_segment);
    Ok(discrete_frechet(&a, &b))
}

/// Product (weak M1) metric `d_p`: the max over coordinates of the scalar
/// M1 distances of the projections. The bracket is the coordinatewise max.
pub fn weak_m1_distance(x: &StepFunction, y: &StepFunction, tol: f64) -> Result<MetricResult> {
    require_same_dim(x, y)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let mut combined = MetricResult::exact(0.0);
    for j in 0..x.dim() {
        let r = m1_distance(&x.project(j)?, &y.project(j)?, tol)?;
        combined = MetricResult {
            value: combined.value.max(r.value),
            lower_bound: combined.lower_bound.max(r.lower_bound),
            upper_bound: combined.upper_bound.max(r.upper_bound),
            refinement_levels: combined.refinement_levels.max(r.refinement_levels),
        };
    }
    Ok(combined)
}

/// Uniform (sup) distance: exact for step paths, evaluated over the union
/// of jump times together with the endpoints, using both the values and the
/// left limits.
pub fn uniform_distance(x: &StepFunction, y: &StepFunction) -> Result<f64> {
    require_same_dim(x, y)?;
    let mut times: Vec<f64> = Vec::with_capacity(x.jump_count() + y.jump_count() + 2);
    times.push(0.0);
    times.extend_from_slice(x.jump_times());
    times.extend_from_slice(y.jump_times());
    times.push(1.0);
    let mut d: f64 = 0.0;
    let diff_norm = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
    };
    for &t in &times {
        let xa = x.eval(t)?;
        let ya = y.eval(t)?;
        d = d.max(diff_norm(&xa, &ya));
        if t > 0.0 {
            let xl = x.left_limit(t)?;
            let yl = y.left_limit(t)?;
            d = d.max(diff_norm(&xl, &yl));
        }
    }
    Ok(d)
}

/// Certified lower bound for the strong M1 distance `d_s(x,y)` via the
/// linear functional `<c, .>`: a joint strong representation within `eps`
/// induces a scalar representation of the combination within
/// `max(1, |c|_1) * eps`, so
/// `d_s(x,y) >= d_M1(<c,x>, <c,y>) / max(1, |c|_1)`.
///
/// The returned bracket is scaled accordingly; `lower_bound` is the
/// certified bound.
pub fn strong_m1_lower_bound(
    x: &StepFunction,
    y: &StepFunction,
    c: &[f64],
    tol: f64,
) -> Result<MetricResult> {
    require_same_dim(x, y)?;
    let lx = x.linear_combination(c)?;
    let ly = y.linear_combination(c)?;
    let l1: f64 = c.iter().map(|w| w.abs()).sum();
    let r = m1_distance(&lx, &ly, tol * l1.max(1.0))?;
    Ok(r.scaled(1.0 / l1.max(1.0)))
}

/// A sampled weak parametric representation of a completed graph: a grid of
/// parameter values with the time component `r` and spatial component `u`
/// traced along the graph.
#[derive(Debug, Clone)]
pub struct ParametricRepresentation {
    pub grid: Vec<f64>,
    pub r: Vec<f64>,
    pub u: Vec<Vec<f64>>,
}

impl ParametricRepresentation {
    /// Validate the representation invariants against the function it
    /// claims to represent: endpoint pinning, monotonicity in the graph
    /// order, and graph membership within `tol_graph`.
    pub fn validate(&self, f: &StepFunction, tol_graph: f64) -> Result<()> {
        let n = self.grid.len();
        if n < 2 || self.r.len() != n || self.u.len() != n {
            return Err(Error::InvalidParameter("representation sample arrays mismatch".into()));
        }
        for w in self.grid.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidParameter("grid not strictly increasing".into()));
            }
        }
        if self.grid[0] != 0.0 || self.grid[n - 1] != 1.0 {
            return Err(Error::InvalidParameter("grid must span [0,1]".into()));
        }
        if self.r[0].abs() > tol_graph || (self.r[n - 1] - 1.0).abs() > tol_graph {
            return Err(Error::InvalidParameter("time component must run from 0 to 1".into()));
        }
        let terminal = f.terminal();
        let du = self.u[n - 1]
            .iter()
            .zip(terminal)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if du > tol_graph {
            return Err(Error::InvalidParameter("u(1) must equal x(1)".into()));
        }
        let graph = f.completed_graph();
        for k in 0..n {
            if k > 0 && self.r[k] < self.r[k - 1] - 1e-12 {
                return Err(Error::InvalidParameter("time component not nondecreasing".into()));
            }
            if distance_to_graph(self.r[k], &self.u[k], &graph) > tol_graph {
                return Err(Error::InvalidParameter(format!(
                    "sample {k} not on the completed graph"
                )));
            }
        }
        // Graph-order monotonicity at time ties.
        for k in 1..n {
            if self.r[k] - self.r[k - 1] > 1e-12 {
                continue;
            }
            let t = self.r[k].clamp(0.0, 1.0);
            let left = if t > 0.0 { f.left_limit(t)? } else { f.initial().to_vec() };
            let ok = left.iter().zip(self.u[k - 1].iter().zip(&self.u[k])).all(
                |(l, (a, b))| (l - a).abs() <= (l - b).abs() + tol_graph,
            );
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "samples {k} not nondecreasing in the graph order"
                )));
            }
        }
        Ok(())
    }
}

/// Max-metric distance from a time-space point to the completed-graph
/// polyline.
fn distance_to_graph(t: f64, u: &[f64], graph: &crate::step_function::CompletedGraph) -> f64 {
    let pts = graph.points();
    let mut best = f64::INFINITY;
    for w in pts.windows(2) {
        best = best.min(distance_to_segment(t, u, &w[0], &w[1]));
        if best == 0.0 {
            break;
        }
    }
    best
}

fn distance_to_segment(t: f64, u: &[f64], a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)) -> f64 {
    // Convex in the segment parameter; ternary search suffices.
    let eval = |s: f64| -> f64 {
        let pt = a.0 + s * (b.0 - a.0);
        let mut d = (t - pt).abs();
        for j in 0..u.len() {
            let pz = a.1[j] + s * (b.1[j] - a.1[j]);
            d = d.max((u[j] - pz).abs());
        }
        d
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..70 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval(m1) <= eval(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    eval(0.5 * (lo + hi)).min(eval(0.0)).min(eval(1.0))
}

/// Scalar M1 program with witness extraction: returns the program value and
/// the pair of sampled parametric representations realizing it
/// (lexicographically earliest optimal matching). Intended for validation on
/// small inputs; errors when the full table would be too large.
pub fn m1_distance_witness(
    x: &StepFunction,
    y: &StepFunction,
    samples_per_segment: usize,
) -> Result<(f64, ParametricRepresentation, ParametricRepresentation)> {
    require_scalar(x)?;
    require_scalar(y)?;
    if samples_per_segment < 2 {
        return Err(Error::InvalidParameter("samples_per_segment must be at least 2".into()));
    }
    let (tx, zx) = scalar_vertices(x);
    let (ty, zy) = scalar_vertices(y);
    let a = sample_per_segment(&tx, &zx, samples_per_segment);
    let b = sample_per_segment(&ty, &zy, samples_per_segment);
    let (value, pairs) = frechet_with_coupling(&a, &b)
        .ok_or_else(|| Error::InvalidParameter("input too large for witness extraction".into()))?;
    let make = |curve: &SampledCurve, idx: &dyn Fn(usize) -> usize| {
        let m = pairs.len();
        ParametricRepresentation {
            grid: (0..m).map(|k| k as f64 / (m - 1) as f64).collect(),
            r: (0..m).map(|k| curve.t[idx(k)]).collect(),
            u: (0..m).map(|k| vec![curve.z[idx(k)]]).collect(),
        }
    };
    let rep_x = make(&a, &|k| pairs[k].0);
    let rep_y = make(&b, &|k| pairs[k].1);
    Ok((value, rep_x, rep_y))
}
