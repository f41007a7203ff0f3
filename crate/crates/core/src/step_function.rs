//! d-dimensional cadlag step paths on [0,1] and their completed graphs.
//!
//! A path is stored as an initial value plus a strictly increasing sequence
//! of jump times in (0,1], each carrying the value the path takes from that
//! time (inclusive) onward. Evaluation is right-continuous by construction
//! and consecutive stored values always differ in at least one coordinate,
//! so no degenerate (null) jumps exist.
//!
//! Throughout the crate the vector norm is the max norm
//! `max_j |x^j|`, which makes an exceedance of the norm equivalent to an
//! exceedance of some coordinate.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Max norm of a vector.
pub fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// An immutable d-dimensional cadlag step function on [0,1].
///
/// Jump values are stored row-major in a flat buffer so large partial-sum
/// paths (one jump per sample index) stay cache friendly.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    dim: usize,
    initial: Vec<f64>,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Build a validated step function from explicit jumps.
    ///
    /// Jump times must be strictly increasing inside (0,1] and every stored
    /// value must differ from its predecessor in at least one coordinate.
    pub fn new(dim: usize, initial: Vec<f64>, jumps: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidStepFunction("dimension must be positive".into()));
        }
        if initial.len() != dim {
            return Err(Error::InvalidStepFunction(format!(
                "initial value has length {}, expected {dim}",
                initial.len()
            )));
        }
        let mut times = Vec::with_capacity(jumps.len());
        let mut values = Vec::with_capacity(jumps.len() * dim);
        let mut prev_t = 0.0;
        let mut prev: &[f64] = &initial;
        for (t, v) in &jumps {
            if !(*t > 0.0 && *t <= 1.0) {
                return Err(Error::InvalidStepFunction(format!(
                    "jump time {t} outside (0,1]"
                )));
            }
            if !times.is_empty() && *t <= prev_t {
                return Err(Error::InvalidStepFunction(format!(
                    "jump times not strictly increasing at {t}"
                )));
            }
            if v.len() != dim {
                return Err(Error::InvalidStepFunction(format!(
                    "jump value has length {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().zip(prev).all(|(a, b)| a == b) {
                return Err(Error::InvalidStepFunction(format!(
                    "null jump stored at t = {t}"
                )));
            }
            times.push(*t);
            values.extend_from_slice(v);
            prev_t = *t;
            prev = &values[values.len() - dim..];
        }
        Ok(Self { dim, initial, times, values })
    }

    /// Build from path values sampled at times `(k+1)/len` for `k = 0..len`,
    /// dropping null jumps. This is the natural constructor for partial-sum
    /// paths: `values_at[k]` is the value on `[(k+1)/len, (k+2)/len)`.
    pub fn from_grid_values(dim: usize, initial: Vec<f64>, values_at: &[f64]) -> Result<Self> {
        if dim == 0 || values_at.len() % dim != 0 {
            return Err(Error::InvalidStepFunction("grid values not a multiple of dim".into()));
        }
        let n = values_at.len() / dim;
        let mut times = Vec::new();
        let mut values = Vec::new();
        let mut prev: &[f64] = &initial;
        for k in 0..n {
            let row = &values_at[k * dim..(k + 1) * dim];
            if row.iter().zip(prev).any(|(a, b)| a != b) {
                times.push((k + 1) as f64 / n as f64);
                values.extend_from_slice(row);
                prev = &values[values.len() - dim..];
            }
        }
        if initial.len() != dim {
            return Err(Error::InvalidStepFunction("initial length mismatch".into()));
        }
        Ok(Self { dim, initial, times, values })
    }

    /// Constant path.
    pub fn constant(initial: Vec<f64>) -> Result<Self> {
        Self::new(initial.len(), initial, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn jump_count(&self) -> usize {
        self.times.len()
    }

    pub fn jump_time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.times
    }

    /// Value the path takes from jump `i` onward.
    pub fn jump_value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Value at t = 1.
    pub fn terminal(&self) -> &[f64] {
        if self.times.is_empty() {
            &self.initial
        } else {
            self.jump_value(self.times.len() - 1)
        }
    }

    /// Right-continuous evaluation at `t` in [0,1].
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        Ok(self.value_slice_at(t).to_vec())
    }

    /// Left limit at `t` in (0,1]; equals `eval(t)` when no jump sits at `t`.
    pub fn left_limit(&self, t: f64) -> Result<Vec<f64>> {
        if t == 0.0 {
            return Err(Error::LeftLimitAtZero);
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        // Last jump strictly before t.
        let idx = self.times.partition_point(|&s| s < t);
        Ok(if idx == 0 {
            self.initial.clone()
        } else {
            self.jump_value(idx - 1).to_vec()
        })
    }

    fn value_slice_at(&self, t: f64) -> &[f64] {
        let idx = self.times.partition_point(|&s| s <= t);
        if idx == 0 {
            &self.initial
        } else {
            self.jump_value(idx - 1)
        }
    }

    /// Coordinate path `x^j` with null jumps dropped.
    pub fn project(&self, coord: usize) -> Result<StepFunction> {
        if coord >= self.dim {
            return Err(Error::CoordinateOutOfRange { index: coord, dim: self.dim });
        }
        let mut jumps = Vec::new();
        let mut prev = self.initial[coord];
        for i in 0..self.times.len() {
            let v = self.jump_value(i)[coord];
            if v != prev {
                jumps.push((self.times[i], vec![v]));
                prev = v;
            }
        }
        StepFunction::new(1, vec![self.initial[coord]], jumps)
    }

    /// Scalar path `t -> <c, x(t)>`; null jumps (cancellations) are dropped.
    pub fn linear_combination(&self, c: &[f64]) -> Result<StepFunction> {
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch { left: c.len(), right: self.dim });
        }
        if c.iter().all(|&w| w == 0.0) {
            return Err(Error::ZeroCombination);
        }
        let dot = |row: &[f64]| -> f64 { row.iter().zip(c).map(|(a, b)| a * b).sum() };
        let mut jumps = Vec::new();
        let mut prev = dot(&self.initial);
        for i in 0..self.times.len() {
            let v = dot(self.jump_value(i));
            if v != prev {
                jumps.push((self.times[i], vec![v]));
                prev = v;
            }
        }
        StepFunction::new(1, vec![dot(&self.initial)], jumps)
    }

    /// `sup_t max_j |x^j(t)|`: for a step path, the max over the initial and
    /// all stored values.
    pub fn sup_norm(&self) -> f64 {
        let mut m = max_norm(&self.initial);
        for i in 0..self.times.len() {
            m = m.max(max_norm(self.jump_value(i)));
        }
        m
    }

    /// The completed graph: the ordered polyline through every flat stretch
    /// and through the product segment `[[x(t-), x(t)]]` at every jump
    /// (vertical segments realized as straight lines).
    pub fn completed_graph(&self) -> CompletedGraph {
        let mut points = Vec::with_capacity(2 * self.times.len() + 2);
        points.push((0.0, self.initial.clone()));
        let mut prev: &[f64] = &self.initial;
        for i in 0..self.times.len() {
            let t = self.times[i];
            points.push((t, prev.to_vec()));
            points.push((t, self.jump_value(i).to_vec()));
            prev = self.jump_value(i);
        }
        let last_t = self.times.last().copied().unwrap_or(0.0);
        if last_t < 1.0 {
            points.push((1.0, prev.to_vec()));
        }
        CompletedGraph { points }
    }
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct JumpRepr<'a> {
            t: f64,
            v: &'a [f64],
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            dim: usize,
            initial: &'a [f64],
            jumps: Vec<JumpRepr<'a>>,
        }
        let jumps = (0..self.jump_count())
            .map(|i| JumpRepr { t: self.times[i], v: self.jump_value(i) })
            .collect();
        Repr { dim: self.dim, initial: &self.initial, jumps }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct JumpRepr {
            t: f64,
            v: Vec<f64>,
        }
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            initial: Vec<f64>,
            jumps: Vec<JumpRepr>,
        }
        let r = Repr::deserialize(deserializer)?;
        StepFunction::new(r.dim, r.initial, r.jumps.into_iter().map(|j| (j.t, j.v)).collect())
            .map_err(D::Error::custom)
    }
}

/// The completed graph of a step path as an ordered time-space polyline.
///
/// Consecutive points either share their value (horizontal stretch) or their
/// time (vertical segment inside the jump's product segment).
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedGraph {
    points: Vec<(f64, Vec<f64>)>,
}

impl CompletedGraph {
    pub fn points(&self) -> &[(f64, Vec<f64>)] {
        &self.points
    }

    /// Check that the vertex sequence is nondecreasing in the graph order of
    /// `f`: `(t1,z1) <= (t2,z2)` iff `t1 < t2`, or `t1 = t2` and
    /// `|x^j(t1-) - z1^j| <= |x^j(t2-) - z2^j|` for all coordinates.
    pub fn verify_order(&self, f: &StepFunction) -> bool {
        for w in self.points.windows(2) {
            let (t1, z1) = (&w[0].0, &w[0].1);
            let (t2, z2) = (&w[1].0, &w[1].1);
            if t1 < t2 {
                continue;
            }
            if t1 > t2 {
                return false;
            }
            let left = match f.left_limit(*t1) {
                Ok(v) => v,
                Err(_) => f.initial().to_vec(),
            };
            let ok = left
                .iter()
                .zip(z1.iter().zip(z2))
                .all(|(l, (a, b))| (l - a).abs() <= (l - b).abs() + 1e-12);
            if !ok {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_d() -> StepFunction {
        StepFunction::new(2, vec![0.0, 0.0], vec![(0.5, vec![2.0, -3.0])]).unwrap()
    }

    #[test]
    fn eval_is_right_continuous_at_jump() {
        let f = two_d();
        assert_eq!(f.eval(0.5).unwrap(), vec![2.0, -3.0]);
        assert_eq!(f.eval(0.49).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn eval_constant_path() {
        let f = StepFunction::constant(vec![1.0, 1.0]).unwrap();
        assert_eq!(f.eval(0.7).unwrap(), vec![1.0, 1.0]);
        assert!(f.eval(1.2).is_err());
        assert!(f.eval(-0.1).is_err());
    }

    #[test]
    fn left_limits() {
        let f = two_d();
        assert_eq!(f.left_limit(0.5).unwrap(), vec![0.0, 0.0]);
        assert_eq!(f.left_limit(0.7).unwrap(), vec![2.0, -3.0]);
        let c = StepFunction::constant(vec![1.0, 1.0]).unwrap();
        assert_eq!(c.left_limit(1.0).unwrap(), vec![1.0, 1.0]);
        assert!(matches!(c.left_limit(0.0), Err(Error::LeftLimitAtZero)));
    }

    #[test]
    fn completed_graph_single_jump() {
        let f = StepFunction::new(1, vec![0.0], vec![(0.5, vec![1.0])]).unwrap();
        let g = f.completed_graph();
        assert_eq!(
            g.points(),
            &[
                (0.0, vec![0.0]),
                (0.5, vec![0.0]),
                (0.5, vec![1.0]),
                (1.0, vec![1.0])
            ]
        );
        assert!(g.verify_order(&f));
    }

    #[test]
    fn completed_graph_no_jump() {
        let f = StepFunction::constant(vec![3.0]).unwrap();
        assert_eq!(f.completed_graph().points(), &[(0.0, vec![3.0]), (1.0, vec![3.0])]);
    }

    #[test]
    fn completed_graph_vertical_segment_is_ordered() {
        let f = two_d();
        let g = f.completed_graph();
        assert!(g.verify_order(&f));
        // Vertical segment endpoints span the product segment [0,2] x [-3,0].
        assert_eq!(g.points()[1], (0.5, vec![0.0, 0.0]));
        assert_eq!(g.points()[2], (0.5, vec![2.0, -3.0]));
    }

    #[test]
    fn projection_drops_null_jumps() {
        let f = two_d();
        let p1 = f.project(0).unwrap();
        assert_eq!(p1.jump_count(), 1);
        assert_eq!(p1.eval(0.6).unwrap(), vec![2.0]);
        let p2 = f.project(1).unwrap();
        assert_eq!(p2.eval(0.6).unwrap(), vec![-3.0]);

        let g = StepFunction::new(2, vec![0.0, 7.0], vec![(0.3, vec![1.0, 7.0])]).unwrap();
        let p = g.project(1).unwrap();
        assert_eq!(p.jump_count(), 0);
        assert!(f.project(2).is_err());
    }

    #[test]
    fn linear_combinations() {
        let f = two_d();
        let s = f.linear_combination(&[1.0, 1.0]).unwrap();
        assert_eq!(s.eval(0.6).unwrap(), vec![-1.0]);
        assert!(f.linear_combination(&[0.0, 0.0]).is_err());

        // c = e_1 matches the projection pathwise.
        let lc = f.linear_combination(&[1.0, 0.0]).unwrap();
        assert_eq!(lc, f.project(0).unwrap());

        // Equal coordinates cancel under (1,-1).
        let eq = StepFunction::new(2, vec![1.0, 1.0], vec![(0.4, vec![2.0, 2.0])]).unwrap();
        let z = eq.linear_combination(&[1.0, -1.0]).unwrap();
        assert_eq!(z.jump_count(), 0);
        assert_eq!(z.eval(0.9).unwrap(), vec![0.0]);
    }

    #[test]
    fn sup_norms() {
        assert_eq!(StepFunction::constant(vec![1.0, 1.0]).unwrap().sup_norm(), 1.0);
        assert_eq!(two_d().sup_norm(), 3.0);
        assert_eq!(StepFunction::constant(vec![0.0]).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn rejects_invalid_jumps() {
        assert!(StepFunction::new(1, vec![0.0], vec![(0.0, vec![1.0])]).is_err());
        assert!(StepFunction::new(1, vec![0.0], vec![(1.1, vec![1.0])]).is_err());
        assert!(StepFunction::new(
            1,
            vec![0.0],
            vec![(0.5, vec![1.0]), (0.4, vec![2.0])]
        )
        .is_err());
        // Null jump.
        assert!(StepFunction::new(1, vec![0.0], vec![(0.5, vec![0.0])]).is_err());
    }

    #[test]
    fn grid_constructor_drops_nulls() {
        let f = StepFunction::from_grid_values(1, vec![0.0], &[0.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(f.jump_count(), 2);
        assert_eq!(f.jump_time(0), 0.5);
        assert_eq!(f.jump_time(1), 1.0);
    }
}
