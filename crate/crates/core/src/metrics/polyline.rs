//! Sampling of scalar completed-graph polylines and the monotone-matching
//! dynamic program over two sampled curves.
//!
//! The matching cost of a pair of samples is `max(|t1-t2|, |z1-z2|)` and the
//! program returns the minimum over monotone couplings of the maximum pair
//! cost. The result is an upper bound on the continuous infimum over
//! parametric representations and exceeds it by at most the sampling mesh,
//! which gives the bracket reported by the metric front end.

use crate::step_function::StepFunction;

/// Hard cap on subdivisions per polyline segment.
pub(crate) const MAX_SUBDIV_PER_SEGMENT: usize = 2047;

/// Safety cap on total samples per curve; refinement stops at the bracket
/// reached when the next level would exceed it.
pub(crate) const MAX_POINTS_PER_CURVE: usize = 8_000_000;

/// A scalar completed graph sampled along its polyline.
pub(crate) struct SampledCurve {
    pub t: Vec<f64>,
    pub z: Vec<f64>,
    /// Max distance between consecutive samples in the max metric.
    pub mesh: f64,
}

/// Vertices of the completed graph of a scalar step function.
pub(crate) fn scalar_vertices(f: &StepFunction) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(f.dim(), 1);
    let m = f.jump_count();
    let mut t = Vec::with_capacity(2 * m + 2);
    let mut z = Vec::with_capacity(2 * m + 2);
    t.push(0.0);
    z.push(f.initial()[0]);
    let mut prev = f.initial()[0];
    for i in 0..m {
        let ti = f.jump_time(i);
        let vi = f.jump_value(i)[0];
        t.push(ti);
        z.push(prev);
        t.push(ti);
        z.push(vi);
        prev = vi;
    }
    if m == 0 || f.jump_time(m - 1) < 1.0 {
        t.push(1.0);
        z.push(prev);
    }
    (t, z)
}

/// Longest segment of a vertex polyline in the max metric.
pub(crate) fn max_segment_length(t: &[f64], z: &[f64]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 1..t.len() {
        m = m.max((t[i] - t[i - 1]).abs().max((z[i] - z[i - 1]).abs()));
    }
    m
}

/// Sample a vertex polyline so that no consecutive pair of samples is
/// farther apart than `mesh_target` (subject to the per-segment cap).
pub(crate) fn sample_with_mesh(t: &[f64], z: &[f64], mesh_target: f64) -> SampledCurve {
    let mut st = Vec::new();
    let mut sz = Vec::new();
    let mut mesh: f64 = 0.0;
    st.push(t[0]);
    sz.push(z[0]);
    for i in 1..t.len() {
        let len = (t[i] - t[i - 1]).abs().max((z[i] - z[i - 1]).abs());
        let k = ((len / mesh_target).ceil() as usize).clamp(1, MAX_SUBDIV_PER_SEGMENT);
        for j in 1..=k {
            let s = j as f64 / k as f64;
            st.push(t[i - 1] + s * (t[i] - t[i - 1]));
            sz.push(z[i - 1] + s * (z[i] - z[i - 1]));
        }
        mesh = mesh.max(len / k as f64);
    }
    SampledCurve { t: st, z: sz, mesh }
}

/// Sample a vertex polyline with a fixed number of points per segment
/// (endpoints shared between segments).
pub(crate) fn sample_per_segment(t: &[f64], z: &[f64], samples_per_segment: usize) -> SampledCurve {
    let k = samples_per_segment.max(2) - 1;
    let mut st = Vec::new();
    let mut sz = Vec::new();
    let mut mesh: f64 = 0.0;
    st.push(t[0]);
    sz.push(z[0]);
    for i in 1..t.len() {
        let len = (t[i] - t[i - 1]).abs().max((z[i] - z[i - 1]).abs());
        for j in 1..=k {
            let s = j as f64 / k as f64;
            st.push(t[i - 1] + s * (t[i] - t[i - 1]));
            sz.push(z[i - 1] + s * (z[i] - z[i - 1]));
        }
        mesh = mesh.max(len / k as f64);
    }
    SampledCurve { t: st, z: sz, mesh }
}

#[inline]
fn pair_cost(ta: f64, za: f64, tb: f64, zb: f64) -> f64 {
    (ta - tb).abs().max((za - zb).abs())
}

/// Discrete Frechet value between two sampled curves.
///
/// Any coupling achieving max cost `c` only matches samples whose times
/// differ by at most `c`, so the program can be restricted to a time band;
/// the band is widened geometrically until the computed value certifies
/// itself (`value < band`). Small problems skip the banding.
pub(crate) fn discrete_frechet(a: &SampledCurve, b: &SampledCurve) -> f64 {
    let p = a.t.len();
    let q = b.t.len();
    if p.saturating_mul(q) <= 4_000_000 {
        return banded_pass(a, b, f64::INFINITY);
    }
    let mut band = (4.0 * a.mesh.max(b.mesh)).max(1e-9);
    loop {
        if band >= 1.0 {
            return banded_pass(a, b, f64::INFINITY);
        }
        let v = banded_pass(a, b, band);
        if v < band {
            return v;
        }
        band *= 4.0;
    }
}

/// One DP sweep restricted to `|t_a - t_b| <= band`.
fn banded_pass(a: &SampledCurve, b: &SampledCurve, band: f64) -> f64 {
    let p = a.t.len();
    let q = b.t.len();
    let inf = f64::INFINITY;
    let mut prev = vec![inf; q];
    let mut cur = vec![inf; q];
    let (mut prev_lo, mut prev_hi) = (0usize, 0usize);
    let (mut lo, mut hi) = (0usize, 0usize);
    for i in 0..p {
        let ti = a.t[i];
        // Advance the window; times are nondecreasing on both curves.
        while lo < q && b.t[lo] < ti - band {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < q && b.t[hi] <= ti + band {
            hi += 1;
        }
        if lo >= hi {
            return inf; // band too narrow to connect the curves
        }
        for j in lo..hi {
            let up = if i > 0 && j >= prev_lo && j < prev_hi { prev[j] } else { inf };
            let diag = if i > 0 && j > 0 && j - 1 >= prev_lo && j - 1 < prev_hi {
                prev[j - 1]
            } else {
                inf
            };
            let left = if j > lo { cur[j - 1] } else { inf };
            let best = up.min(diag).min(left);
            let c = pair_cost(ti, a.z[i], b.t[j], b.z[j]);
            cur[j] = if i == 0 && j == 0 {
                c
            } else {
                c.max(best)
            };
        }
        std::mem::swap(&mut prev, &mut cur);
        prev_lo = lo;
        prev_hi = hi;
    }
    if q - 1 >= prev_lo && q - 1 < prev_hi {
        prev[q - 1]
    } else {
        inf
    }
}

/// Full-table DP with coupling extraction, for witness construction on
/// small inputs. Returns the value and the matched index pairs in order.
pub(crate) fn frechet_with_coupling(
    a: &SampledCurve,
    b: &SampledCurve,
) -> Option<(f64, Vec<(usize, usize)>)> {
    let p = a.t.len();
    let q = b.t.len();
    if p.saturating_mul(q) > 4_000_000 {
        return None;
    }
    let inf = f64::INFINITY;
    let mut dp = vec![inf; p * q];
    for i in 0..p {
        for j in 0..q {
            let c = pair_cost(a.t[i], a.z[i], b.t[j], b.z[j]);
            let best = match (i, j) {
                (0, 0) => c,
                (0, _) => c.max(dp[j - 1]),
                (_, 0) => c.max(dp[(i - 1) * q]),
                (_, _) => {
                    let up = dp[(i - 1) * q + j];
                    let diag = dp[(i - 1) * q + j - 1];
                    let left = dp[i * q + j - 1];
                    c.max(up.min(diag).min(left))
                }
            };
            dp[i * q + j] = best;
        }
    }
    let value = dp[p * q - 1];
    // Backtrack, preferring the diagonal, then curve-a steps, then curve-b:
    // with the forward sweep this realizes the lexicographically earliest
    // optimal matching.
    let mut pairs = vec![(p - 1, q - 1)];
    let (mut i, mut j) = (p - 1, q - 1);
    while i > 0 || j > 0 {
        let diag = if i > 0 && j > 0 { dp[(i - 1) * q + j - 1] } else { inf };
        let up = if i > 0 { dp[(i - 1) * q + j] } else { inf };
        let left = if j > 0 { dp[i * q + j - 1] } else { inf };
        if diag <= up && diag <= left {
            i -= 1;
            j -= 1;
        } else if up <= left {
            i -= 1;
        } else {
            j -= 1;
        }
        pairs.push((i, j));
    }
    pairs.reverse();
    Some((value, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step_function::StepFunction;

    fn curve_of(f: &StepFunction, mesh: f64) -> SampledCurve {
        let (t, z) = scalar_vertices(f);
        sample_with_mesh(&t, &z, mesh)
    }

    #[test]
    fn identical_curves_have_zero_value() {
        let f = StepFunction::new(1, vec![0.0], vec![(0.5, vec![1.0])]).unwrap();
        let a = curve_of(&f, 0.01);
        let b = curve_of(&f, 0.01);
        assert_eq!(discrete_frechet(&a, &b), 0.0);
    }

    #[test]
    fn banded_matches_full_dp() {
        let f = StepFunction::new(1, vec![0.0], vec![(0.3, vec![1.0]), (0.6, vec![0.2])]).unwrap();
        let g = StepFunction::new(1, vec![0.1], vec![(0.45, vec![0.9])]).unwrap();
        let a = curve_of(&f, 0.004);
        let b = curve_of(&g, 0.004);
        let full = banded_pass(&a, &b, f64::INFINITY);
        let banded = discrete_frechet(&a, &b);
        assert!((full - banded).abs() < 1e-15);
    }

    #[test]
    fn sampling_respects_mesh_and_cap() {
        let f = StepFunction::new(1, vec![0.0], vec![(0.5, vec![1.0])]).unwrap();
        let (t, z) = scalar_vertices(&f);
        let s = sample_with_mesh(&t, &z, 0.1);
        assert!(s.mesh <= 0.1 + 1e-15);
        for i in 1..s.t.len() {
            let d = (s.t[i] - s.t[i - 1]).abs().max((s.z[i] - s.z[i - 1]).abs());
            assert!(d <= s.mesh + 1e-15);
        }
        let tiny = sample_with_mesh(&t, &z, 1e-9);
        assert_eq!(tiny.t.len(), 1 + 3 * MAX_SUBDIV_PER_SEGMENT);
    }

    #[test]
    fn coupling_is_monotone_and_complete() {
        let f = StepFunction::new(1, vec![0.0], vec![(0.3, vec![1.0])]).unwrap();
        let g = StepFunction::new(1, vec![0.0], vec![(0.5, vec![1.0])]).unwrap();
        let a = curve_of(&f, 0.02);
        let b = curve_of(&g, 0.02);
        let (v, pairs) = frechet_with_coupling(&a, &b).unwrap();
        assert!((v - discrete_frechet(&a, &b)).abs() < 1e-15);
        assert_eq!(pairs.first().copied(), Some((0, 0)));
        assert_eq!(pairs.last().copied(), Some((a.t.len() - 1, b.t.len() - 1)));
        for w in pairs.windows(2) {
            let (i0, j0) = w[0];
            let (i1, j1) = w[1];
            assert!(i1 >= i0 && j1 >= j0 && (i1 + j1) > (i0 + j0));
            assert!(i1 - i0 <= 1 && j1 - j0 <= 1);
        }
    }
}
