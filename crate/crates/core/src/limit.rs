//! Partial-sum processes, exceedance point measures, cluster extraction and
//! the estimators and diagnostics built on them: extremal-index estimation
//! by blocks and by the spectral tail process, empirical tail windows, the
//! truncated Levy-measure tails, the small-jump maximal sum and the
//! Karamata truncated-mean ratio.
//!
//! Everything here is a pure function of a simulated [`Sample`] (or a
//! [`PointMeasure`]) plus explicit parameters; thresholds are always
//! expressed as multiples `u` of the normalizing constant `a_n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::weak_m1_distance;
use crate::sim::{normalizing_an, pareto_truncated_mean, Sample};
use crate::step_function::{max_norm, StepFunction};

/// A finite point measure on `[0,1] x {norm > cutoff}`: the restriction of
/// the time-space exceedance process to a relatively compact window.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMeasure {
    atoms: Vec<(f64, Vec<f64>)>,
    lower_cutoff: f64,
}

impl PointMeasure {
    /// Build a validated point measure; atoms are kept sorted by time.
    pub fn new(mut atoms: Vec<(f64, Vec<f64>)>, lower_cutoff: f64) -> Result<Self> {
        if !(lower_cutoff > 0.0) {
            return Err(Error::InvalidParameter("lower cutoff must be positive".into()));
        }
        for (t, mark) in &atoms {
            if !(0.0..=1.0).contains(t) {
                return Err(Error::TimeOutOfRange(*t));
            }
            if !(max_norm(mark) > lower_cutoff) {
                return Err(Error::InvalidParameter(format!(
                    "atom at t = {t} has norm {} <= cutoff {lower_cutoff}",
                    max_norm(mark)
                )));
            }
        }
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(Self { atoms, lower_cutoff })
    }

    pub fn atoms(&self) -> &[(f64, Vec<f64>)] {
        &self.atoms
    }

    pub fn lower_cutoff(&self) -> f64 {
        self.lower_cutoff
    }

    pub fn dim(&self) -> usize {
        self.atoms.first().map_or(0, |(_, m)| m.len())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Outcome of the continuity-set membership check.
#[derive(Debug, Clone)]
pub struct LambdaReport {
    pub is_member: bool,
    pub violations: Vec<String>,
}

/// Membership of a point measure in the continuity set of the summation
/// functional at level `u`: no atom at the endpoint times with norm above
/// `u`, no coordinate magnitude exactly `u` or infinite, and at every time
/// at most one open sign orthant carries atoms (zero coordinates belong to
/// no orthant).
pub fn lambda_membership(eta: &PointMeasure, u: f64) -> LambdaReport {
    let mut violations = Vec::new();
    for (t, mark) in eta.atoms() {
        if (*t == 0.0 || *t == 1.0) && max_norm(mark) > u {
            violations.push(format!("atom at boundary time {t} with norm above {u}"));
        }
        for (j, &x) in mark.iter().enumerate() {
            if x.abs() == u || x.abs().is_infinite() {
                violations.push(format!(
                    "coordinate {j} of atom at t = {t} has magnitude exactly {u} or infinity"
                ));
            }
        }
    }
    // Group atoms by exact time and compare full sign patterns of atoms
    // whose coordinates are all nonzero.
    let mut i = 0;
    while i < eta.len() {
        let mut j = i + 1;
        while j < eta.len() && eta.atoms[j].0 == eta.atoms[i].0 {
            j += 1;
        }
        if j - i > 1 {
            let mut pattern: Option<Vec<bool>> = None;
            for (t, mark) in &eta.atoms[i..j] {
                if mark.iter().any(|&x| x == 0.0) {
                    continue; // belongs to no orthant
                }
                let signs: Vec<bool> = mark.iter().map(|&x| x > 0.0).collect();
                match &pattern {
                    None => pattern = Some(signs),
                    Some(p) if *p != signs => {
                        violations.push(format!(
                            "atoms at t = {t} occupy more than one sign orthant"
                        ));
                        break;
                    }
                    _ => {}
                }
            }
        }
        i = j;
    }
    LambdaReport { is_member: violations.is_empty(), violations }
}

/// The summation functional: cumulative per-coordinate sum of the marks
/// whose coordinate magnitude exceeds `u`, as a cadlag step path started at
/// zero. Requires `u >= cutoff` so the functional is well defined on the
/// measure's window.
pub fn summation_functional(eta: &PointMeasure, u: f64) -> Result<StepFunction> {
    if u < eta.lower_cutoff() {
        return Err(Error::InvalidParameter(format!(
            "level u = {u} below the measure cutoff {}",
            eta.lower_cutoff()
        )));
    }
    let d = eta.dim().max(1);
    let mut jumps: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut acc = vec![0.0f64; d];
    let mut i = 0;
    while i < eta.len() {
        let t = eta.atoms[i].0;
        let mut j = i;
        let mut moved = false;
        while j < eta.len() && eta.atoms[j].0 == t {
            for (k, &x) in eta.atoms[j].1.iter().enumerate() {
                if x.abs() > u && x.abs().is_finite() {
                    acc[k] += x;
                    moved = true;
                }
            }
            j += 1;
        }
        if moved && t > 0.0 {
            jumps.push((t, acc.clone()));
        }
        i = j;
    }
    // Deduplicate identical consecutive values (all coordinates filtered).
    let mut clean: Vec<(f64, Vec<f64>)> = Vec::with_capacity(jumps.len());
    let mut prev = vec![0.0f64; d];
    for (t, v) in jumps {
        if v != prev {
            prev = v.clone();
            clean.push((t, v));
        }
    }
    StepFunction::new(d, vec![0.0; d], clean)
}

/// Centering mode for partial-sum paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// Subtract `floor(nt) E[(X^j/a_n) 1{|X^j|/a_n <= 1}]` per coordinate.
    TruncatedMean,
    /// No centering; the raw scaled partial sum.
    None,
}

/// The partial-sum step path `V_n(t) = sum_{k<=nt} X_k/a_n - floor(nt) m`
/// with `m` the unit-truncated coordinate mean (closed form for Pareto
/// marginals, empirical for the recurrence model).
pub fn partial_sum_process(sample: &Sample, centering: Centering) -> StepFunction {
    let d = sample.dim();
    let n = sample.len();
    let a_n = sample.a_n();
    let m = match centering {
        Centering::TruncatedMean => sample.truncated_coordinate_mean(1.0),
        Centering::None => vec![0.0; d],
    };
    let mut grid = Vec::with_capacity(n * d);
    let mut acc = vec![0.0f64; d];
    for k in 0..n {
        for (j, &x) in sample.row(k).iter().enumerate() {
            acc[j] += x / a_n;
            grid.push(acc[j] - (k + 1) as f64 * m[j]);
        }
    }
    StepFunction::from_grid_values(d, vec![0.0; d], &grid).expect("grid path is well formed")
}

/// The truncated partial-sum path: only coordinate entries with
/// `|X^j|/a_n > u` are summed, centered by the `(u,1]`-truncated mean.
pub fn truncated_partial_sum(sample: &Sample, u: f64) -> Result<StepFunction> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::InvalidParameter(format!("truncation level {u} outside (0,1]")));
    }
    let d = sample.dim();
    let n = sample.len();
    let a_n = sample.a_n();
    let m1 = sample.truncated_coordinate_mean(1.0);
    let mu = sample.truncated_coordinate_mean(u);
    let m: Vec<f64> = m1.iter().zip(&mu).map(|(a, b)| a - b).collect();
    let mut grid = Vec::with_capacity(n * d);
    let mut acc = vec![0.0f64; d];
    for k in 0..n {
        for (j, &x) in sample.row(k).iter().enumerate() {
            let scaled = x / a_n;
            if scaled.abs() > u {
                acc[j] += scaled;
            }
            grid.push(acc[j] - (k + 1) as f64 * m[j]);
        }
    }
    Ok(StepFunction::from_grid_values(d, vec![0.0; d], &grid).expect("grid path is well formed"))
}

/// Exceedance point process: atoms `(i/n, X_i/a_n)` with norm above `u`.
pub fn exceedance_process(sample: &Sample, u: f64) -> Result<PointMeasure> {
    if !(u > 0.0) {
        return Err(Error::InvalidParameter("threshold level must be positive".into()));
    }
    let n = sample.len();
    let a_n = sample.a_n();
    let mut atoms = Vec::new();
    for i in 0..n {
        if sample.norm_at(i) / a_n > u {
            let mark: Vec<f64> = sample.row(i).iter().map(|x| x / a_n).collect();
            atoms.push(((i + 1) as f64 / n as f64, mark));
        }
    }
    PointMeasure::new(atoms, u)
}

/// Values of one block scaled by the block threshold `a_n u`, kept only
/// when the block maximum exceeds it.
#[derive(Debug, Clone)]
pub struct ClusterSample {
    dim: usize,
    marks: Vec<f64>,
    /// Time `i/n` of the first exceedance inside the block.
    start_time: f64,
    block_index: usize,
}

impl ClusterSample {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.marks.len() / self.dim
    }

    pub fn mark(&self, i: usize) -> &[f64] {
        &self.marks[i * self.dim..(i + 1) * self.dim]
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn block_index(&self) -> usize {
        self.block_index
    }

    /// Number of marks with norm above one.
    pub fn exceedance_count(&self) -> usize {
        (0..self.len()).filter(|&i| max_norm(self.mark(i)) > 1.0).count()
    }
}

/// Partition the sample into `floor(n/r_n)` blocks of length `r_n` and keep
/// the blocks whose maximum norm exceeds `a_n u`, marks scaled by `a_n u`.
pub fn extract_clusters(sample: &Sample, u: f64, r_n: usize) -> Result<Vec<ClusterSample>> {
    let n = sample.len();
    if r_n == 0 || r_n > n {
        return Err(Error::InvalidParameter(format!("block length {r_n} outside 1..={n}")));
    }
    let a_n = sample.a_n();
    let scale = a_n * u;
    let d = sample.dim();
    let k_n = n / r_n;
    let mut out = Vec::new();
    for b in 0..k_n {
        let lo = b * r_n;
        let hi = lo + r_n;
        let mut first_exceedance = None;
        for i in lo..hi {
            if sample.norm_at(i) > scale {
                first_exceedance = Some(i);
                break;
            }
        }
        if let Some(first) = first_exceedance {
            let mut marks = Vec::with_capacity(r_n * d);
            for i in lo..hi {
                marks.extend(sample.row(i).iter().map(|x| x / scale));
            }
            out.push(ClusterSample {
                dim: d,
                marks,
                start_time: (first + 1) as f64 / n as f64,
                block_index: b,
            });
        }
    }
    Ok(out)
}

/// Blocks estimator of the extremal index with its ingredient counts, so
/// runs can be pooled across replications.
#[derive(Debug, Clone, Copy)]
pub struct ThetaBlocksEstimate {
    pub theta: f64,
    pub stderr: f64,
    pub exceeding_blocks: usize,
    pub total_exceedances: usize,
    pub block_count: usize,
}

/// Ratio of the block-exceedance frequency to `r_n` times the marginal
/// exceedance frequency over the covered range; equivalently, exceeding
/// blocks over total exceedances. Errors when no exceedances occur.
pub fn estimate_theta_blocks(sample: &Sample, u: f64, r_n: usize) -> Result<ThetaBlocksEstimate> {
    let n = sample.len();
    if r_n == 0 || r_n > n {
        return Err(Error::InvalidParameter(format!("block length {r_n} outside 1..={n}")));
    }
    let a_n = sample.a_n();
    let threshold = a_n * u;
    let k_n = n / r_n;
    let mut b_total = 0usize;
    let mut e_total = 0usize;
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(k_n);
    for b in 0..k_n {
        let lo = b * r_n;
        let e = (lo..lo + r_n).filter(|&i| sample.norm_at(i) > threshold).count();
        let bb = usize::from(e > 0);
        b_total += bb;
        e_total += e;
        pairs.push((bb as f64, e as f64));
    }
    if e_total == 0 {
        return Err(Error::Estimation(format!(
            "no exceedances above a_n*u = {threshold:.4e} in {k_n} blocks of length {r_n}"
        )));
    }
    let theta = b_total as f64 / e_total as f64;
    let stderr = theta_ratio_stderr(&pairs, theta);
    Ok(ThetaBlocksEstimate {
        theta,
        stderr,
        exceeding_blocks: b_total,
        total_exceedances: e_total,
        block_count: k_n,
    })
}

/// Delta-method standard error for a ratio of block sums.
pub fn theta_ratio_stderr(pairs: &[(f64, f64)], theta: f64) -> f64 {
    let k = pairs.len() as f64;
    if pairs.len() < 2 {
        return f64::NAN;
    }
    let mean_e = pairs.iter().map(|p| p.1).sum::<f64>() / k;
    if mean_e == 0.0 {
        return f64::NAN;
    }
    let mean_b = pairs.iter().map(|p| p.0).sum::<f64>() / k;
    let (mut s_bb, mut s_be, mut s_ee) = (0.0, 0.0, 0.0);
    for (b, e) in pairs {
        s_bb += (b - mean_b) * (b - mean_b);
        s_be += (b - mean_b) * (e - mean_e);
        s_ee += (e - mean_e) * (e - mean_e);
    }
    let denom = k - 1.0;
    let var = (s_bb / denom - 2.0 * theta * s_be / denom + theta * theta * s_ee / denom)
        / (k * mean_e * mean_e);
    var.max(0.0).sqrt()
}

/// A finite window of observations around an exceedance, scaled by the
/// threshold level: an empirical sample of the tail process.
#[derive(Debug, Clone)]
pub struct TailWindow {
    center_index: usize,
    dim: usize,
    half_width: usize,
    values: Vec<f64>,
}

impl TailWindow {
    /// Build a window; the center must exceed the (already scaled) level 1.
    pub fn new(center_index: usize, dim: usize, half_width: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != (2 * half_width + 1) * dim {
            return Err(Error::InvalidParameter("window length mismatch".into()));
        }
        let w = Self { center_index, dim, half_width, values };
        if !(w.norm_at_offset(0) > 1.0) {
            return Err(Error::InvalidParameter("window center must exceed the threshold".into()));
        }
        Ok(w)
    }

    pub fn center_index(&self) -> usize {
        self.center_index
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Scaled observation at signed offset `k` from the center.
    pub fn at_offset(&self, k: isize) -> &[f64] {
        let idx = (self.half_width as isize + k) as usize;
        &self.values[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn norm_at_offset(&self, k: isize) -> f64 {
        max_norm(self.at_offset(k))
    }
}

/// Empirical tail-process windows: for every index whose norm exceeds the
/// absolute `threshold`, the surrounding `2m+1` observations scaled by the
/// threshold. Windows overlapping the sample boundary are dropped.
pub fn estimate_tail_process(sample: &Sample, threshold: f64, m: usize) -> Vec<TailWindow> {
    let n = sample.len();
    let d = sample.dim();
    let mut out = Vec::new();
    if n < 2 * m + 1 {
        return out;
    }
    for t in m..n - m {
        if sample.norm_at(t) > threshold {
            let mut values = Vec::with_capacity((2 * m + 1) * d);
            for i in t - m..=t + m {
                values.extend(sample.row(i).iter().map(|x| x / threshold));
            }
            out.push(TailWindow { center_index: t, dim: d, half_width: m, values });
        }
    }
    out
}

/// Spectral estimator of the extremal index:
/// the Monte Carlo mean of `sup_{i>=0} |Theta_i|^alpha - sup_{i>=1}
/// |Theta_i|^alpha` over tail windows, with `Theta_i` the window scaled by
/// its center norm. Returns the estimate and its standard error.
pub fn theta_from_spectral(windows: &[TailWindow], alpha: f64) -> Result<(f64, f64)> {
    if windows.is_empty() {
        return Err(Error::Estimation("no tail windows provided".into()));
    }
    let mut terms = Vec::with_capacity(windows.len());
    for w in windows {
        let center = w.norm_at_offset(0);
        let m = w.half_width() as isize;
        let mut sup0: f64 = 0.0;
        let mut sup1: f64 = 0.0;
        for k in 0..=m {
            let norm = w.norm_at_offset(k) / center;
            sup0 = sup0.max(norm);
            if k >= 1 {
                sup1 = sup1.max(norm);
            }
        }
        terms.push(sup0.powf(alpha) - sup1.powf(alpha));
    }
    let mean = crate::stats::mean(&terms);
    let se = crate::stats::stderr_mean(&terms);
    Ok((mean, se))
}

/// Per-coordinate sign coherence of tail windows: `true` for coordinate `j`
/// when no window mixes strictly positive and strictly negative entries in
/// that coordinate. An empty window list is vacuously coherent (empty vec).
pub fn opposite_sign_check(windows: &[TailWindow]) -> Vec<bool> {
    let Some(first) = windows.first() else {
        return Vec::new();
    };
    let d = first.dim();
    let mut ok = vec![true; d];
    for w in windows {
        let m = w.half_width() as isize;
        for j in 0..d {
            let mut has_pos = false;
            let mut has_neg = false;
            for k in -m..=m {
                let x = w.at_offset(k)[j];
                has_pos |= x > 0.0;
                has_neg |= x < 0.0;
            }
            if has_pos && has_neg {
                ok[j] = false;
            }
        }
    }
    ok
}

/// Monte Carlo estimate of the truncated Levy-tail values
/// `nu^(u)((x, inf))` for one coordinate of the tail windows: the scaled
/// frequency of `u * sum_{i>=0} Y_i^j 1{|Y_i^j| > 1}` exceeding `x` jointly
/// with `sup_{i<=-1} |Y_i| <= 1`, times `u^{-alpha}`.
pub fn nu_u_estimate(
    windows: &[TailWindow],
    alpha: f64,
    u: f64,
    x_grid: &[f64],
    coord: usize,
) -> Result<Vec<f64>> {
    if windows.is_empty() {
        return Err(Error::Estimation("no tail windows provided".into()));
    }
    if !(u > 0.0) {
        return Err(Error::InvalidParameter("u must be positive".into()));
    }
    let d = windows[0].dim();
    if coord >= d {
        return Err(Error::CoordinateOutOfRange { index: coord, dim: d });
    }
    let mut sums = Vec::with_capacity(windows.len());
    for w in windows {
        let m = w.half_width() as isize;
        let left_ok = (-m..0).all(|k| w.norm_at_offset(k) <= 1.0);
        if !left_ok {
            sums.push(f64::NEG_INFINITY); // event fails regardless of x
            continue;
        }
        let mut s = 0.0;
        for k in 0..=m {
            let y = w.at_offset(k)[coord];
            if y.abs() > 1.0 {
                s += y;
            }
        }
        sums.push(u * s);
    }
    let n = windows.len() as f64;
    let scale = u.powf(-alpha);
    Ok(x_grid
        .iter()
        .map(|&x| scale * sums.iter().filter(|&&s| s > x).count() as f64 / n)
        .collect())
}

/// The small-jump maximal sum: `max_k` of the norm of the centered
/// cumulative sum of coordinate entries with `|X^j|/a_n <= u`. Equals the
/// sup distance between the partial-sum path and its `u`-truncated version.
pub fn small_jump_statistic(sample: &Sample, u: f64) -> f64 {
    let d = sample.dim();
    let n = sample.len();
    let a_n = sample.a_n();
    let m = sample.truncated_coordinate_mean(u);
    let mut acc = vec![0.0f64; d];
    let mut best: f64 = 0.0;
    for k in 0..n {
        for (j, &x) in sample.row(k).iter().enumerate() {
            let scaled = x / a_n;
            if scaled.abs() <= u {
                acc[j] += scaled;
            }
        }
        let norm = acc
            .iter()
            .enumerate()
            .fold(0.0f64, |mx, (j, v)| mx.max((v - (k + 1) as f64 * m[j]).abs()));
        best = best.max(norm);
    }
    best
}

/// Karamata truncated-mean ratio for the Pareto marginal at level `u a_n`:
/// `E[Z 1{Z <= b}] / (b P(Z > b))` with `b = u a_n`, which converges to
/// `alpha/(1-alpha)` for `alpha` below one.
pub fn karamata_ratio(alpha: f64, u: f64, n: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let b = u * normalizing_an(alpha, n)?;
    if b <= 1.0 {
        return Err(Error::Estimation(format!("truncation level {b} below the Pareto support")));
    }
    let mean = pareto_truncated_mean(alpha, b);
    let tail = b.powf(-alpha);
    Ok(mean / (b * tail))
}

/// Anticluster hit and center counts; see [`anticluster_statistic`].
/// Exposed separately so runs can be pooled across replications.
pub fn anticluster_counts(sample: &Sample, u: f64, r_n: usize, m: usize) -> Result<(usize, usize)> {
    if m == 0 || m > r_n {
        return Err(Error::InvalidParameter(format!("lag window {m}..{r_n} is empty")));
    }
    let n = sample.len();
    if 2 * r_n + 1 > n {
        return Err(Error::InvalidParameter("r_n too large for the sample".into()));
    }
    let threshold = sample.a_n() * u;
    let mut centers = 0usize;
    let mut hits = 0usize;
    for t in r_n..n - r_n {
        if sample.norm_at(t) <= threshold {
            continue;
        }
        centers += 1;
        let mut hit = false;
        for lag in m..=r_n {
            if sample.norm_at(t - lag) > threshold || sample.norm_at(t + lag) > threshold {
                hit = true;
                break;
            }
        }
        hits += usize::from(hit);
    }
    Ok((hits, centers))
}

/// Anticluster diagnostic: conditional frequency, over exceedances of
/// `a_n u` with a full `r_n`-window inside the sample, of a secondary
/// exceedance at lag `m <= |i| <= r_n`. Should fall to zero in `m` for
/// short-range dependence.
pub fn anticluster_statistic(sample: &Sample, u: f64, r_n: usize, m: usize) -> Result<f64> {
    let (hits, centers) = anticluster_counts(sample, u, r_n, m)?;
    if centers == 0 {
        return Err(Error::Estimation("no exceedances with a full window".into()));
    }
    Ok(hits as f64 / centers as f64)
}

/// Continuity probe for the summation functional: jitter the atom times by
/// `U(-jitter, jitter)` and each mark coordinate by the same noise divided
/// by the atom count (so the per-coordinate cumulative perturbation stays
/// within `jitter`), recompute the functional and return the nominal
/// perturbation size together with the product-metric distance.
///
/// Preconditions: the measure lies in the continuity set at `u`, atom times
/// sit `jitter`-inside (0,1) and `2 jitter` apart, every nonzero coordinate
/// magnitude is more than `jitter` away from `u`, and every norm stays
/// above the cutoff after perturbation.
pub fn psi_continuity_probe(
    eta: &PointMeasure,
    u: f64,
    jitter: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(jitter >= 0.0) {
        return Err(Error::Probe("jitter must be nonnegative".into()));
    }
    let report = lambda_membership(eta, u);
    if !report.is_member {
        return Err(Error::NotInLambda(report.violations.join("; ")));
    }
    if jitter == 0.0 {
        return Ok((0.0, 0.0));
    }
    let k = eta.len();
    for (idx, (t, mark)) in eta.atoms().iter().enumerate() {
        if !(*t > jitter && *t < 1.0 - jitter) {
            return Err(Error::Probe(format!("atom time {t} not {jitter}-inside (0,1)")));
        }
        for (t2, _) in eta.atoms().iter().skip(idx + 1) {
            if (t - t2).abs() <= 2.0 * jitter {
                return Err(Error::Probe(format!(
                    "atom times {t} and {t2} closer than 2*jitter"
                )));
            }
        }
        for &x in mark {
            if x != 0.0 && (x.abs() - u).abs() <= jitter {
                return Err(Error::Probe(format!(
                    "coordinate magnitude {} within jitter of the level {u}",
                    x.abs()
                )));
            }
        }
        if max_norm(mark) <= eta.lower_cutoff() + jitter {
            return Err(Error::Probe("atom norm within jitter of the cutoff".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mark_scale = jitter / k as f64;
    let mut atoms = Vec::with_capacity(k);
    for (t, mark) in eta.atoms() {
        let dt = (2.0 * rng.random::<f64>() - 1.0) * jitter;
        let mut new_mark = mark.clone();
        for x in new_mark.iter_mut() {
            *x += (2.0 * rng.random::<f64>() - 1.0) * mark_scale;
        }
        atoms.push((t + dt, new_mark));
    }
    let jittered = PointMeasure::new(atoms, eta.lower_cutoff())?;
    let base = summation_functional(eta, u)?;
    let moved = summation_functional(&jittered, u)?;
    let (a, b) = pad_to_common_dim(base, moved);
    let d = weak_m1_distance(&a, &b, 1e-3)?;
    Ok((jitter, d.value))
}

/// Summation functionals of an empty and a nonempty measure can disagree on
/// the (degenerate) dimension; pad the empty one.
fn pad_to_common_dim(a: StepFunction, b: StepFunction) -> (StepFunction, StepFunction) {
    if a.dim() == b.dim() {
        return (a, b);
    }
    let d = a.dim().max(b.dim());
    let pad = |f: StepFunction| -> StepFunction {
        if f.dim() == d {
            f
        } else {
            StepFunction::constant(vec![0.0; d]).expect("constant path")
        }
    };
    (pad(a), pad(b))
}
