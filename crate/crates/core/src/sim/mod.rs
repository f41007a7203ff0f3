//! Stationary heavy-tailed model simulators.
//!
//! All models are driven by exact standard Pareto noise,
//! `P(|Z| > x) = x^{-alpha}` for `x >= 1`, which keeps the normalizing
//! sequence closed form (`a_n = n^{1/alpha}`) and removes slowly varying
//! nuisance terms from the experiments. Every sampler is a pure function of
//! its configuration and a 64-bit seed; replication streams are derived from
//! a master seed with a splitmix64 mix so parallel and serial runs agree.

pub mod stable;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::step_function::max_norm;

/// Default burn-in for the stochastic recurrence model.
pub const DEFAULT_BURN_IN: usize = 10_000;

/// Noise law for the additive term of the stochastic recurrence model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SreNoise {
    /// B components i.i.d. Uniform(0,1].
    Uniform01,
    /// B components identically one.
    UnitConstant,
}

/// The stationary models under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    /// i.i.d. nonnegative standard Pareto.
    IidPareto,
    /// i.i.d. Pareto magnitude with an independent fair sign.
    IidSymmetricPareto,
    /// Lagged vectors `X_t = (Z_t, ..., Z_{t-q})` over one Pareto stream.
    Lagged { q: usize },
    /// Nonnegative stochastic recurrence `X_t = A_t X_{t-1} + B_t` with
    /// diagonal A of i.i.d. Uniform(0,c) entries, c calibrated so the
    /// Kesten tail index equals the target alpha.
    Sre { dim: usize, noise: SreNoise },
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::IidPareto | Model::IidSymmetricPareto => 1,
            Model::Lagged { q } => q + 1,
            Model::Sre { dim, .. } => *dim,
        }
    }

    /// Short label used in reports and CSV output.
    pub fn label(&self) -> String {
        match self {
            Model::IidPareto => "iid_pareto".into(),
            Model::IidSymmetricPareto => "iid_symmetric_pareto".into(),
            Model::Lagged { q } => format!("lagged({q})"),
            Model::Sre { dim, .. } => format!("sre({dim})"),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !matches!(self, Model::IidSymmetricPareto)
    }
}

/// Declarative description of one simulated sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub alpha: f64,
    pub model: Model,
    pub n: usize,
    pub seed: u64,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
}

fn default_burn_in() -> usize {
    DEFAULT_BURN_IN
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.n == 0 {
            return Err(Error::InvalidParameter("sample length must be positive".into()));
        }
        if let Model::Sre { dim, .. } = self.model {
            if dim == 0 {
                return Err(Error::InvalidParameter("sre dimension must be positive".into()));
            }
        }
        Ok(())
    }
}

/// A simulated stationary sample, values stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    dim: usize,
    values: Vec<f64>,
    config: ModelConfig,
}

impl Sample {
    /// Wrap precomputed values (row-major) under the given configuration.
    pub fn from_values(values: Vec<f64>, config: ModelConfig) -> Result<Self> {
        let dim = config.model.dim();
        if values.len() != config.n * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} values for n = {} and dim = {dim}, got {}",
                config.n * dim,
                config.n,
                values.len()
            )));
        }
        Ok(Self { dim, values, config })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    /// Observation at index `i` (0-based).
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn norm_at(&self, i: usize) -> f64 {
        max_norm(self.row(i))
    }

    /// Normalizing constant `a_n` for this sample's length and index.
    pub fn a_n(&self) -> f64 {
        normalizing_an(self.config.alpha, self.len()).expect("validated config")
    }

    /// Per-coordinate truncated mean `E[(X^j/a_n) 1{|X^j|/a_n <= u}]`:
    /// closed form for the Pareto-marginal models, empirical for the
    /// stochastic recurrence model.
    pub fn truncated_coordinate_mean(&self, u: f64) -> Vec<f64> {
        let alpha = self.config.alpha;
        let a_n = self.a_n();
        match self.config.model {
            Model::IidSymmetricPareto => vec![0.0; self.dim],
            Model::IidPareto | Model::Lagged { .. } => {
                let m = pareto_truncated_mean(alpha, u * a_n) / a_n;
                vec![m; self.dim]
            }
            Model::Sre { .. } => {
                let mut acc = vec![0.0; self.dim];
                for i in 0..self.len() {
                    for (j, &x) in self.row(i).iter().enumerate() {
                        let scaled = x / a_n;
                        if scaled.abs() <= u {
                            acc[j] += scaled;
                        }
                    }
                }
                let n = self.len() as f64;
                acc.iter_mut().for_each(|v| *v /= n);
                acc
            }
        }
    }
}

/// Check the tail index domain.
pub fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

/// The exact solution of `n P(|Z| > a) = 1` for standard Pareto noise:
/// `a_n = n^{1/alpha}`.
pub fn normalizing_an(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok((n as f64).powf(1.0 / alpha))
}

/// `E[Z 1{Z <= b}]` for standard Pareto(alpha); zero when `b < 1`.
pub fn pareto_truncated_mean(alpha: f64, b: f64) -> f64 {
    if b <= 1.0 {
        return 0.0;
    }
    if (alpha - 1.0).abs() < 1e-12 {
        b.ln()
    } else {
        alpha * (b.powf(1.0 - alpha) - 1.0) / (1.0 - alpha)
    }
}

/// splitmix64 finalizer, used to derive per-replication streams.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Seed for replication `k` of a master seed.
pub fn replication_seed(master: u64, k: u64) -> u64 {
    master ^ splitmix64(k.wrapping_add(1))
}

/// Deterministic RNG stream for one replication.
pub fn replication_rng(master: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replication_seed(master, k))
}

#[inline]
fn pareto_draw<R: Rng>(rng: &mut R, inv_alpha: f64) -> f64 {
    let u: f64 = rng.random();
    (1.0 - u).powf(-inv_alpha)
}

/// i.i.d. Pareto sample; the symmetric flag multiplies each value by an
/// independent fair sign (drawn after the magnitude).
pub fn sample_pareto(alpha: f64, n: usize, seed: u64, symmetric: bool) -> Result<Sample> {
    check_alpha(alpha)?;
    let model = if symmetric { Model::IidSymmetricPareto } else { Model::IidPareto };
    let config = ModelConfig { alpha, model, n, seed, burn_in: 0 };
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv_alpha = 1.0 / alpha;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let mut z = pareto_draw(&mut rng, inv_alpha);
        if symmetric && rng.random::<bool>() {
            z = -z;
        }
        values.push(z);
    }
    Ok(Sample { dim: 1, values, config })
}

/// Lagged process `X_t = (Z_t, ..., Z_{t-q})` over one nonnegative Pareto
/// stream, with q pre-samples so `X_1` is well defined.
pub fn simulate_lagged(alpha: f64, q: usize, n: usize, seed: u64) -> Result<Sample> {
    check_alpha(alpha)?;
    let config = ModelConfig { alpha, model: Model::Lagged { q }, n, seed, burn_in: 0 };
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv_alpha = 1.0 / alpha;
    let d = q + 1;
    // window[j] holds Z_{t-j}.
    let mut window: Vec<f64> = (0..q).map(|_| pareto_draw(&mut rng, inv_alpha)).collect();
    window.reverse();
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n {
        let z = pareto_draw(&mut rng, inv_alpha);
        window.insert(0, z);
        values.extend_from_slice(&window);
        window.pop();
    }
    Ok(Sample { dim: d, values, config })
}

/// Upper endpoint of the Uniform(0,c) multiplier law solving
/// `E[A^alpha] = c^alpha/(alpha+1) = 1`, so the Kesten tail index of the
/// recurrence equals `alpha`.
pub fn kesten_a_upper(alpha: f64) -> f64 {
    (1.0 + alpha).powf(1.0 / alpha)
}

/// Nonnegative stochastic recurrence `X_t = A_t X_{t-1} + B_t` started from
/// zero and burned in. Per step and coordinate the multiplier is drawn
/// before the additive term.
pub fn simulate_sre(
    alpha_target: f64,
    dim: usize,
    n: usize,
    burn_in: usize,
    seed: u64,
    noise: SreNoise,
) -> Result<Sample> {
    check_alpha(alpha_target)?;
    let config = ModelConfig {
        alpha: alpha_target,
        model: Model::Sre { dim, noise },
        n,
        seed,
        burn_in,
    };
    config.validate()?;
    let c = kesten_a_upper(alpha_target);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = vec![0.0f64; dim];
    let mut values = Vec::with_capacity(n * dim);
    for step in 0..burn_in + n {
        for x in state.iter_mut() {
            let a = c * rng.random::<f64>();
            let b = match noise {
                SreNoise::Uniform01 => 1.0 - rng.random::<f64>(),
                SreNoise::UnitConstant => 1.0,
            };
            *x = a * *x + b;
        }
        let norm = max_norm(&state);
        if !norm.is_finite() || norm > 1e250 {
            return Err(Error::Diverged { step, norm });
        }
        if step >= burn_in {
            values.extend_from_slice(&state);
        }
    }
    Ok(Sample { dim, values, config })
}

/// Simulate from a declarative configuration.
pub fn generate(config: &ModelConfig) -> Result<Sample> {
    config.validate()?;
    match config.model {
        Model::IidPareto => sample_pareto(config.alpha, config.n, config.seed, false),
        Model::IidSymmetricPareto => sample_pareto(config.alpha, config.n, config.seed, true),
        Model::Lagged { q } => simulate_lagged(config.alpha, q, config.n, config.seed),
        Model::Sre { dim, noise } => simulate_sre(
            config.alpha,
            dim,
            config.n,
            config.burn_in,
            config.seed,
            noise,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;

    #[test]
    fn pareto_support_and_tail() {
        let s = sample_pareto(1.5, 1_000_000, 7, false).unwrap();
        assert!((0..s.len()).all(|i| s.row(i)[0] >= 1.0));
        // P(Z > 2) = 2^{-1.5}; binomial 3-sigma band.
        let p = 2.0f64.powf(-1.5);
        let hits = (0..s.len()).filter(|&i| s.row(i)[0] > 2.0).count() as f64;
        let n = s.len() as f64;
        let sigma = (p * (1.0 - p) * n).sqrt();
        assert!((hits - p * n).abs() < 3.0 * sigma, "hits {hits} expected {}", p * n);
    }

    #[test]
    fn symmetric_signs_are_balanced() {
        let s = sample_pareto(1.0, 200_000, 11, true).unwrap();
        let neg = (0..s.len()).filter(|&i| s.row(i)[0] < 0.0).count() as f64;
        let n = s.len() as f64;
        assert!((neg - 0.5 * n).abs() < 3.0 * (0.25 * n).sqrt());
        assert!((0..s.len()).all(|i| s.row(i)[0].abs() >= 1.0));
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let a = sample_pareto(0.7, 1000, 42, true).unwrap();
        let b = sample_pareto(0.7, 1000, 42, true).unwrap();
        assert_eq!(a, b);
        let c = simulate_lagged(1.5, 2, 500, 9).unwrap();
        let d = simulate_lagged(1.5, 2, 500, 9).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn normalizing_constants() {
        assert!((normalizing_an(0.5, 10_000).unwrap() - 1e8).abs() < 1e-3);
        assert!((normalizing_an(1.0, 100).unwrap() - 100.0).abs() < 1e-12);
        assert!(normalizing_an(2.0, 100).is_err());
        assert!(normalizing_an(0.0, 100).is_err());
    }

    #[test]
    fn lagged_construction_identities() {
        let s = simulate_lagged(1.2, 1, 2000, 5).unwrap();
        assert_eq!(s.dim(), 2);
        // Coordinate 2 of X_t equals coordinate 1 of X_{t-1}.
        for t in 1..s.len() {
            assert_eq!(s.row(t)[1], s.row(t - 1)[0]);
        }
        // q = 0 coincides with the plain Pareto stream... with matching draws.
        let l0 = simulate_lagged(1.2, 0, 500, 5).unwrap();
        let p = sample_pareto(1.2, 500, 5, false).unwrap();
        for t in 0..500 {
            assert_eq!(l0.row(t)[0], p.row(t)[0]);
        }
    }

    #[test]
    fn lagged_marginals_are_pareto() {
        let s = simulate_lagged(1.0, 3, 400_000, 23).unwrap();
        for j in 0..4 {
            let p = 3.0f64.powf(-1.0);
            let hits = (0..s.len()).filter(|&i| s.row(i)[j] > 3.0).count() as f64;
            let n = s.len() as f64;
            assert!((hits - p * n).abs() < 4.0 * (p * n).sqrt(), "coordinate {j}");
        }
    }

    #[test]
    fn sre_zero_multiplier_reduces_to_noise() {
        // With alpha close to 2 the multiplier cap c is ~1.73; instead force
        // A = 0 by checking the recursion identity directly on a custom run:
        // the degenerate case is covered via the unit-noise law where
        // X_t - B_t = A_t X_{t-1} must be nonnegative and bounded by c*X_{t-1}.
        let s = simulate_sre(1.5, 1, 2000, 100, 3, SreNoise::UnitConstant).unwrap();
        let c = kesten_a_upper(1.5);
        for t in 1..s.len() {
            let x_prev = s.row(t - 1)[0];
            let x = s.row(t)[0];
            assert!(x >= 1.0 - 1e-12);
            assert!(x <= c * x_prev + 1.0 + 1e-9);
        }
    }

    #[test]
    fn sre_is_nonnegative_and_stationary_in_the_tail() {
        let s = simulate_sre(0.8, 2, 100_000, 5_000, 17, SreNoise::Uniform01).unwrap();
        assert!((0..s.len()).all(|i| s.row(i).iter().all(|&x| x >= 0.0)));
        // First/second half tail frequencies agree. Exceedances of this
        // model cluster, so the half-sum variance is estimated from block
        // counts rather than a binomial formula.
        let q = {
            let mut v: Vec<f64> = (0..s.len()).map(|i| s.norm_at(i)).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v[(0.99 * v.len() as f64) as usize]
        };
        let half = s.len() / 2;
        let block = 500;
        let half_stats = |range: std::ops::Range<usize>| -> (f64, f64) {
            let counts: Vec<f64> = range
                .clone()
                .step_by(block)
                .map(|lo| {
                    (lo..(lo + block).min(range.end))
                        .filter(|&i| s.norm_at(i) > q)
                        .count() as f64
                })
                .collect();
            let total: f64 = counts.iter().sum();
            let var = stats::variance(&counts) * counts.len() as f64;
            (total, var)
        };
        let (h1, v1) = half_stats(0..half);
        let (h2, v2) = half_stats(half..s.len());
        let se = (v1 + v2).sqrt();
        assert!((h1 - h2).abs() < 4.0 * se, "h1 {h1} h2 {h2} se {se}");
    }

    #[test]
    fn sre_hill_index_matches_target() {
        // d = 1, A ~ Uniform(0,c) with E[A^alpha] = 1, B = 1: the Kesten
        // tail index equals alpha. Single-k Hill readings wander with the
        // bias/variance tradeoff, so read the stable stretch of the Hill
        // plot (k between 2e3 and 1e4 at n = 1e6).
        let alpha = 1.5;
        let s = simulate_sre(alpha, 1, 1_000_000, 10_000, 29, SreNoise::UnitConstant).unwrap();
        let data: Vec<f64> = (0..s.len()).map(|i| s.row(i)[0]).collect();
        let ks: Vec<usize> = (2_000..=10_000).step_by(500).collect();
        let readings: Vec<f64> = ks.iter().map(|&k| stats::hill_tail_index(&data, k)).collect();
        let est = stats::mean(&readings);
        assert!((est - alpha).abs() < 0.1, "hill plot average = {est}");
    }

    #[test]
    fn truncated_mean_closed_form() {
        // E[Z 1{Z<=b}] = alpha (b^{1-alpha}-1)/(1-alpha) for Pareto.
        assert_eq!(pareto_truncated_mean(0.5, 0.5), 0.0);
        let b = 100.0;
        let m = pareto_truncated_mean(0.5, b);
        assert!((m - (b.sqrt() - 1.0)).abs() < 1e-12);
        // alpha = 1 branch.
        assert!((pareto_truncated_mean(1.0, b) - b.ln()).abs() < 1e-12);
    }

    #[test]
    fn replication_streams_differ() {
        let a = replication_seed(99, 0);
        let b = replication_seed(99, 1);
        assert_ne!(a, b);
    }
}
