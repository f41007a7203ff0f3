//! Small statistics toolbox: empirical summaries, Kolmogorov-Smirnov
//! statistics against model CDFs, the Hill estimator and the closed-form
//! reference distributions (Frechet, exponential) used by the experiment
//! harness.

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Standard error of the sample mean.
pub fn stderr_mean(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Median of an unsorted slice (copies and sorts).
pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Quantile by linear interpolation of order statistics.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        v[lo]
    } else {
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    }
}

/// Large-sample standard error of the sample median, via the normal
/// reference rule applied to the interquartile range.
pub fn median_stderr(xs: &[f64]) -> f64 {
    if xs.len() < 4 {
        return f64::NAN;
    }
    let sigma = (quantile(xs, 0.75) - quantile(xs, 0.25)) / 1.349;
    1.2533 * sigma / (xs.len() as f64).sqrt()
}

/// Two-sided KS statistic `sup_x |F_n(x) - F(x)|` of a sample against a
/// model CDF. The sample need not be sorted.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut v = sample.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in v.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Empirical CDF pairs `(x_(i), (i+1)/n)` for plot data.
pub fn ecdf(sample: &[f64]) -> Vec<(f64, f64)> {
    let mut v = sample.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len() as f64;
    v.into_iter().enumerate().map(|(i, x)| (x, (i + 1) as f64 / n)).collect()
}

/// Frechet CDF `exp(-x^{-alpha})` for x > 0, 0 otherwise.
pub fn frechet_cdf(x: f64, alpha: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-x.powf(-alpha)).exp()
    }
}

/// Exponential CDF with the given rate.
pub fn exponential_cdf(x: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        1.0 - (-rate * x).exp()
    }
}

/// Hill estimator of the tail index from the top `k` order statistics of
/// the absolute values.
pub fn hill_tail_index(data: &[f64], k: usize) -> f64 {
    let mut v: Vec<f64> = data.iter().map(|x| x.abs()).filter(|x| *x > 0.0).collect();
    if k == 0 || k >= v.len() {
        return f64::NAN;
    }
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let x_k = v[k];
    if x_k <= 0.0 {
        return f64::NAN;
    }
    let sum_log: f64 = v[..k].iter().map(|x| (x / x_k).ln()).sum();
    k as f64 / sum_log
}

/// 16-point Gauss-Legendre nodes and weights on [-1,1].
const GL16_NODES: [f64; 8] = [
    0.09501250983763744,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_WEIGHTS: [f64; 8] = [
    0.1894506104550685,
    0.18260341504492358,
    0.16915651939500254,
    0.14959598881657674,
    0.12462897125553388,
    0.09515851168249279,
    0.062253523938647894,
    0.027152459411754096,
];

/// 16-point Gauss-Legendre quadrature of `f` over `[a,b]`.
pub fn gauss_legendre_16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..8 {
        let dx = h * GL16_NODES[i];
        s += GL16_WEIGHTS[i] * (f(c + dx) + f(c - dx));
    }
    s * h
}

/// Adaptive Simpson quadrature, used as an independent oracle in tests.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    recurse(f, a, b, simpson(f, a, m, b), tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_exact_uniform_grid_is_half_spacing() {
        // Points at (i + 0.5)/n have KS exactly 1/(2n) against U(0,1).
        let n = 100;
        let sample: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&sample, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.005).abs() < 1e-12);
    }

    #[test]
    fn quantiles_and_median() {
        let xs = [3.0, 1.0, 2.0];
        assert_eq!(median(&xs), 2.0);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 3.0);
    }

    #[test]
    fn hill_recovers_pareto_index() {
        // Deterministic Pareto quantiles: x_i = (1 - u_i)^{-1/alpha}.
        let alpha = 1.5;
        let n = 20_000;
        let data: Vec<f64> = (0..n)
            .map(|i| (1.0 - (i as f64 + 0.5) / n as f64).powf(-1.0 / alpha))
            .collect();
        let est = hill_tail_index(&data, 2_000);
        assert!((est - alpha).abs() < 0.05, "hill = {est}");
    }

    #[test]
    fn gauss_legendre_matches_simpson() {
        let f = |x: f64| (x * x).sin() + x.exp();
        let gl: f64 = gauss_legendre_16(&f, 0.0, 1.0);
        let simp = adaptive_simpson(&f, 0.0, 1.0, 1e-12);
        assert!((gl - simp).abs() < 1e-10);
    }

    #[test]
    fn frechet_and_exponential_cdfs() {
        assert_eq!(frechet_cdf(-1.0, 1.5), 0.0);
        assert!((frechet_cdf(1.0, 1.5) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((exponential_cdf(1.0, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }
}
