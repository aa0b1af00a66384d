//! Goodness-of-fit tests, autocorrelation analysis and resampling.

use num::complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// CDF of a centred Gaussian with the given variance.
pub fn centred_normal_cdf(x: f64, variance: f64) -> f64 {
    normal_cdf(x / variance.sqrt())
}

/// CDF of the exponential law with the given mean.
pub fn exponential_cdf(x: f64, mean: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x / mean).exp_m1()
    }
}

/// CDF of the gamma law with integer shape `k` and the given scale.
pub fn gamma_cdf_integer_shape(x: f64, shape: u32, scale: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let y = x / scale;
    let mut term = 1.0;
    let mut partial = 1.0;
    for j in 1..shape {
        term *= y / f64::from(j);
        partial += term;
    }
    1.0 - (-y).exp() * partial
}

/// Outcome of a one-sample Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
}

impl KsResult {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Asymptotic Kolmogorov survival function `Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS test of `samples` against `cdf`, with Stephens' finite-`n`
/// correction `λ = (√n + 0.12 + 0.11/√n) D`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("KS test needs at least one sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let sn = n.sqrt();
    let p = kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
    Ok(KsResult { n: sorted.len(), statistic: d, p_value: p })
}

/// Sample mean and unbiased variance.
pub fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Normalised autocorrelation `ρ(0..max_lag]` computed by zero-padded FFT.
pub fn autocorrelation(values: &[f64], max_lag: usize) -> Vec<f64> {
    let n = values.len();
    let (mean, _) = mean_var(values);
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = values.iter().map(|v| Complex64::new(v - mean, 0.0)).collect();
    buf.resize(size, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    buf.iter_mut().for_each(|z| *z = Complex64::new(z.norm_sqr(), 0.0));
    planner.plan_fft_inverse(size).process(&mut buf);
    let c0 = buf[0].re;
    (0..=max_lag.min(n - 1)).map(|t| if c0 > 0.0 { buf[t].re / c0 } else { 0.0 }).collect()
}

/// Integrated autocorrelation time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AutocorrelationTime {
    /// `τ_int = ½ + Σ_{t=1}^{W} ρ(t)`, in samples.
    pub samples: f64,
    /// Summation window `W`.
    pub window: usize,
    /// Statistical error estimate `τ_int √(2(2W+1)/N)`.
    pub error: f64,
}

/// Sokal's automatic windowing: the smallest `W` with `W ≥ c·τ_int(W)`.
pub fn integrated_autocorrelation_time(values: &[f64], c: f64) -> Result<AutocorrelationTime> {
    let n = values.len();
    if n < 32 {
        return Err(Error::InsufficientData(format!("{n} samples are too few for an autocorrelation time")));
    }
    let rho = autocorrelation(values, n / 2);
    let mut tau = 0.5;
    for (w, r) in rho.iter().enumerate().skip(1) {
        tau += r;
        if w as f64 >= c * tau {
            let error = tau * (2.0 * (2.0 * w as f64 + 1.0) / n as f64).sqrt();
            return Ok(AutocorrelationTime { samples: tau, window: w, error });
        }
    }
    Err(Error::Convergence(format!(
        "autocorrelation window did not close within {} lags; series too short",
        n / 2
    )))
}

/// Means of several observables over consecutive, non-overlapping blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMeans {
    pub block_len: usize,
    /// `blocks[b][k]` is the mean of observable `k` over block `b`.
    pub blocks: Vec<Vec<f64>>,
}

impl BlockMeans {
    /// Splits `rows` (one observable vector per sample) into blocks; a short
    /// trailing remainder is dropped.
    pub fn from_rows<I>(rows: I, observables: usize, block_len: usize) -> Self
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        assert!(block_len > 0);
        let mut blocks = Vec::new();
        let mut acc = vec![0.0; observables];
        let mut count = 0;
        for row in rows {
            for (a, v) in acc.iter_mut().zip(&row) {
                *a += v;
            }
            count += 1;
            if count == block_len {
                blocks.push(acc.iter().map(|a| a / block_len as f64).collect());
                acc.iter_mut().for_each(|a| *a = 0.0);
                count = 0;
            }
        }
        Self { block_len, blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Grand means over all blocks.
    pub fn means(&self) -> Vec<f64> {
        let k = self.blocks.first().map_or(0, Vec::len);
        let mut out = vec![0.0; k];
        for b in &self.blocks {
            for (o, v) in out.iter_mut().zip(b) {
                *o += v;
            }
        }
        out.iter_mut().for_each(|o| *o /= self.blocks.len() as f64);
        out
    }

    /// Standard error of `statistic(means)` from `resamples` bootstrap draws
    /// of whole blocks with replacement.
    pub fn bootstrap_se(&self, statistic: impl Fn(&[f64]) -> f64, resamples: usize, seed: u64) -> f64 {
        let nb = self.blocks.len();
        let k = self.blocks.first().map_or(0, Vec::len);
        let mut rng = stream_rng(seed, 0);
        let mut values = Vec::with_capacity(resamples);
        let mut acc = vec![0.0; k];
        for _ in 0..resamples {
            acc.iter_mut().for_each(|a| *a = 0.0);
            for _ in 0..nb {
                let b = &self.blocks[rng.random_range(0..nb)];
                for (a, v) in acc.iter_mut().zip(b) {
                    *a += v;
                }
            }
            acc.iter_mut().for_each(|a| *a /= nb as f64);
            values.push(statistic(&acc));
        }
        mean_var(&values).1.sqrt()
    }
}

/// Central-difference gradient of `f` at `point`.
pub fn numeric_gradient(f: &dyn Fn(&[f64]) -> f64, point: &[f64]) -> Vec<f64> {
    let mut work = point.to_vec();
    (0..point.len())
        .map(|k| {
            let h = 1e-6 * point[k].abs().max(1e-3);
            work[k] = point[k] + h;
            let up = f(&work);
            work[k] = point[k] - h;
            let down = f(&work);
            work[k] = point[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `gᵀ C g` for a symmetric matrix stored row-major.
pub fn quadratic_form(g: &[f64], cov: &[Vec<f64>]) -> f64 {
    g.iter()
        .zip(cov)
        .map(|(gi, row)| gi * row.iter().zip(g).map(|(c, gj)| c * gj).sum::<f64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Exp, StandardNormal};

    #[test]
    fn cdfs() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        let v = normal_cdf(1.959963984540054);
        assert!((v - 0.975).abs() < 1e-11, "{v}");
        assert!((exponential_cdf(0.5, 0.5) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((gamma_cdf_integer_shape(2.0, 1, 2.0) - exponential_cdf(2.0, 2.0)).abs() < 1e-15);
        // shape 3, scale 1 at y = 3: 1 − e^{−3}(1 + 3 + 4.5)
        assert!((gamma_cdf_integer_shape(3.0, 3, 1.0) - (1.0 - (-3.0f64).exp() * 8.5)).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_distribution_values() {
        // Q(1.3581) ≈ 0.05, Q(1.9495) ≈ 0.001
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 2e-4);
        assert!((kolmogorov_survival(1.9495) - 0.001).abs() < 2e-5);
        assert_eq!(kolmogorov_survival(0.1), 1.0);
    }

    #[test]
    fn ks_accepts_correct_and_rejects_wrong_law() {
        let mut rng = stream_rng(11, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        assert!(ks_test(&xs, normal_cdf).unwrap().passes(1e-3));
        assert!(!ks_test(&xs, |x| centred_normal_cdf(x, 1.2)).unwrap().passes(1e-3));
        let e = Exp::new(2.0).unwrap();
        let hs: Vec<f64> = (0..20_000).map(|_| e.sample(&mut rng)).collect();
        assert!(ks_test(&hs, |x| exponential_cdf(x, 0.5)).unwrap().passes(1e-3));
        assert!(!ks_test(&hs, |x| gamma_cdf_integer_shape(x, 3, 0.5 / 3.0)).unwrap().passes(1e-3));
    }

    #[test]
    fn ar1_autocorrelation_time() {
        // x_{t+1} = φ x_t + noise has ρ(t) = φ^t, τ_int = ½ + φ/(1−φ).
        let phi: f64 = 0.9;
        let mut rng = stream_rng(3, 0);
        let mut x = 0.0;
        let xs: Vec<f64> = (0..400_000)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                x = phi * x + z;
                x
            })
            .collect();
        let tau = integrated_autocorrelation_time(&xs, 6.0).unwrap();
        let expected = 0.5 + phi / (1.0 - phi);
        assert!((tau.samples - expected).abs() < 4.0 * tau.error, "{} vs {expected}", tau.samples);
        assert!(integrated_autocorrelation_time(&xs[..10], 6.0).is_err());
    }

    #[test]
    fn bootstrap_matches_iid_standard_error() {
        let mut rng = stream_rng(5, 0);
        let rows: Vec<Vec<f64>> = (0..50_000).map(|_| vec![StandardNormal.sample(&mut rng)]).collect();
        let blocks = BlockMeans::from_rows(rows, 1, 50);
        assert_eq!(blocks.len(), 1000);
        let se = blocks.bootstrap_se(|m| m[0], 400, 1);
        let expected = 1.0 / (50_000f64).sqrt();
        assert!((se / expected - 1.0).abs() < 0.15, "{se} vs {expected}");
    }
}
