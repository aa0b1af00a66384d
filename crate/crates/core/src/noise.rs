//! Random force exerted on the charged oscillator by thermal plus zero-point
//! radiation.
//!
//! Two models share the same resonant strength. The white model is a delta
//! correlated force `⟨F(t)F(t')⟩ = D δ(t − t')` with `D = 2mΓℰ(ω₀, T)` and
//! `Γ = τω₀²`, which is the fluctuation-dissipation balance that makes the
//! damped oscillator relax to the phase-space density `P_T`. The colored
//! model synthesizes a stationary Gaussian series whose one-sided spectral
//! density is `S(ω) = (2mτ/π) ω² ℰ(ω, T)`, equal to `D/π` at resonance.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num::complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{mode_energy_unchecked, resonant_energy, OscillatorParams, ThermalState};
use crate::rng::stream_rng;

/// Minimum ratio between the synthesis cutoff `π/dt` and `ω₀`.
pub const MIN_CUTOFF_RATIO: f64 = 10.0;

const FORCE_MAGIC: &[u8; 8] = b"ZPFFORCE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    White,
    Colored,
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "white" => Ok(NoiseMode::White),
            "colored" | "coloured" => Ok(NoiseMode::Colored),
            other => Err(Error::Input(format!("unknown noise mode `{other}` (expected white or colored)"))),
        }
    }
}

impl std::fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NoiseMode::White => "white",
            NoiseMode::Colored => "colored",
        })
    }
}

/// Request for a force series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub mode: NoiseMode,
    pub temperature: f64,
    pub tau: f64,
    pub seed: u64,
    pub dt: f64,
    pub length: usize,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Input(format!("dt must be positive, got {}", self.dt)));
        }
        if self.length == 0 {
            return Err(Error::Input("length must be positive".into()));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::Input(format!("tau must be non-negative, got {}", self.tau)));
        }
        ThermalState::new(self.temperature)?;
        Ok(())
    }
}

/// White-noise strength `D = 2mΓℰ(ω₀, T)` (force² · time).
pub fn white_noise_strength(params: &OscillatorParams, state: &ThermalState) -> Result<f64> {
    params.check_weak_coupling()?;
    Ok(2.0 * params.mass * params.damping_rate() * resonant_energy(params, state))
}

/// One-sided force spectral density `(2mτ/π) ω² ℰ(ω, T)`, normalised so that
/// `Var F = ∫₀^∞ S(ω) dω`. Negative `omega` is treated as `|omega|`.
pub fn force_psd(omega: f64, params: &OscillatorParams, state: &ThermalState) -> f64 {
    let w = omega.abs();
    if w == 0.0 {
        return 0.0;
    }
    2.0 * params.mass * params.tau / PI * w * w * mode_energy_unchecked(w, state, true, params)
}

/// Uniformly sampled force series.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceSeries {
    pub dt: f64,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl ForceSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Little-endian dump: `ZPFFORCE`, dt (f64), length (u64), seed (u64),
    /// then the samples as f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(FORCE_MAGIC)?;
        w.write_all(&self.dt.to_le_bytes())?;
        w.write_all(&(self.values.len() as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != FORCE_MAGIC {
            return Err(Error::Format("not a force series (bad magic)".into()));
        }
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        let dt = f64::from_le_bytes(buf);
        r.read_exact(&mut buf)?;
        let len = u64::from_le_bytes(buf) as usize;
        r.read_exact(&mut buf)?;
        let seed = u64::from_le_bytes(buf);
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            r.read_exact(&mut buf)?;
            values.push(f64::from_le_bytes(buf));
        }
        Ok(Self { dt, seed, values })
    }
}

/// Spectral synthesis of a colored force series.
///
/// Each grid frequency `ω_k = 2πk/(N dt)`, `0 < k < N/2`, receives independent
/// cosine and sine amplitudes `a_k, b_k ~ N(0, S(ω_k) Δω)`, so phases are
/// uniform and the grid variance sums to `Σ S(ω_k) Δω`. The DC and Nyquist
/// bins are left empty.
pub fn synthesize_colored(spec: &NoiseSpec, params: &OscillatorParams) -> Result<ForceSeries> {
    spec.validate()?;
    if !spec.length.is_power_of_two() {
        return Err(Error::Input(format!("length must be a power of two, got {}", spec.length)));
    }
    let omega_max = PI / spec.dt;
    if omega_max < MIN_CUTOFF_RATIO * params.omega0 {
        return Err(Error::Validity(format!(
            "cutoff pi/dt = {omega_max} is below {MIN_CUTOFF_RATIO} * omega0"
        )));
    }
    let params = params.with_tau(spec.tau);
    let state = ThermalState::new(spec.temperature)?;
    let n = spec.length;
    let d_omega = 2.0 * PI / (n as f64 * spec.dt);
    let mut rng = stream_rng(spec.seed, 0);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in spectrum.iter_mut().enumerate().take(n / 2).skip(1) {
        let sigma = (force_psd(k as f64 * d_omega, &params, &state) * d_omega).sqrt();
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        *slot = Complex64::new(sigma * a, -sigma * b);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    Ok(ForceSeries { dt: spec.dt, seed: spec.seed, values: spectrum.iter().map(|z| z.re).collect() })
}

/// One periodogram value per grid frequency `ω_k = 2πk/(N dt)`, `0 ≤ k ≤ N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub omega: Vec<f64>,
    pub psd: Vec<f64>,
}

impl Periodogram {
    /// Mean of the estimate over the `bins` grid points nearest `omega`.
    pub fn band_average(&self, omega: f64, bins: usize) -> f64 {
        let step = self.omega.get(1).copied().unwrap_or(1.0);
        let centre = (omega / step).round() as isize;
        let lo = (centre - bins as isize / 2).max(1) as usize;
        let hi = (lo + bins).min(self.psd.len());
        self.psd[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
    }

    /// Ratio of estimated to target spectral mass over `[lo, hi)`.
    pub fn band_ratio(&self, lo: f64, hi: f64, target: impl Fn(f64) -> f64) -> Option<f64> {
        let (mut est, mut tgt) = (0.0, 0.0);
        for (w, s) in self.omega.iter().zip(&self.psd) {
            if *w >= lo && *w < hi {
                est += s;
                tgt += target(*w);
            }
        }
        (tgt > 0.0).then(|| est / tgt)
    }
}

/// Windowed periodogram in the one-sided convention of [`force_psd`]:
/// `S(ω_k) = dt |Σ wₙ xₙ e^{−iω_k t_n}|² / (π Σ wₙ²)`.
pub fn periodogram(values: &[f64], dt: f64, hann: bool) -> Periodogram {
    let n = values.len();
    let window: Vec<f64> = (0..n)
        .map(|i| if hann { 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos() } else { 1.0 })
        .collect();
    let norm: f64 = window.iter().map(|w| w * w).sum();
    let mut buf: Vec<Complex64> = values.iter().zip(&window).map(|(v, w)| Complex64::new(v * w, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let d_omega = 2.0 * PI / (n as f64 * dt);
    let half = n / 2;
    Periodogram {
        omega: (0..=half).map(|k| k as f64 * d_omega).collect(),
        psd: buf[..=half].iter().map(|z| z.norm_sqr() * dt / (PI * norm)).collect(),
    }
}

/// Welch estimate: Hann-windowed periodograms of `segments` non-overlapping
/// pieces, averaged.
pub fn welch(values: &[f64], dt: f64, segments: usize) -> Result<Periodogram> {
    if segments == 0 || values.len() / segments < 8 {
        return Err(Error::InsufficientData(format!(
            "{} samples cannot be split into {segments} segments",
            values.len()
        )));
    }
    let seg = values.len() / segments;
    let mut acc: Option<Periodogram> = None;
    for chunk in values.chunks_exact(seg).take(segments) {
        let p = periodogram(chunk, dt, true);
        match acc.as_mut() {
            None => acc = Some(p),
            Some(a) => a.psd.iter_mut().zip(&p.psd).for_each(|(s, v)| *s += v),
        }
    }
    let mut out = acc.expect("at least one segment");
    out.psd.iter_mut().for_each(|s| *s /= segments as f64);
    Ok(out)
}
