//! Stochastic dynamics of the damped oscillator driven by the radiation force.
//!
//! Each axis obeys `dx = p/m dt`, `dp = (−mω₀²x − Γp) dt + dF` with
//! `Γ = τω₀²`. With white noise the stationary law is the Gaussian `P_T`
//! with `Var p = D/(2Γ) = mℰ(ω₀, T)`.

use std::io::Write;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OscillatorParams, ThermalState};
use crate::noise::{synthesize_colored, white_noise_strength, NoiseMode, NoiseSpec};
use crate::oracles::{classical_variance_p, classical_variance_x, energy_mean, l2_mean};
use crate::rng::{derive_seed, stream_rng};
use crate::stats::{numeric_gradient, BlockMeans};
use crate::table::{EstimateRow, EstimateTable};
use crate::TheorySide;

/// Upper bound on stored samples per axis when no stride is given.
pub const MAX_STORED_SAMPLES: u64 = 1_000_000;
/// Largest allowed `dt·ω₀`.
pub const MAX_DT_OMEGA: f64 = 0.1;
/// Default burn-in, in relaxation times `1/Γ`.
pub const BURN_IN_RELAXATION_TIMES: f64 = 10.0;
/// Minimum bootstrap block duration, in relaxation times.
pub const BLOCK_RELAXATION_TIMES: f64 = 5.0;
pub const MIN_BLOCKS: usize = 10;
pub const BOOTSTRAP_RESAMPLES: usize = 400;

const TRAJ_MAGIC: &[u8; 8] = b"ZPFTRAJ\0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    ExactGaussian,
    EulerMaruyama,
}

impl std::str::FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "exact" | "exact_gaussian" => Ok(Integrator::ExactGaussian),
            "euler" | "euler_maruyama" | "em" => Ok(Integrator::EulerMaruyama),
            other => Err(Error::Input(format!("unknown integrator `{other}`"))),
        }
    }
}

impl std::fmt::Display for Integrator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Integrator::ExactGaussian => "exact_gaussian",
            Integrator::EulerMaruyama => "euler_maruyama",
        })
    }
}

/// `∫₀^h e^{−a u} cos(b u) du` and `∫₀^h e^{−a u} sin(b u) du`.
fn damped_trig_integrals(a: f64, b: f64, h: f64) -> (f64, f64) {
    let e = (-a * h).exp();
    let (s, c) = (b * h).sin_cos();
    let d = a * a + b * b;
    ((a - e * (a * c - b * s)) / d, (b - e * (a * s + b * c)) / d)
}

/// Exact one-step transition of the linear SDE over a fixed step `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPropagator {
    /// Homogeneous flow `e^{Ah}` acting on `(x, p)`.
    pub flow: [[f64; 2]; 2],
    /// Lower Cholesky factor of the step noise covariance.
    pub chol: [[f64; 2]; 2],
    /// Response `∫₀^h e^{A(h−s)} (0, 1)ᵀ ds` to a unit force held over the step.
    pub drive: [f64; 2],
    /// Step noise covariance `[Σxx, Σxp, Σpp]`.
    pub covariance: [f64; 3],
}

impl ExactPropagator {
    /// Panics unless the motion is underdamped (`Γ < 2ω₀`).
    pub fn new(params: &OscillatorParams, d: f64, h: f64) -> Self {
        let m = params.mass;
        let w0 = params.omega0;
        let lambda = params.damping_rate() / 2.0;
        assert!(lambda < w0, "propagator requires underdamped motion");
        let w1 = (w0 * w0 - lambda * lambda).sqrt();
        let decay = (-lambda * h).exp();
        let (s, c) = (w1 * h).sin_cos();
        let r = lambda / w1;
        let flow = [
            [decay * (c + r * s), decay * s / (m * w1)],
            [-decay * m * w0 * w0 / w1 * s, decay * (c - r * s)],
        ];

        let i0 = if lambda == 0.0 { h } else { -(-2.0 * lambda * h).exp_m1() / (2.0 * lambda) };
        let (ic, is) = damped_trig_integrals(2.0 * lambda, 2.0 * w1, h);
        let sin2 = 0.5 * (i0 - ic);
        let cos2 = 0.5 * (i0 + ic);
        let sincos = 0.5 * is;
        let sxx = d / (m * m * w1 * w1) * sin2;
        let sxp = d / (m * w1) * (sincos - r * sin2);
        let spp = d * (cos2 - 2.0 * r * sincos + r * r * sin2);

        let l11 = sxx.max(0.0).sqrt();
        let l21 = if l11 > 0.0 { sxp / l11 } else { 0.0 };
        let l22 = (spp - l21 * l21).max(0.0).sqrt();

        let (jc, js) = damped_trig_integrals(lambda, w1, h);
        let drive = [js / (m * w1), jc - r * js];
        Self { flow, chol: [[l11, 0.0], [l21, l22]], drive, covariance: [sxx, sxp, spp] }
    }

    /// Advances `(x, p)` with standard normals `z`.
    #[inline]
    pub fn step(&self, x: f64, p: f64, z: [f64; 2]) -> (f64, f64) {
        let f = &self.flow;
        let l = &self.chol;
        (
            f[0][0] * x + f[0][1] * p + l[0][0] * z[0],
            f[1][0] * x + f[1][1] * p + l[1][0] * z[0] + l[1][1] * z[1],
        )
    }

    /// Advances `(x, p)` under a force held constant over the step, without
    /// white noise.
    #[inline]
    pub fn step_forced(&self, x: f64, p: f64, force: f64) -> (f64, f64) {
        let f = &self.flow;
        (
            f[0][0] * x + f[0][1] * p + self.drive[0] * force,
            f[1][0] * x + f[1][1] * p + self.drive[1] * force,
        )
    }
}

/// One exact step drawing its noise from `rng`.
pub fn step_exact<R: rand::Rng + ?Sized>(
    state: (f64, f64),
    dt: f64,
    params: &OscillatorParams,
    d: f64,
    rng: &mut R,
) -> (f64, f64) {
    let z = [StandardNormal.sample(rng), StandardNormal.sample(rng)];
    ExactPropagator::new(params, d, dt).step(state.0, state.1, z)
}

/// Semi-implicit Euler–Maruyama step: momentum first, then position with the
/// updated momentum. The fully explicit scheme gains energy every step.
#[inline]
pub fn step_euler_maruyama(state: (f64, f64), dt: f64, params: &OscillatorParams, d: f64, z: f64) -> (f64, f64) {
    let (x, p) = state;
    let m = params.mass;
    let w0 = params.omega0;
    let p = p + (-m * w0 * w0 * x - params.damping_rate() * p) * dt + (d * dt).sqrt() * z;
    (x + p / m * dt, p)
}

/// Stationary covariance `[Σxx, Σxp, Σpp]` of the white-noise dynamics.
pub fn stationary_covariance(params: &OscillatorParams, d: f64) -> [f64; 3] {
    let spp = d / (2.0 * params.damping_rate());
    [spp / (params.mass * params.omega0).powi(2), 0.0, spp]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: OscillatorParams,
    pub temperature: f64,
    pub dt: f64,
    /// Total steps including burn-in.
    pub steps: u64,
    pub burn_in_steps: u64,
    pub seed: u64,
    pub dims: usize,
    pub integrator: Integrator,
    pub noise_mode: NoiseMode,
    /// Steps between stored samples; derived from [`MAX_STORED_SAMPLES`] if absent.
    pub stride: Option<u64>,
    /// Starting `(x, p)` per axis.
    pub initial: [(f64, f64); 3],
}

impl SimConfig {
    /// Defaults: 1-D, exact integrator, white noise, burn-in of ten
    /// relaxation times, start at the origin.
    pub fn new(params: OscillatorParams, temperature: f64, dt: f64, steps: u64, seed: u64) -> Self {
        Self {
            params,
            temperature,
            dt,
            steps,
            burn_in_steps: default_burn_in(&params, dt),
            seed,
            dims: 1,
            integrator: Integrator::ExactGaussian,
            noise_mode: NoiseMode::White,
            stride: None,
            initial: [(0.0, 0.0); 3],
        }
    }

    pub fn thermal_state(&self) -> Result<ThermalState> {
        ThermalState::new(self.temperature).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |msg: String| Err(Error::Config(msg));
        self.params.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.thermal_state()?;
        self.params.check_weak_coupling().map_err(|e| Error::Config(e.to_string()))?;
        if self.params.tau <= 0.0 {
            return cfg("tau must be positive for the oscillator to reach equilibrium".into());
        }
        if !(self.dt > 0.0 && self.dt * self.params.omega0 <= MAX_DT_OMEGA * (1.0 + 1e-12)) {
            return cfg(format!("dt*omega0 = {} must lie in (0, {MAX_DT_OMEGA}]", self.dt * self.params.omega0));
        }
        let min_burn = BURN_IN_RELAXATION_TIMES / (self.params.damping_rate() * self.dt);
        if (self.burn_in_steps as f64) < min_burn * (1.0 - 1e-12) {
            return cfg(format!(
                "burn_in_steps = {} is below ten relaxation times ({})",
                self.burn_in_steps,
                min_burn.ceil()
            ));
        }
        if self.steps <= self.burn_in_steps {
            return cfg(format!("steps = {} must exceed burn_in_steps = {}", self.steps, self.burn_in_steps));
        }
        if !(1..=3).contains(&self.dims) || self.dims == 2 {
            return cfg(format!("dims must be 1 or 3, got {}", self.dims));
        }
        if self.stride == Some(0) {
            return cfg("stride must be at least 1".into());
        }
        if self.noise_mode == NoiseMode::Colored && self.integrator != Integrator::ExactGaussian {
            return cfg("colored noise requires the exact integrator".into());
        }
        if self.initial.iter().any(|(x, p)| !x.is_finite() || !p.is_finite()) {
            return cfg("initial state must be finite".into());
        }
        Ok(())
    }

    pub fn stride(&self) -> u64 {
        self.stride
            .unwrap_or_else(|| (self.steps - self.burn_in_steps).div_ceil(MAX_STORED_SAMPLES).max(1))
    }

    /// Number of stored samples per axis.
    pub fn stored_samples(&self) -> usize {
        ((self.steps - self.burn_in_steps) / self.stride()) as usize
    }

    /// `key=value` pairs describing the run.
    pub fn echo(&self) -> Vec<(String, String)> {
        let p = &self.params;
        [
            ("mass", p.mass.to_string()),
            ("omega0", p.omega0.to_string()),
            ("hbar", p.hbar.to_string()),
            ("kb", p.kb.to_string()),
            ("tau", p.tau.to_string()),
            ("temperature", self.temperature.to_string()),
            ("dt", self.dt.to_string()),
            ("steps", self.steps.to_string()),
            ("burn_in_steps", self.burn_in_steps.to_string()),
            ("stride", self.stride().to_string()),
            ("seed", self.seed.to_string()),
            ("dims", self.dims.to_string()),
            ("integrator", self.integrator.to_string()),
            ("noise", self.noise_mode.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// `⌈10/(Γ dt)⌉`.
pub fn default_burn_in(params: &OscillatorParams, dt: f64) -> u64 {
    let steps = BURN_IN_RELAXATION_TIMES / (params.damping_rate() * dt);
    if steps.is_finite() {
        // Guard against 199999.99999 from rounding in Γ·dt.
        (steps * (1.0 - 1e-12)).ceil() as u64
    } else {
        u64::MAX
    }
}

/// Post-burn-in samples of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Time between stored samples (`dt · stride`).
    pub sample_dt: f64,
    pub stride: u64,
    pub seed: u64,
    pub replica: u64,
    /// `x[axis][i]`, `p[axis][i]`.
    pub x: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub config: SimConfig,
}

impl Trajectory {
    pub fn dims(&self) -> usize {
        self.x.len()
    }

    pub fn len(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Time of sample `i`, counted from the start of the run.
    pub fn time(&self, i: usize) -> f64 {
        (self.config.burn_in_steps + (i as u64 + 1) * self.stride) as f64 * self.config.dt
    }

    /// Total energy at sample `i`.
    pub fn energy(&self, i: usize) -> f64 {
        let pr = &self.config.params;
        (0..self.dims())
            .map(|a| {
                let (x, p) = (self.x[a][i], self.p[a][i]);
                p * p / (2.0 * pr.mass) + 0.5 * pr.mass * pr.omega0 * pr.omega0 * x * x
            })
            .sum()
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.energy(i)).collect()
    }

    /// CSV with `# key=value` header lines and columns `t,x1,p1,...`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in self.config.echo() {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "# replica={}", self.replica)?;
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        for a in 1..=self.dims() {
            header.push(format!("x{a}"));
            header.push(format!("p{a}"));
        }
        out.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec = vec![crate::table::format_sig12(self.time(i))];
            for a in 0..self.dims() {
                rec.push(format!("{:e}", self.x[a][i]));
                rec.push(format!("{:e}", self.p[a][i]));
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Little-endian dump: `ZPFTRAJ\0`, sample dt (f64), row count (u64), seed
    /// (u64), channel count (u64), then rows of `x1 p1 x2 p2 ...` as f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(TRAJ_MAGIC)?;
        w.write_all(&self.sample_dt.to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&(2 * self.dims() as u64).to_le_bytes())?;
        for i in 0..self.len() {
            for a in 0..self.dims() {
                w.write_all(&self.x[a][i].to_le_bytes())?;
                w.write_all(&self.p[a][i].to_le_bytes())?;
            }
        }
        Ok(())
    }
}

fn run_axis(config: &SimConfig, replica: u64, axis: usize, d: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let stream = replica * 4 + axis as u64;
    let stride = config.stride();
    let n_store = config.stored_samples();
    let mut xs = Vec::with_capacity(n_store);
    let mut ps = Vec::with_capacity(n_store);
    let (mut x, mut p) = config.initial[axis];
    let burn = config.burn_in_steps;
    let last = burn + n_store as u64 * stride;
    let mut record = |step: u64, x: f64, p: f64| {
        if step > burn && (step - burn) % stride == 0 && step <= last {
            xs.push(x);
            ps.push(p);
        }
    };
    match (config.noise_mode, config.integrator) {
        (NoiseMode::White, Integrator::ExactGaussian) => {
            let prop = ExactPropagator::new(&config.params, d, config.dt);
            let mut rng = stream_rng(config.seed, stream);
            for step in 1..=last {
                let z = [StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)];
                (x, p) = prop.step(x, p, z);
                record(step, x, p);
            }
        }
        (NoiseMode::White, Integrator::EulerMaruyama) => {
            let mut rng = stream_rng(config.seed, stream);
            for step in 1..=last {
                (x, p) = step_euler_maruyama((x, p), config.dt, &config.params, d, StandardNormal.sample(&mut rng));
                record(step, x, p);
            }
        }
        (NoiseMode::Colored, _) => {
            let spec = NoiseSpec {
                mode: NoiseMode::Colored,
                temperature: config.temperature,
                tau: config.params.tau,
                seed: derive_seed(config.seed, stream),
                dt: config.dt,
                length: (last as usize).next_power_of_two(),
            };
            let force = synthesize_colored(&spec, &config.params)?;
            let prop = ExactPropagator::new(&config.params, 0.0, config.dt);
            for (step, f) in (1..=last).zip(&force.values) {
                (x, p) = prop.step_forced(x, p, *f);
                record(step, x, p);
            }
        }
    }
    Ok((xs, ps))
}

/// Runs replica 0 of `config`.
pub fn run(config: &SimConfig) -> Result<Trajectory> {
    run_replica(config, 0)
}

/// Runs one replica. Axis `a` of replica `r` draws from stream `4r + a`, so
/// results do not depend on how replicas are scheduled.
pub fn run_replica(config: &SimConfig, replica: u64) -> Result<Trajectory> {
    config.validate()?;
    let state = config.thermal_state()?;
    let d = white_noise_strength(&config.params, &state)?;
    let axes: Vec<Result<(Vec<f64>, Vec<f64>)>> =
        (0..config.dims).into_par_iter().map(|a| run_axis(config, replica, a, d)).collect();
    let mut x = Vec::with_capacity(config.dims);
    let mut p = Vec::with_capacity(config.dims);
    for r in axes {
        let (xa, pa) = r?;
        x.push(xa);
        p.push(pa);
    }
    Ok(Trajectory {
        sample_dt: config.dt * config.stride() as f64,
        stride: config.stride(),
        seed: config.seed,
        replica,
        x,
        p,
        config: config.clone(),
    })
}

/// Runs replicas `0..count` concurrently.
pub fn run_replicas(config: &SimConfig, count: u64) -> Result<Vec<Trajectory>> {
    config.validate()?;
    (0..count).into_par_iter().map(|r| run_replica(config, r)).collect()
}

type Statistic = Box<dyn Fn(&[f64]) -> f64 + Sync>;

// Observables averaged per sample, pooled over axes where per-axis:
// 0 x, 1 x², 2 p, 3 p², 4 xp, 5 H, 6 H², 7 L².
const N_OBS: usize = 8;

fn observables(traj: &Trajectory, i: usize) -> Vec<f64> {
    let d = traj.dims() as f64;
    let mut row = vec![0.0; N_OBS];
    for a in 0..traj.dims() {
        let (x, p) = (traj.x[a][i], traj.p[a][i]);
        row[0] += x / d;
        row[1] += x * x / d;
        row[2] += p / d;
        row[3] += p * p / d;
        row[4] += x * p / d;
    }
    let h = traj.energy(i);
    row[5] = h;
    row[6] = h * h;
    if traj.dims() == 3 {
        let (x, p) = (&traj.x, &traj.p);
        let l = [
            x[1][i] * p[2][i] - x[2][i] * p[1][i],
            x[2][i] * p[0][i] - x[0][i] * p[2][i],
            x[0][i] * p[1][i] - x[1][i] * p[0][i],
        ];
        row[7] = l.iter().map(|v| v * v).sum();
    }
    row
}

/// Equilibrium statistics of `traj` with block-bootstrap standard errors
/// (blocks of at least five relaxation times) and references from the
/// classical equilibrium density.
pub fn equilibrium_report(traj: &Trajectory, params: &OscillatorParams, state: &ThermalState) -> Result<EstimateTable> {
    if traj.is_empty() {
        return Err(Error::InsufficientData("trajectory is empty".into()));
    }
    let block_time = BLOCK_RELAXATION_TIMES / params.damping_rate();
    let block_len = (block_time / traj.sample_dt).ceil().max(1.0) as usize;
    let n_blocks = traj.len() / block_len;
    if n_blocks < MIN_BLOCKS {
        return Err(Error::InsufficientData(format!(
            "{} samples give {n_blocks} blocks of {block_len}; at least {MIN_BLOCKS} are needed",
            traj.len()
        )));
    }
    let blocks = BlockMeans::from_rows((0..traj.len()).map(|i| observables(traj, i)), N_OBS, block_len);
    let dims = traj.dims() as f64;
    let e = energy_mean(TheorySide::Classical, params, state);
    let mut specs: Vec<(&str, Statistic, Option<f64>)> = vec![
        ("Var(x)", Box::new(|m: &[f64]| m[1] - m[0] * m[0]), Some(classical_variance_x(params, state))),
        ("Var(p)", Box::new(|m: &[f64]| m[3] - m[2] * m[2]), Some(classical_variance_p(params, state))),
        ("Cov(x,p)", Box::new(|m: &[f64]| m[4] - m[0] * m[2]), Some(0.0)),
        ("<H>", Box::new(|m: &[f64]| m[5]), Some(dims * e)),
        ("<H^2>/<H>^2", Box::new(|m: &[f64]| m[6] / (m[5] * m[5])), Some((dims + 1.0) / dims)),
    ];
    if traj.dims() == 3 {
        specs.push(("<L^2>", Box::new(|m: &[f64]| m[7]), Some(l2_mean(TheorySide::Classical, params, state))));
    }

    let means = blocks.means();
    // Per-sample covariance of the observables, for the independent-sample
    // variance that defines N_eff.
    let n = traj.len();
    let mut cov = vec![vec![0.0; N_OBS]; N_OBS];
    for i in 0..n {
        let row = observables(traj, i);
        for a in 0..N_OBS {
            let da = row[a] - means[a];
            for b in a..N_OBS {
                cov[a][b] += da * (row[b] - means[b]);
            }
        }
    }
    for a in 0..N_OBS {
        for b in a..N_OBS {
            cov[a][b] /= (n - 1) as f64;
            cov[b][a] = cov[a][b];
        }
    }

    let boot_seed = derive_seed(traj.seed, 0xB007 + traj.replica);
    let mut table = EstimateTable::default();
    for (k, (name, stat, reference)) in specs.into_iter().enumerate() {
        let estimate = stat(&means);
        let se = blocks.bootstrap_se(&stat, BOOTSTRAP_RESAMPLES, derive_seed(boot_seed, k as u64));
        let g = numeric_gradient(&*stat, &means);
        let per_sample = crate::stats::quadratic_form(&g, &cov);
        let n_eff = if se > 0.0 { (per_sample / (se * se)).min(n as f64) } else { n as f64 };
        table.push(EstimateRow::new(name, estimate, se, n_eff, reference));
    }
    Ok(table)
}

/// Decimates `values` to roughly independent samples, keeping every
/// `spacing`-th value.
pub fn decimate(values: &[f64], spacing: usize) -> Vec<f64> {
    values.iter().step_by(spacing.max(1)).copied().collect()
}

/// Integrated autocorrelation time of the total energy, in time units.
pub fn energy_autocorrelation_time(traj: &Trajectory) -> Result<crate::stats::AutocorrelationTime> {
    let tau = crate::stats::integrated_autocorrelation_time(&traj.energies(), 6.0)?;
    Ok(crate::stats::AutocorrelationTime {
        samples: tau.samples * traj.sample_dt,
        window: tau.window,
        error: tau.error * traj.sample_dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(tau: f64) -> OscillatorParams {
        OscillatorParams::natural().with_tau(tau)
    }

    #[test]
    fn free_rotation_quarter_period() {
        let p = params(0.0);
        let prop = ExactPropagator::new(&p, 0.0, PI / 2.0);
        let (x, v) = prop.step(1.0, 0.0, [0.0, 0.0]);
        assert!(x.abs() < 1e-15 && (v + 1.0).abs() < 1e-15);
        let m2 = OscillatorParams::new(2.0, 3.0, 1.0, 1.0, 0.0).unwrap();
        let (x, v) = ExactPropagator::new(&m2, 0.0, PI / 6.0).step(1.0, 0.0, [0.0, 0.0]);
        assert!(x.abs() < 1e-15 && (v + 6.0).abs() < 1e-14);
    }

    #[test]
    fn pure_damping_loses_energy() {
        let p = params(5e-3);
        let prop = ExactPropagator::new(&p, 0.0, 0.05);
        let (mut x, mut v) = (1.0, 0.0);
        let e0 = 0.5;
        let steps = (2.0 * PI / 0.05).round() as usize;
        for _ in 0..steps {
            (x, v) = prop.step(x, v, [0.0, 0.0]);
        }
        assert!(0.5 * (x * x + v * v) < e0);
    }

    #[test]
    fn step_covariance_matches_stationary_identity() {
        // Σ(h) = Σ∞ − Φ Σ∞ Φᵀ for any h.
        for (tau, h) in [(1e-3, 0.05), (5e-3, 0.1), (0.2, 0.5), (0.05, 3.0)] {
            let p = params(tau);
            let d = 1.3;
            let prop = ExactPropagator::new(&p, d, h);
            let s = stationary_covariance(&p, d);
            let inf = [[s[0], s[1]], [s[1], s[2]]];
            let f = prop.flow;
            let mut fsf = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            fsf[i][j] += f[i][k] * inf[k][l] * f[j][l];
                        }
                    }
                }
            }
            let expect = [inf[0][0] - fsf[0][0], inf[0][1] - fsf[0][1], inf[1][1] - fsf[1][1]];
            for (a, b) in prop.covariance.iter().zip(expect) {
                assert!((a - b).abs() < 1e-12 * s[2].max(1.0), "tau={tau} h={h}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn config_validation() {
        let p = params(1e-3);
        let ok = SimConfig::new(p, 0.0, 0.05, 400_000, 1);
        assert_eq!(ok.burn_in_steps, 200_000);
        ok.validate().unwrap();
        let bad_dt = SimConfig { dt: 0.2, ..ok.clone() };
        assert!(matches!(bad_dt.validate(), Err(Error::Config(_))));
        let short_burn = SimConfig { burn_in_steps: 1000, ..ok.clone() };
        assert!(matches!(short_burn.validate(), Err(Error::Config(_))));
        let too_short = SimConfig { steps: 200_000, ..ok.clone() };
        assert!(too_short.validate().is_err());
        let dims2 = SimConfig { dims: 2, ..ok.clone() };
        assert!(dims2.validate().is_err());
        let strong = SimConfig::new(params(0.5), 0.0, 0.05, 400_000, 1);
        assert!(strong.validate().is_err());
        assert!(run(&bad_dt).is_err());
        assert_eq!(ok.stride(), 1);
        let long = SimConfig { steps: 4_000_000, ..ok };
        assert_eq!(long.stride(), 4);
        assert_eq!(long.stored_samples(), 950_000);
    }

    #[test]
    fn deterministic_under_seed() {
        let c = SimConfig { dims: 3, ..SimConfig::new(params(5e-3), 0.5, 0.1, 30_000, 42) };
        let a = run(&c).unwrap();
        let b = run(&c).unwrap();
        assert_eq!(a, b);
        let other = run(&SimConfig { seed: 43, ..c }).unwrap();
        assert_ne!(a.x, other.x);
    }
}
