//! Exact i.i.d. sampling of the classical equilibrium density and plug-in
//! estimators with delta-method standard errors.
//!
//! Draws are counter based: point `i` belongs to block `i / SAMPLE_BLOCK`,
//! and each block has its own generator stream. Sums are accumulated per
//! block and merged in block order, so any partition of the blocks into
//! chunks gives bit-identical estimates.

use std::collections::BTreeSet;
use std::io::Write;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Axis;
use crate::error::{Error, Result};
use crate::model::{resonant_energy, OscillatorParams, ThermalState};
use crate::oracles::{
    classical_variance_p, classical_variance_x, gaussian_moment, l2_mean, l_component_sq_mean, Quantity,
    QuantitySpec,
};
use crate::rng::stream_rng;
use crate::stats::{exponential_cdf, gamma_cdf_integer_shape, ks_test, numeric_gradient, quadratic_form};
use crate::table::{EstimateRow, EstimateTable};
use crate::TheorySide;

/// Points per generator stream.
pub const SAMPLE_BLOCK: usize = 4096;
/// Smallest sample accepted by [`energy_law_test`].
pub const MIN_LAW_SAMPLES: usize = 1000;
/// Significance level of the energy-law test.
pub const LAW_ALPHA: f64 = 1e-3;

/// Independent draws from the classical equilibrium density.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSample {
    pub dims: usize,
    pub temperature: f64,
    pub seed: u64,
    /// `x[axis][i]`, `p[axis][i]`.
    pub x: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub params: OscillatorParams,
}

impl PhaseSample {
    pub fn len(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, i: usize) -> Point {
        let mut pt = Point { x: [0.0; 3], p: [0.0; 3] };
        for a in 0..self.dims {
            pt.x[a] = self.x[a][i];
            pt.p[a] = self.p[a][i];
        }
        pt
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i).energy(self.dims, &self.params)).collect()
    }

    /// CSV with columns `x1,p1,...`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = Vec::new();
        for a in 1..=self.dims {
            header.push(format!("x{a}"));
            header.push(format!("p{a}"));
        }
        out.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec = Vec::with_capacity(2 * self.dims);
            for a in 0..self.dims {
                rec.push(format!("{:e}", self.x[a][i]));
                rec.push(format!("{:e}", self.p[a][i]));
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    x: [f64; 3],
    p: [f64; 3],
}

impl Point {
    fn energy(&self, dims: usize, params: &OscillatorParams) -> f64 {
        let k = 0.5 * params.mass * params.omega0 * params.omega0;
        (0..dims).map(|a| self.p[a] * self.p[a] / (2.0 * params.mass) + k * self.x[a] * self.x[a]).sum()
    }

    fn angular_momentum(&self, axis: Axis) -> f64 {
        let (j, k) = axis.cyclic_successors();
        self.x[j.index()] * self.p[k.index()] - self.x[k.index()] * self.p[j.index()]
    }
}

fn check_dims(dims: usize) -> Result<()> {
    if dims == 1 || dims == 3 {
        Ok(())
    } else {
        Err(Error::Input(format!("dims must be 1 or 3, got {dims}")))
    }
}

/// Normals for one block, `2·dims` per point in the order `x1 p1 x2 p2 ...`.
fn draw_block(block: usize, count: usize, dims: usize, sx: f64, sp: f64, seed: u64) -> Vec<Point> {
    let mut rng = stream_rng(seed, block as u64);
    (0..count)
        .map(|_| {
            let mut pt = Point { x: [0.0; 3], p: [0.0; 3] };
            for a in 0..dims {
                let zx: f64 = StandardNormal.sample(&mut rng);
                let zp: f64 = StandardNormal.sample(&mut rng);
                pt.x[a] = sx * zx;
                pt.p[a] = sp * zp;
            }
            pt
        })
        .collect()
}

fn block_len(n: usize, block: usize) -> usize {
    SAMPLE_BLOCK.min(n - block * SAMPLE_BLOCK)
}

/// `n` independent draws of the `dims`-dimensional equilibrium density.
pub fn draw_phase_space(
    n: usize,
    dims: usize,
    params: &OscillatorParams,
    state: &ThermalState,
    seed: u64,
) -> Result<PhaseSample> {
    check_dims(dims)?;
    if n == 0 {
        return Err(Error::Input("sample size must be at least 1".into()));
    }
    let sx = classical_variance_x(params, state).sqrt();
    let sp = classical_variance_p(params, state).sqrt();
    let blocks: Vec<Vec<Point>> = (0..n.div_ceil(SAMPLE_BLOCK))
        .into_par_iter()
        .map(|b| draw_block(b, block_len(n, b), dims, sx, sp, seed))
        .collect();
    let mut x = vec![Vec::with_capacity(n); dims];
    let mut p = vec![Vec::with_capacity(n); dims];
    for pt in blocks.iter().flatten() {
        for a in 0..dims {
            x[a].push(pt.x[a]);
            p[a].push(pt.p[a]);
        }
    }
    Ok(PhaseSample { dims, temperature: state.temperature, seed, x, p, params: *params })
}

/// A quantity estimated from phase-space samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Estimand {
    /// `⟨xⁿ⟩`, pooled over axes.
    XMoment(u32),
    /// `⟨pⁿ⟩`, pooled over axes.
    PMoment(u32),
    VarX,
    VarP,
    CovXP,
    EnergyMean,
    EnergySecondMoment,
    /// `⟨H²⟩/⟨H⟩²`.
    EnergyRatio,
    LComponentSq(Axis),
    L2Mean,
}

impl Estimand {
    pub fn name(&self) -> String {
        match self {
            Estimand::XMoment(n) => format!("<x^{n}>"),
            Estimand::PMoment(n) => format!("<p^{n}>"),
            Estimand::VarX => "Var(x)".into(),
            Estimand::VarP => "Var(p)".into(),
            Estimand::CovXP => "Cov(x,p)".into(),
            Estimand::EnergyMean => "<H>".into(),
            Estimand::EnergySecondMoment => "<H^2>".into(),
            Estimand::EnergyRatio => "<H^2>/<H>^2".into(),
            Estimand::LComponentSq(a) => format!("<L{}^2>", a.label()),
            Estimand::L2Mean => "<L^2>".into(),
        }
    }

    /// Default set for a sampling run.
    pub fn standard_set(dims: usize) -> Vec<Estimand> {
        let mut v = vec![
            Estimand::VarX,
            Estimand::VarP,
            Estimand::CovXP,
            Estimand::XMoment(4),
            Estimand::EnergyMean,
            Estimand::EnergySecondMoment,
            Estimand::EnergyRatio,
        ];
        if dims == 3 {
            v.extend(Axis::ALL.map(Estimand::LComponentSq));
            v.push(Estimand::L2Mean);
        }
        v
    }

    fn observables(&self) -> Vec<Observable> {
        match *self {
            Estimand::XMoment(n) => vec![Observable::XPow(n)],
            Estimand::PMoment(n) => vec![Observable::PPow(n)],
            Estimand::VarX => vec![Observable::XPow(1), Observable::XPow(2)],
            Estimand::VarP => vec![Observable::PPow(1), Observable::PPow(2)],
            Estimand::CovXP => vec![Observable::XPow(1), Observable::PPow(1), Observable::XP],
            Estimand::EnergyMean => vec![Observable::Energy],
            Estimand::EnergySecondMoment => vec![Observable::EnergySq],
            Estimand::EnergyRatio => vec![Observable::Energy, Observable::EnergySq],
            Estimand::LComponentSq(a) => vec![Observable::LSq(a)],
            Estimand::L2Mean => vec![Observable::L2],
        }
    }

    /// The estimand as a function of the means of its observables, in the
    /// order returned by `observables`.
    fn combine(&self, m: &[f64]) -> f64 {
        match self {
            Estimand::VarX | Estimand::VarP => m[1] - m[0] * m[0],
            Estimand::CovXP => m[2] - m[0] * m[1],
            Estimand::EnergyRatio => m[1] / (m[0] * m[0]),
            _ => m[0],
        }
    }

    fn needs_three_dims(&self) -> bool {
        matches!(self, Estimand::LComponentSq(_) | Estimand::L2Mean)
    }

    /// Reference value from the classical closed forms.
    pub fn reference(&self, dims: usize, params: &OscillatorParams, state: &ThermalState) -> Result<f64> {
        let d = dims as f64;
        let e = resonant_energy(params, state);
        Ok(match *self {
            Estimand::XMoment(n) => gaussian_moment(n, classical_variance_x(params, state))?,
            Estimand::PMoment(n) => gaussian_moment(n, classical_variance_p(params, state))?,
            Estimand::VarX => classical_variance_x(params, state),
            Estimand::VarP => classical_variance_p(params, state),
            Estimand::CovXP => 0.0,
            Estimand::EnergyMean => d * e,
            Estimand::EnergySecondMoment => d * (d + 1.0) * e * e,
            Estimand::EnergyRatio => (d + 1.0) / d,
            Estimand::LComponentSq(_) => l_component_sq_mean(TheorySide::Classical, params, state),
            Estimand::L2Mean => l2_mean(TheorySide::Classical, params, state),
        })
    }
}

impl TryFrom<QuantitySpec> for Estimand {
    type Error = Error;

    fn try_from(spec: QuantitySpec) -> Result<Self> {
        match spec.quantity {
            Quantity::XMoment(n) => Ok(Estimand::XMoment(n)),
            Quantity::PMoment(n) => Ok(Estimand::PMoment(n)),
            Quantity::EnergyMean => Ok(Estimand::EnergyMean),
            Quantity::EnergySecondMoment => Ok(Estimand::EnergySecondMoment),
            Quantity::L2Mean => Ok(Estimand::L2Mean),
            other => Err(Error::Input(format!("{other:?} cannot be estimated from phase-space samples"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Observable {
    XPow(u32),
    PPow(u32),
    XP,
    Energy,
    EnergySq,
    LSq(Axis),
    L2,
}

impl Observable {
    fn value(&self, pt: &Point, dims: usize, params: &OscillatorParams) -> f64 {
        let d = dims as f64;
        match *self {
            Observable::XPow(n) => (0..dims).map(|a| pt.x[a].powi(n as i32)).sum::<f64>() / d,
            Observable::PPow(n) => (0..dims).map(|a| pt.p[a].powi(n as i32)).sum::<f64>() / d,
            Observable::XP => (0..dims).map(|a| pt.x[a] * pt.p[a]).sum::<f64>() / d,
            Observable::Energy => pt.energy(dims, params),
            Observable::EnergySq => pt.energy(dims, params).powi(2),
            Observable::LSq(a) => pt.angular_momentum(a).powi(2),
            Observable::L2 => Axis::ALL.iter().map(|&a| pt.angular_momentum(a).powi(2)).sum(),
        }
    }
}

/// Running sums of observables and their pairwise products.
#[derive(Debug, Clone, PartialEq)]
struct Sums {
    n: usize,
    s1: Vec<f64>,
    /// Upper triangle, row-major.
    s2: Vec<f64>,
}

impl Sums {
    fn new(k: usize) -> Self {
        Self { n: 0, s1: vec![0.0; k], s2: vec![0.0; k * (k + 1) / 2] }
    }

    fn add_point(&mut self, values: &[f64]) {
        self.n += 1;
        let mut idx = 0;
        for (a, va) in values.iter().enumerate() {
            self.s1[a] += va;
            for vb in &values[a..] {
                self.s2[idx] += va * vb;
                idx += 1;
            }
        }
    }

    fn merge(&mut self, other: &Sums) {
        self.n += other.n;
        self.s1.iter_mut().zip(&other.s1).for_each(|(a, b)| *a += b);
        self.s2.iter_mut().zip(&other.s2).for_each(|(a, b)| *a += b);
    }
}

/// Resolved estimand list with its shared observable set.
struct Plan {
    estimands: Vec<Estimand>,
    observables: Vec<Observable>,
    /// Indices into `observables` for each estimand.
    index: Vec<Vec<usize>>,
}

impl Plan {
    fn new(estimands: &[Estimand], dims: usize) -> Result<Self> {
        check_dims(dims)?;
        for e in estimands {
            if e.needs_three_dims() && dims != 3 {
                return Err(Error::Input(format!("{} requires dims=3", e.name())));
            }
        }
        let set: BTreeSet<Observable> = estimands.iter().flat_map(Estimand::observables).collect();
        let observables: Vec<Observable> = set.into_iter().collect();
        let index = estimands
            .iter()
            .map(|e| {
                e.observables()
                    .iter()
                    .map(|o| observables.iter().position(|x| x == o).expect("observable present"))
                    .collect()
            })
            .collect();
        Ok(Self { estimands: estimands.to_vec(), observables, index })
    }

    fn accumulate(&self, points: &[Point], dims: usize, params: &OscillatorParams) -> Sums {
        let mut sums = Sums::new(self.observables.len());
        let mut values = vec![0.0; self.observables.len()];
        for pt in points {
            for (v, o) in values.iter_mut().zip(&self.observables) {
                *v = o.value(pt, dims, params);
            }
            sums.add_point(&values);
        }
        sums
    }

    fn table(&self, sums: &Sums, dims: usize, params: &OscillatorParams, state: &ThermalState) -> Result<EstimateTable> {
        let k = self.observables.len();
        let n = sums.n as f64;
        let means: Vec<f64> = sums.s1.iter().map(|s| s / n).collect();
        let mut cov = vec![vec![0.0; k]; k];
        if sums.n > 1 {
            let mut idx = 0;
            for a in 0..k {
                for b in a..k {
                    let c = (sums.s2[idx] - n * means[a] * means[b]) / (n - 1.0);
                    cov[a][b] = c;
                    cov[b][a] = c;
                    idx += 1;
                }
            }
        }
        let mut table = EstimateTable::default();
        for (e, idx) in self.estimands.iter().zip(&self.index) {
            let local_means: Vec<f64> = idx.iter().map(|&i| means[i]).collect();
            let local_cov: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| cov[i][j]).collect()).collect();
            let f = |m: &[f64]| e.combine(m);
            let estimate = f(&local_means);
            let g = numeric_gradient(&f, &local_means);
            let var = quadratic_form(&g, &local_cov).max(0.0);
            let se = (var / n).sqrt();
            let n_eff = if se > 0.0 { var / (se * se) } else { n };
            table.push(EstimateRow::new(e.name(), estimate, se, n_eff, Some(e.reference(dims, params, state)?)));
        }
        Ok(table)
    }
}

/// Plug-in estimates with delta-method standard errors and classical
/// references.
pub fn estimate(sample: &PhaseSample, estimands: &[Estimand]) -> Result<EstimateTable> {
    let plan = Plan::new(estimands, sample.dims)?;
    let state = ThermalState::new(sample.temperature)?;
    let n = sample.len();
    let mut total = Sums::new(plan.observables.len());
    for b in 0..n.div_ceil(SAMPLE_BLOCK) {
        let start = b * SAMPLE_BLOCK;
        let points: Vec<Point> = (start..start + block_len(n, b)).map(|i| sample.point(i)).collect();
        total.merge(&plan.accumulate(&points, sample.dims, &sample.params));
    }
    plan.table(&total, sample.dims, &sample.params, &state)
}

/// Draws and estimates without storing the sample, processing the blocks in
/// `chunks` contiguous groups concurrently. The result is identical for every
/// chunk count and equals `estimate(draw_phase_space(..))`.
pub fn estimate_chunked(
    n: usize,
    dims: usize,
    params: &OscillatorParams,
    state: &ThermalState,
    seed: u64,
    estimands: &[Estimand],
    chunks: usize,
) -> Result<EstimateTable> {
    let plan = Plan::new(estimands, dims)?;
    if n == 0 {
        return Err(Error::Input("sample size must be at least 1".into()));
    }
    let sx = classical_variance_x(params, state).sqrt();
    let sp = classical_variance_p(params, state).sqrt();
    let n_blocks = n.div_ceil(SAMPLE_BLOCK);
    let chunks = chunks.clamp(1, n_blocks);
    let per_chunk = n_blocks.div_ceil(chunks);
    let chunk_sums: Vec<Vec<Sums>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let range = (c * per_chunk)..((c + 1) * per_chunk).min(n_blocks);
            range
                .map(|b| {
                    let pts = draw_block(b, block_len(n, b), dims, sx, sp, seed);
                    plan.accumulate(&pts, dims, params)
                })
                .collect()
        })
        .collect();
    let mut total = Sums::new(plan.observables.len());
    for s in chunk_sums.iter().flatten() {
        total.merge(s);
    }
    plan.table(&total, dims, params, state)
}

/// Hypothesised distribution of the energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EnergyLaw {
    Exponential { mean: f64 },
    Gamma { shape: u32, scale: f64 },
}

impl EnergyLaw {
    /// Law implied by the equilibrium density: gamma with shape `dims` and
    /// scale `ℰ(ω₀, T)`, which is exponential for one dimension.
    pub fn equilibrium(dims: usize, params: &OscillatorParams, state: &ThermalState) -> Self {
        let e = resonant_energy(params, state);
        if dims == 1 {
            EnergyLaw::Exponential { mean: e }
        } else {
            EnergyLaw::Gamma { shape: dims as u32, scale: e }
        }
    }

    pub fn cdf(&self, h: f64) -> f64 {
        match *self {
            EnergyLaw::Exponential { mean } => exponential_cdf(h, mean),
            EnergyLaw::Gamma { shape, scale } => gamma_cdf_integer_shape(h, shape, scale),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLawReport {
    pub law: EnergyLaw,
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub passed: bool,
}

/// KS test of the sampled energies against the equilibrium law.
pub fn energy_law_test(sample: &PhaseSample, params: &OscillatorParams, state: &ThermalState) -> Result<EnergyLawReport> {
    check_dims(sample.dims)?;
    energy_law_test_against(&sample.energies(), EnergyLaw::equilibrium(sample.dims, params, state))
}

/// KS test of energies against an explicit law, at level [`LAW_ALPHA`].
pub fn energy_law_test_against(energies: &[f64], law: EnergyLaw) -> Result<EnergyLawReport> {
    if energies.len() < MIN_LAW_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "energy-law test needs at least {MIN_LAW_SAMPLES} samples, got {}",
            energies.len()
        )));
    }
    let ks = ks_test(energies, |h| law.cdf(h))?;
    Ok(EnergyLawReport { law, n: ks.n, statistic: ks.statistic, p_value: ks.p_value, passed: ks.passes(LAW_ALPHA) })
}
