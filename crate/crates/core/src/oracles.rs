//! Closed-form thermal expectation values for the classical oscillator in
//! radiation equilibrium and for the quantum oscillator.
//!
//! The classical side averages over the Gaussian phase-space density
//!
//! ```text
//! P_T(x, p) = ω₀ / (2π ℰ) · exp(−H(x, p) / ℰ),   ℰ = (ħω₀/2) coth θ,
//! ```
//!
//! and the quantum side uses thermal (Boltzmann-weighted) expectation values.
//! The two agree on mean energies and on all position or momentum moments but
//! differ by constant amounts in `⟨H²⟩` and `⟨L²⟩` at every temperature.
//!
//! Functions without a `dims` argument describe one degree of freedom.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{coth_theta, resonant_energy, theta, OscillatorParams, ThermalState};

/// Which theory an expectation value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheorySide {
    Classical,
    Quantum,
}

impl TheorySide {
    pub fn other(self) -> Self {
        match self {
            TheorySide::Classical => TheorySide::Quantum,
            TheorySide::Quantum => TheorySide::Classical,
        }
    }
}

impl fmt::Display for TheorySide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheorySide::Classical => "classical",
            TheorySide::Quantum => "quantum",
        })
    }
}

impl FromStr for TheorySide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" | "cl" => Ok(TheorySide::Classical),
            "quantum" | "q" => Ok(TheorySide::Quantum),
            other => Err(Error::Input(format!("unknown side '{other}' (expected classical or quantum)"))),
        }
    }
}

/// A named expectation value or density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    XMoment(u32),
    PMoment(u32),
    EnergyMean,
    EnergySecondMoment,
    L2Mean,
    PartitionFunction,
    PhaseDensity { x: f64, p: f64 },
    GroundDensity { x: f64 },
}

/// A quantity together with the number of spatial dimensions it refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantitySpec {
    pub quantity: Quantity,
    pub dims: u8,
}

impl QuantitySpec {
    pub fn new(quantity: Quantity, dims: u8) -> Result<Self> {
        let spec = Self { quantity, dims };
        spec.validate_dims()?;
        Ok(spec)
    }

    fn validate_dims(&self) -> Result<()> {
        if self.dims != 1 && self.dims != 3 {
            return Err(Error::Input(format!("dims must be 1 or 3, got {}", self.dims)));
        }
        match self.quantity {
            Quantity::L2Mean if self.dims != 3 => {
                Err(Error::Input("L2_mean requires dims=3".into()))
            }
            Quantity::PartitionFunction | Quantity::PhaseDensity { .. } | Quantity::GroundDensity { .. }
                if self.dims != 1 =>
            {
                Err(Error::Input("partition function and densities are one-dimensional (dims=1)".into()))
            }
            _ => Ok(()),
        }
    }

    /// Evaluates the quantity on the given side.
    pub fn evaluate(&self, side: TheorySide, params: &OscillatorParams, state: &ThermalState) -> Result<f64> {
        self.validate_dims()?;
        let d = f64::from(self.dims);
        match self.quantity {
            Quantity::XMoment(n) => gaussian_moment(n, classical_variance_x(params, state)),
            Quantity::PMoment(n) => gaussian_moment(n, classical_variance_p(params, state)),
            Quantity::EnergyMean => Ok(d * energy_mean(side, params, state)),
            Quantity::EnergySecondMoment => {
                let e = resonant_energy(params, state);
                let zp = params.zero_point_energy();
                Ok(match side {
                    TheorySide::Classical => d * (d + 1.0) * e * e,
                    TheorySide::Quantum => d * (d + 1.0) * e * e - d * zp * zp,
                })
            }
            Quantity::L2Mean => Ok(l2_mean(side, params, state)),
            Quantity::PartitionFunction => match side {
                TheorySide::Quantum => partition_function(params, state),
                TheorySide::Classical => Err(Error::Input("partition_function requires side=quantum".into())),
            },
            Quantity::PhaseDensity { x, p } => match side {
                TheorySide::Classical => Ok(phase_density(x, p, params, state)),
                TheorySide::Quantum => Err(Error::Input("phase_density is a classical phase-space density (side=classical)".into())),
            },
            // |ψ₀|² and the p-marginal of P₀ coincide.
            Quantity::GroundDensity { x } => Ok(ground_density_x(x, params)),
        }
    }
}

/// `(k)!!` for odd `k`, with `(−1)!! = 1`.
fn odd_double_factorial(k: i64) -> f64 {
    let mut acc = 1.0;
    let mut j = k;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    acc
}

/// Central moment `E[Xⁿ]` of a zero-mean Gaussian: zero for odd `n`,
/// `(n−1)!! σⁿ` for even `n`.
pub fn gaussian_moment(n: u32, variance: f64) -> Result<f64> {
    if !(variance.is_finite() && variance > 0.0) {
        return Err(Error::Domain(format!("variance must be positive, got {variance}")));
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    Ok(odd_double_factorial(i64::from(n) - 1) * variance.powi((n / 2) as i32))
}

/// `⟨x²⟩ = [ħ/(2mω₀)] coth θ`, identical for both sides.
pub fn classical_variance_x(params: &OscillatorParams, state: &ThermalState) -> f64 {
    params.hbar / (2.0 * params.mass * params.omega0) * coth_theta(params, state)
}

/// `⟨p²⟩ = [ħmω₀/2] coth θ`, identical for both sides.
pub fn classical_variance_p(params: &OscillatorParams, state: &ThermalState) -> f64 {
    0.5 * params.hbar * params.mass * params.omega0 * coth_theta(params, state)
}

/// `⟨H⟩ = (ħω₀/2) coth θ`. The side is accepted for symmetry; both agree.
pub fn energy_mean(_side: TheorySide, params: &OscillatorParams, state: &ThermalState) -> f64 {
    resonant_energy(params, state)
}

/// `⟨H²⟩`: `2⟨H⟩²` classically, `2⟨H⟩² − (ħω₀/2)²` quantum mechanically.
pub fn energy_second_moment(side: TheorySide, params: &OscillatorParams, state: &ThermalState) -> f64 {
    let e = resonant_energy(params, state);
    match side {
        TheorySide::Classical => 2.0 * e * e,
        TheorySide::Quantum => {
            let zp = params.zero_point_energy();
            2.0 * e * e - zp * zp
        }
    }
}

/// `⟨L²⟩` for the isotropic 3-D oscillator: `(3/2)ħ² coth²θ` classically,
/// `(3/2)ħ² (coth²θ − 1)` quantum mechanically.
pub fn l2_mean(side: TheorySide, params: &OscillatorParams, state: &ThermalState) -> f64 {
    let c = coth_theta(params, state);
    let h2 = params.hbar * params.hbar;
    match side {
        TheorySide::Classical => 1.5 * h2 * c * c,
        // coth² − 1 = 1/sinh², written to avoid cancellation as T → 0.
        TheorySide::Quantum => 1.5 * h2 * (c - 1.0) * (c + 1.0),
    }
}

/// Per-component `⟨L_i²⟩ = ⟨L²⟩ / 3`.
pub fn l_component_sq_mean(side: TheorySide, params: &OscillatorParams, state: &ThermalState) -> f64 {
    l2_mean(side, params, state) / 3.0
}

/// `Z = 1 / (2 sinh θ)` for the quantum oscillator. Undefined at `T = 0`.
pub fn partition_function(params: &OscillatorParams, state: &ThermalState) -> Result<f64> {
    if state.is_zero() {
        return Err(Error::Domain("partition function is undefined at T = 0".into()));
    }
    Ok(1.0 / (2.0 * theta(params, state).sinh()))
}

/// Observable summed by [`boltzmann_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoltzmannObservable {
    /// Energy `(n + ½)ħω₀`.
    Energy,
    /// Squared energy `[(n + ½)ħω₀]²`.
    EnergySquared,
}

/// Largest number of levels [`boltzmann_sum`] will add before giving up.
pub const BOLTZMANN_MAX_TERMS: usize = 1_000_000;

/// Thermal average over the oscillator levels `(n + ½)ħω₀`, summed term by
/// term with the Boltzmann weights and normalised by the summed partition
/// function.
///
/// Terms are added until the closed-form geometric tail bounds of both the
/// numerator and the normalisation fall below `rel_tol / 4` of their partial
/// sums, which bounds the relative error of the ratio by `rel_tol`. At `T = 0`
/// the ground-state value is returned.
pub fn boltzmann_sum(
    observable: BoltzmannObservable,
    params: &OscillatorParams,
    state: &ThermalState,
    rel_tol: f64,
) -> Result<f64> {
    if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
        return Err(Error::Domain(format!("rel_tol must be in (0, 1e-3], got {rel_tol}")));
    }
    let quantum = params.hbar * params.omega0;
    let level = |n: f64| (n + 0.5) * quantum;
    let value = |n: f64| match observable {
        BoltzmannObservable::Energy => level(n),
        BoltzmannObservable::EnergySquared => level(n).powi(2),
    };
    if state.is_zero() {
        return Ok(value(0.0));
    }
    let beta_quantum = quantum / (params.kb * state.temperature);
    // Ratio of successive Boltzmann factors.
    let q = (-beta_quantum).exp();
    if q >= 1.0 {
        return Err(Error::Convergence(format!(
            "Boltzmann ratio rounds to 1 at T = {}; the level sum cannot converge",
            state.temperature
        )));
    }
    let one_minus_q = -(-beta_quantum).exp_m1();
    let budget = rel_tol / 4.0;

    let mut z = 0.0;
    let mut num = 0.0;
    for n in 0..BOLTZMANN_MAX_TERMS {
        let nf = n as f64;
        let w = (-(nf + 0.5) * beta_quantum).exp();
        z += w;
        num += value(nf) * w;

        // Tails from level N = n + 1 onwards, with w_N = w q.
        let w_next = w * q;
        let a = nf + 1.5;
        let z_tail = w_next / one_minus_q;
        let num_tail = match observable {
            BoltzmannObservable::Energy => {
                quantum * w_next * (a / one_minus_q + q / (one_minus_q * one_minus_q))
            }
            BoltzmannObservable::EnergySquared => {
                let s0 = 1.0 / one_minus_q;
                let s1 = q / (one_minus_q * one_minus_q);
                let s2 = q * (1.0 + q) / one_minus_q.powi(3);
                quantum * quantum * w_next * (a * a * s0 + 2.0 * a * s1 + s2)
            }
        };
        if z_tail <= budget * z && num_tail <= budget * num {
            return Ok(num / z);
        }
    }
    Err(Error::Convergence(format!(
        "Boltzmann sum did not reach rel_tol {rel_tol} within {BOLTZMANN_MAX_TERMS} terms at T = {}",
        state.temperature
    )))
}

/// Natural logarithm of [`phase_density`].
pub fn log_phase_density(x: f64, p: f64, params: &OscillatorParams, state: &ThermalState) -> f64 {
    let e = resonant_energy(params, state);
    let h = p * p / (2.0 * params.mass) + 0.5 * params.mass * params.omega0.powi(2) * x * x;
    (params.omega0 / (2.0 * PI * e)).ln() - h / e
}

/// Equilibrium phase-space density of the classical oscillator in thermal
/// radiation with zero-point radiation, normalised to one over `(x, p)`.
pub fn phase_density(x: f64, p: f64, params: &OscillatorParams, state: &ThermalState) -> f64 {
    log_phase_density(x, p, params, state).exp()
}

/// Natural logarithm of [`ground_density_x`].
pub fn log_ground_density_x(x: f64, params: &OscillatorParams) -> f64 {
    let s = params.mass * params.omega0 / params.hbar;
    0.5 * (s / PI).ln() - s * x * x
}

/// `|ψ₀(x)|² = (mω₀/πħ)^{1/2} exp(−mω₀x²/ħ)`.
pub fn ground_density_x(x: f64, params: &OscillatorParams) -> f64 {
    log_ground_density_x(x, params).exp()
}
