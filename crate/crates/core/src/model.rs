//! Physical parameters and the thermal radiation mode energy.
//!
//! Every formula downstream depends on the dimensionless ratio
//! `θ = ħω₀ / (2 k_B T)` and on `coth θ`. Zero temperature is the limit
//! `θ → ∞`, where `coth θ = 1`; it is treated as that limit and never as a
//! division by zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on `τ ω₀` for the weak-coupling reduction used by the
/// simulator.
pub const DEFAULT_COUPLING_THRESHOLD: f64 = 0.01;

/// Mass, frequency, action scale, Boltzmann constant and radiation damping
/// time of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega0: f64,
    pub hbar: f64,
    pub kb: f64,
    /// Radiation damping time τ. Enters the dynamics only through the
    /// resonant damping rate `Γ = τ ω₀²`.
    pub tau: f64,
    /// Upper bound on `τ ω₀` accepted by [`OscillatorParams::check_weak_coupling`].
    pub coupling_threshold: f64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self::natural()
    }
}

impl OscillatorParams {
    /// `ħ = m = ω₀ = k_B = 1`, no coupling.
    pub fn natural() -> Self {
        Self {
            mass: 1.0,
            omega0: 1.0,
            hbar: 1.0,
            kb: 1.0,
            tau: 0.0,
            coupling_threshold: DEFAULT_COUPLING_THRESHOLD,
        }
    }

    /// Validated constructor.
    pub fn new(mass: f64, omega0: f64, hbar: f64, kb: f64, tau: f64) -> Result<Self> {
        let params = Self {
            mass,
            omega0,
            hbar,
            kb,
            tau,
            coupling_threshold: DEFAULT_COUPLING_THRESHOLD,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_coupling_threshold(mut self, threshold: f64) -> Self {
        self.coupling_threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("omega0", self.omega0),
            ("hbar", self.hbar),
            ("kb", self.kb),
            ("coupling_threshold", self.coupling_threshold),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::Domain(format!("tau must be non-negative, got {}", self.tau)));
        }
        Ok(())
    }

    /// Resonant damping rate `Γ = τ ω₀²`.
    pub fn damping_rate(&self) -> f64 {
        self.tau * self.omega0 * self.omega0
    }

    /// `τ ω₀ < threshold`, required before the simulator or the noise model
    /// may use these parameters.
    pub fn check_weak_coupling(&self) -> Result<()> {
        let coupling = self.tau * self.omega0;
        if coupling < self.coupling_threshold {
            Ok(())
        } else {
            Err(Error::Validity(format!(
                "tau*omega0 = {coupling} is not below the weak-coupling threshold {}",
                self.coupling_threshold
            )))
        }
    }

    pub fn is_weakly_coupled(&self) -> bool {
        self.check_weak_coupling().is_ok()
    }

    /// Zero-point energy `ħω₀/2`.
    pub fn zero_point_energy(&self) -> f64 {
        0.5 * self.hbar * self.omega0
    }
}

/// Absolute temperature. `T = 0` is valid everywhere.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ThermalState {
    pub temperature: f64,
}

impl ThermalState {
    pub fn new(temperature: f64) -> Result<Self> {
        if temperature.is_finite() && temperature >= 0.0 {
            Ok(Self { temperature })
        } else {
            Err(Error::Domain(format!("temperature must be finite and >= 0, got {temperature}")))
        }
    }

    pub const fn zero() -> Self {
        Self { temperature: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.temperature == 0.0
    }
}

/// `coth(ħω/(2 k_B T))` for an arbitrary mode frequency.
///
/// Evaluated as `1 + 2/expm1(ħω/k_B T)`, which is accurate at both ends and
/// equals exactly 1 at `T = 0` and whenever the Boltzmann factor underflows.
fn coth_half_ratio(hbar_omega: f64, kb: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let ratio = hbar_omega / (kb * temperature);
    1.0 + 2.0 / ratio.exp_m1()
}

/// `coth θ` with `θ = ħω₀ / (2 k_B T)`. Always `≥ 1`, exactly 1 at `T = 0`.
pub fn coth_theta(params: &OscillatorParams, state: &ThermalState) -> f64 {
    coth_half_ratio(params.hbar * params.omega0, params.kb, state.temperature)
}

/// `θ = ħω₀/(2 k_B T)`; infinite at `T = 0`.
pub fn theta(params: &OscillatorParams, state: &ThermalState) -> f64 {
    if state.is_zero() {
        f64::INFINITY
    } else {
        params.hbar * params.omega0 / (2.0 * params.kb * state.temperature)
    }
}

/// Mean energy per radiation normal mode at angular frequency `omega`.
///
/// With the zero-point part this is `(ħω/2) coth(ħω/2k_BT)`; without it, the
/// Planck form `ħω/(exp(ħω/k_BT) − 1)`. The two differ by exactly `ħω/2`.
pub fn mode_energy(
    omega: f64,
    state: &ThermalState,
    include_zero_point: bool,
    params: &OscillatorParams,
) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!("mode frequency must be positive, got {omega}")));
    }
    Ok(mode_energy_unchecked(omega, state, include_zero_point, params))
}

pub(crate) fn mode_energy_unchecked(
    omega: f64,
    state: &ThermalState,
    include_zero_point: bool,
    params: &OscillatorParams,
) -> f64 {
    let quantum = params.hbar * omega;
    let planck = if state.is_zero() {
        0.0
    } else {
        quantum / (quantum / (params.kb * state.temperature)).exp_m1()
    };
    if include_zero_point {
        0.5 * quantum + planck
    } else {
        planck
    }
}

/// `ℰ(ω₀, T) = (ħω₀/2) coth θ`, the oscillator's equilibrium mean energy.
pub fn resonant_energy(params: &OscillatorParams, state: &ThermalState) -> f64 {
    params.zero_point_energy() * coth_theta(params, state)
}
