pub mod algebra;
pub mod compare;
pub mod oracle;
pub mod sample;
pub mod simulate;
pub mod sweep;

use std::str::FromStr;

use sedosc::algebra::Axis;
use sedosc::model::{coth_theta, mode_energy};
use sedosc::oracles::{l_component_sq_mean, Quantity, QuantitySpec};
use sedosc::{OscillatorParams, TheorySide, ThermalState};

use crate::error::{CliError, Result};
use crate::settings::Settings;

/// Quantities addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleQuantity {
    EnergyMean,
    EnergySecondMoment,
    L2Mean,
    LComponentSq(Axis),
    XMoment(u32),
    PMoment(u32),
    PartitionFunction,
    Coth,
    /// Mode energy with the zero-point part.
    ModeEnergy,
    /// Planck mode energy without the zero-point part.
    PlanckEnergy,
    PhaseDensity,
    GroundDensity,
}

impl FromStr for OracleQuantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let moment = |rest: &str| rest.parse::<u32>().ok();
        Ok(match s {
            "H" => OracleQuantity::EnergyMean,
            "H2" => OracleQuantity::EnergySecondMoment,
            "L2" => OracleQuantity::L2Mean,
            "Lx2" | "L12" => OracleQuantity::LComponentSq(Axis::X),
            "Ly2" | "L22" => OracleQuantity::LComponentSq(Axis::Y),
            "Lz2" | "L32" => OracleQuantity::LComponentSq(Axis::Z),
            "Z" => OracleQuantity::PartitionFunction,
            "coth" => OracleQuantity::Coth,
            "E" => OracleQuantity::ModeEnergy,
            "EP" => OracleQuantity::PlanckEnergy,
            "P" => OracleQuantity::PhaseDensity,
            "rho0" => OracleQuantity::GroundDensity,
            _ => match (s.strip_prefix('x').and_then(moment), s.strip_prefix('p').and_then(moment)) {
                (Some(n), _) => OracleQuantity::XMoment(n),
                (_, Some(n)) => OracleQuantity::PMoment(n),
                _ => {
                    return Err(format!(
                        "unknown quantity `{s}` (expected H, H2, L2, Lx2, Ly2, Lz2, x<n>, p<n>, Z, coth, E, EP, P or rho0)"
                    ))
                }
            },
        })
    }
}

impl OracleQuantity {
    fn default_dims(self) -> u8 {
        match self {
            OracleQuantity::L2Mean | OracleQuantity::LComponentSq(_) => 3,
            _ => 1,
        }
    }

    fn default_side(self) -> TheorySide {
        match self {
            OracleQuantity::PartitionFunction => TheorySide::Quantum,
            _ => TheorySide::Classical,
        }
    }

    /// Whether the classical and quantum values differ.
    pub fn has_discrepancy(self) -> bool {
        matches!(
            self,
            OracleQuantity::EnergySecondMoment | OracleQuantity::L2Mean | OracleQuantity::LComponentSq(_)
        )
    }
}

/// A fully resolved oracle query apart from the temperature.
#[derive(Debug, Clone, Copy)]
pub struct Query {
    pub quantity: OracleQuantity,
    pub side: TheorySide,
    pub dims: u8,
    pub omega: f64,
    pub x: f64,
    pub p: f64,
}

impl Query {
    pub fn from_settings(s: &Settings, params: &OscillatorParams) -> Result<Self> {
        let name = s.raw("quantity").ok_or_else(|| CliError::usage("missing --quantity"))?;
        let quantity: OracleQuantity = name.parse().map_err(CliError::Usage)?;
        let side = match s.raw("side") {
            Some(v) => v.parse::<TheorySide>().map_err(|e| CliError::usage(e.to_string()))?,
            None => quantity.default_side(),
        };
        let dims = s.get_or("dims", quantity.default_dims())?;
        if matches!(quantity, OracleQuantity::LComponentSq(_)) && dims != 3 {
            return Err(CliError::usage("angular momentum components require dims=3"));
        }
        let omega = s.float_or("omega", params.omega0)?;
        let needs_point = matches!(quantity, OracleQuantity::PhaseDensity | OracleQuantity::GroundDensity);
        if !needs_point && (s.raw("x").is_some() || s.raw("p").is_some()) {
            return Err(CliError::usage("--x and --p apply only to P and rho0"));
        }
        Ok(Self { quantity, side, dims, omega, x: s.float_or("x", 0.0)?, p: s.float_or("p", 0.0)? })
    }

    pub fn with_side(self, side: TheorySide) -> Self {
        Self { side, ..self }
    }

    pub fn evaluate(&self, params: &OscillatorParams, state: &ThermalState) -> Result<f64> {
        let spec = |q| QuantitySpec::new(q, self.dims);
        let core = |q| -> Result<f64> { Ok(spec(q)?.evaluate(self.side, params, state)?) };
        match self.quantity {
            OracleQuantity::EnergyMean => core(Quantity::EnergyMean),
            OracleQuantity::EnergySecondMoment => core(Quantity::EnergySecondMoment),
            OracleQuantity::L2Mean => core(Quantity::L2Mean),
            OracleQuantity::XMoment(n) => core(Quantity::XMoment(n)),
            OracleQuantity::PMoment(n) => core(Quantity::PMoment(n)),
            OracleQuantity::PartitionFunction => core(Quantity::PartitionFunction),
            OracleQuantity::PhaseDensity => core(Quantity::PhaseDensity { x: self.x, p: self.p }),
            OracleQuantity::GroundDensity => core(Quantity::GroundDensity { x: self.x }),
            OracleQuantity::LComponentSq(_) => Ok(l_component_sq_mean(self.side, params, state)),
            OracleQuantity::Coth => Ok(coth_theta(params, state)),
            OracleQuantity::ModeEnergy => Ok(mode_energy(self.omega, state, true, params)?),
            OracleQuantity::PlanckEnergy => Ok(mode_energy(self.omega, state, false, params)?),
        }
    }
}
