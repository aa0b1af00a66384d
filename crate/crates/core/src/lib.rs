//! Classical and quantum harmonic oscillators in thermal equilibrium, side by
//! side: closed-form averages, an exact canonical/operator algebra, stochastic
//! simulation of a charged oscillator driven by random radiation, and Monte
//! Carlo estimators that compare the two descriptions.

pub mod algebra;
pub mod error;
pub mod langevin;
pub mod model;
pub mod noise;
pub mod oracles;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod table;

pub use error::{Error, Result};
pub use model::{OscillatorParams, ThermalState};
pub use oracles::TheorySide;
