//! Composite viscous-shock / rarefaction waves of the one-dimensional
//! barotropic Navier-Stokes system in Lagrangian mass coordinates.
//!
//! The crate builds the background wave (a viscous 2-shock superposed with a
//! smooth 1-rarefaction), simulates perturbations of it in the shock frame
//! together with a dynamic shift `X(t)`, and monitors the weighted
//! relative-entropy functionals of the stability theory.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod euler_waves;
pub mod profiles;
pub mod shift;
pub mod solver;
pub mod thermo;
pub mod verify;

pub use config::{parse_config, RunConfig};
pub use diagnostics::DiagnosticRecord;
pub use error::{Error, Result};
pub use euler_waves::WaveConfig;
pub use profiles::{ApproxRarefaction, Background, ShockProfile, WeightFunction};
pub use shift::{shift_constant_m, ShiftParams};
pub use solver::{run, Grid1D, Model, RunArtifacts, SimState, Simulation};
pub use thermo::GasParams;
