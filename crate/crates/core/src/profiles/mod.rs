//! Background waves: viscous shock, smooth rarefaction, their shifted
//! superposition and the shock-layer weight.

pub mod composite;
pub mod rarefaction;
pub mod shock;
pub mod weight;

pub use composite::{composite_wave, Background, CompositeSample};
pub use rarefaction::{approx_rarefaction_eval, ApproxRarefaction, RarefactionSample};
pub use shock::{solve_shock_profile, ShockProfile, ShockSample, DEFAULT_TAIL_TOL};
pub use weight::{weight_a, WeightFunction};

/// Evaluates the shock profile at `ξ`.
pub fn eval_shock(profile: &ShockProfile, xi: f64) -> ShockSample {
    profile.eval(xi)
}
