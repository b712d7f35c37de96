use std::sync::Arc;

use crate::error::{Error, Result};
use crate::euler_waves::WaveConfig;
use crate::profiles::rarefaction::{ApproxRarefaction, RarefactionSample};
use crate::profiles::shock::{solve_shock_profile, ShockProfile, ShockSample};
use crate::profiles::weight::WeightFunction;

/// Shifted composite wave at one point in the shock frame, with its parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CompositeSample {
    pub v: f64,
    pub u: f64,
    /// `h̃ = ũ^R + h̃^S - u_m`
    pub h: f64,
    pub v_xi: f64,
    pub u_xi: f64,
    pub h_xi: f64,
    pub rare: RarefactionSample,
    pub shock: ShockSample,
}

/// Everything needed to evaluate the background of a run.
#[derive(Debug, Clone)]
pub struct Background {
    pub cfg: WaveConfig,
    pub profile: Arc<ShockProfile>,
    pub rare: ApproxRarefaction,
    pub weight: WeightFunction,
}

impl Background {
    pub fn new(cfg: &WaveConfig, lambda: f64, tail_tol: f64) -> Result<Self> {
        let profile = Arc::new(solve_shock_profile(cfg, tail_tol)?);
        let weight = WeightFunction::new(lambda, Arc::clone(&profile))?;
        Ok(Self { cfg: *cfg, profile, rare: ApproxRarefaction::new(cfg), weight })
    }

    /// Rarefaction part, evaluated at `x = ξ + σt`.
    #[inline]
    pub fn rarefaction_at(&self, t: f64, xi: f64) -> RarefactionSample {
        self.rare.eval(t, xi + self.cfg.sigma * t)
    }

    #[inline]
    pub fn combine(&self, rare: RarefactionSample, shock: ShockSample) -> CompositeSample {
        let cfg = &self.cfg;
        CompositeSample {
            v: rare.v + shock.v - cfg.v_m,
            u: rare.u + shock.u - cfg.u_m,
            h: rare.u + shock.h - cfg.u_m,
            v_xi: rare.v_x + shock.v_xi,
            u_xi: rare.u_x + shock.u_xi,
            h_xi: rare.u_x + shock.h_xi,
            rare,
            shock,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64, xi: f64, shift: f64) -> CompositeSample {
        self.combine(self.rarefaction_at(t, xi), self.profile.eval(xi - shift))
    }

    /// `(a, a')` at `ξ - X`.
    #[inline]
    pub fn weight_shifted(&self, shock: &ShockSample) -> (f64, f64) {
        self.weight.from_sample(shock)
    }
}

/// `(ṽ, ũ, h̃)_{-X}(t, ξ)` and ξ-derivatives; errors if the volume is not positive.
pub fn composite_wave(
    t: f64,
    xi: f64,
    shift: f64,
    profile: &ShockProfile,
    rare: &ApproxRarefaction,
) -> Result<CompositeSample> {
    let cfg = profile.config();
    let r = rare.eval(t, xi + cfg.sigma * t);
    let s = profile.eval(xi - shift);
    let sample = CompositeSample {
        v: r.v + s.v - cfg.v_m,
        u: r.u + s.u - cfg.u_m,
        h: r.u + s.h - cfg.u_m,
        v_xi: r.v_x + s.v_xi,
        u_xi: r.u_x + s.u_xi,
        h_xi: r.u_x + s.h_xi,
        rare: r,
        shock: s,
    };
    if !(sample.v > 0.0) {
        return Err(Error::Internal(format!("composite volume {} at t={t}, xi={xi} is not positive", sample.v)));
    }
    Ok(sample)
}
