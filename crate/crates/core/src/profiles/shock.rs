//! Viscous 2-shock profile.
//!
//! Integrating the traveling-wave system once from `-∞` leaves the scalar ODE
//!
//! ```text
//! ṽ' = -(ṽ/σ) g(ṽ),    g(v) = σ²(v - v_m) + p(v) - p(v_m)
//! ```
//!
//! together with `ũ = u_m - σ(ṽ - v_m)` and `h̃ = ũ - (ln ṽ)' = ũ + g(ṽ)/σ`.
//! Only `ṽ` is tabulated; every other field and every derivative is recovered
//! from these algebraic relations at the interpolated `ṽ`.

use crate::error::{Error, Result};
use crate::euler_waves::WaveConfig;

pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Profile fields and their exact ξ-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShockSample {
    pub v: f64,
    pub u: f64,
    pub h: f64,
    pub v_xi: f64,
    pub u_xi: f64,
    pub h_xi: f64,
    /// `∂_ξ p(ṽ^S)`
    pub p_xi: f64,
    pub v_xixi: f64,
    pub u_xixi: f64,
}

#[derive(Debug, Clone)]
pub struct ShockProfile {
    cfg: WaveConfig,
    xi_start: f64,
    step: f64,
    v: Vec<f64>,
    dv: Vec<f64>,
}

impl ShockProfile {
    pub fn config(&self) -> &WaveConfig {
        &self.cfg
    }

    pub fn is_degenerate(&self) -> bool {
        self.v.len() < 2
    }

    /// Tabulated range `[ξ_min, ξ_max]`; outside it the profile is extended by
    /// its end states.
    pub fn xi_range(&self) -> (f64, f64) {
        if self.is_degenerate() {
            return (0.0, 0.0);
        }
        (self.xi_start, self.xi_start + self.step * (self.v.len() - 1) as f64)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn xi_at(&self, i: usize) -> f64 {
        self.xi_start + self.step * i as f64
    }

    /// Tabulated volumes.
    pub fn v_samples(&self) -> &[f64] {
        &self.v
    }

    /// `g(v) = σ²(v - v_m) + p(v) - p(v_m)`; negative strictly between `v_m` and `v₊`.
    #[inline]
    pub fn g(&self, v: f64) -> f64 {
        profile_g(&self.cfg, v)
    }

    /// Right-hand side of the profile ODE.
    #[inline]
    pub fn rhs(&self, v: f64) -> f64 {
        -(v / self.cfg.sigma) * self.g(v)
    }

    /// Samples the profile at `ξ`.
    ///
    /// Inside the table `ṽ` is a cubic Hermite interpolant of the nodal values
    /// and nodal ODE slopes; derivatives come from the ODE at that `ṽ`.
    pub fn eval(&self, xi: f64) -> ShockSample {
        let cfg = &self.cfg;
        if self.is_degenerate() {
            return end_state(cfg.v_plus, cfg.u_plus);
        }
        let (lo, hi) = self.xi_range();
        if xi <= lo {
            return end_state(cfg.v_m, cfg.u_m);
        }
        if xi >= hi {
            return end_state(cfg.v_plus, cfg.u_plus);
        }
        let pos = (xi - self.xi_start) / self.step;
        let i = (pos.floor() as usize).min(self.v.len() - 2);
        let s = pos - i as f64;
        let (y0, y1) = (self.v[i], self.v[i + 1]);
        let (m0, m1) = (self.dv[i] * self.step, self.dv[i + 1] * self.step);
        let s2 = s * s;
        let s3 = s2 * s;
        let v =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        self.sample_at_volume(v)
    }

    fn sample_at_volume(&self, v: f64) -> ShockSample {
        let cfg = &self.cfg;
        let gas = &cfg.gas;
        let sigma = cfg.sigma;
        let g = self.g(v);
        let dg = sigma * sigma + gas.dp(v);
        let v_xi = -(v / sigma) * g;
        let u_xi = -sigma * v_xi;
        let v_xixi = -(g + v * dg) / sigma * v_xi;
        ShockSample {
            v,
            u: cfg.u_m - sigma * (v - cfg.v_m),
            h: cfg.u_m - sigma * (v - cfg.v_m) + g / sigma,
            v_xi,
            u_xi,
            h_xi: gas.dp(v) * v_xi / sigma,
            p_xi: gas.dp(v) * v_xi,
            v_xixi,
            u_xixi: -sigma * v_xixi,
        }
    }

    /// Decay rate of `ṽ^S - v₊` as `ξ → +∞` from linearizing the ODE at `v₊`.
    pub fn right_tail_rate(&self) -> f64 {
        let cfg = &self.cfg;
        cfg.v_plus * (cfg.sigma * cfg.sigma + cfg.gas.dp(cfg.v_plus)) / cfg.sigma
    }

    /// Same at `v_m` as `ξ → -∞`.
    pub fn left_tail_rate(&self) -> f64 {
        let cfg = &self.cfg;
        -cfg.v_m * (cfg.sigma * cfg.sigma + cfg.gas.dp(cfg.v_m)) / cfg.sigma
    }
}

fn end_state(v: f64, u: f64) -> ShockSample {
    ShockSample { v, u, h: u, ..Default::default() }
}

#[inline]
fn profile_g(cfg: &WaveConfig, v: f64) -> f64 {
    let gas = &cfg.gas;
    cfg.sigma * cfg.sigma * (v - cfg.v_m) + gas.p(v) - gas.p(cfg.v_m)
}

/// Builds the profile for `cfg`, normalized by `ṽ^S(0) = (v_m + v₊)/2`.
///
/// Fixed-step RK4 with step `δ_S/50` outward from `ξ = 0` in both directions,
/// stopping once within `tol` of the end state. The search gives up at
/// `|ξ| = 50/δ_S`.
pub fn solve_shock_profile(cfg: &WaveConfig, tol: f64) -> Result<ShockProfile> {
    if cfg.delta_s == 0.0 {
        return Ok(ShockProfile { cfg: *cfg, xi_start: 0.0, step: 0.0, v: vec![cfg.v_plus], dv: vec![0.0] });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("profile tail tolerance must be positive, got {tol}")));
    }
    let n_check = 1000;
    for k in 1..n_check {
        let v = cfg.v_m + (cfg.v_plus - cfg.v_m) * k as f64 / n_check as f64;
        if profile_g(cfg, v) >= 0.0 {
            return Err(Error::Config(format!(
                "profile ODE has no heteroclinic orbit: g({v}) >= 0 inside (v_m, v_plus)"
            )));
        }
    }

    let step = cfg.delta_s / 50.0;
    let budget = 50.0 / cfg.delta_s;
    let max_steps = (budget / step).ceil() as usize;
    let f = |v: f64| -(v / cfg.sigma) * profile_g(cfg, v);
    let rk4 = |v: f64, h: f64| {
        let k1 = f(v);
        let k2 = f(v + 0.5 * h * k1);
        let k3 = f(v + 0.5 * h * k2);
        let k4 = f(v + h * k3);
        v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };

    let v0 = 0.5 * (cfg.v_m + cfg.v_plus);
    let mut right = vec![v0];
    while cfg.v_plus - *right.last().unwrap() >= tol {
        if right.len() > max_steps {
            return Err(Error::Profile(format!("right tail not within {tol} of v_plus by xi = {budget}")));
        }
        let next = rk4(*right.last().unwrap(), step);
        if !(next > cfg.v_m && next <= cfg.v_plus + tol) {
            return Err(Error::Profile(format!("profile left (v_m, v_plus) on the right tail: {next}")));
        }
        right.push(next);
    }
    let mut left = vec![v0];
    while *left.last().unwrap() - cfg.v_m >= tol {
        if left.len() > max_steps {
            return Err(Error::Profile(format!("left tail not within {tol} of v_m by xi = -{budget}")));
        }
        let next = rk4(*left.last().unwrap(), -step);
        if !(next >= cfg.v_m - tol && next < cfg.v_plus) {
            return Err(Error::Profile(format!("profile left (v_m, v_plus) on the left tail: {next}")));
        }
        left.push(next);
    }

    let n_left = left.len() - 1;
    let mut v: Vec<f64> = left.into_iter().rev().collect();
    v.extend_from_slice(&right[1..]);
    let dv = v.iter().map(|&x| f(x)).collect();
    Ok(ShockProfile { cfg: *cfg, xi_start: -(n_left as f64) * step, step, v, dv })
}
