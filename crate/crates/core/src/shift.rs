//! Shift ODE for the shock location.
//!
//! ```text
//! Ẋ = -(M/δ_S) [ ∫ (a/σ) ∂_ξ h̃^S (p(v) - p(ṽ)) dξ - ∫ a ∂_ξ p(ṽ^S) (v - ṽ) dξ ]
//! ```
//!
//! with the weight and profile factors evaluated at `ξ - X` and `ṽ = ṽ_{-X}` the
//! shifted composite wave. Both integrals are trapezoid sums on the solver grid.
//! The profile factors vanish identically outside the tabulated profile range,
//! so only that window of the grid is visited.

use crate::error::{Error, Result};
use crate::euler_waves::WaveConfig;
use crate::profiles::Background;
use crate::solver::Grid1D;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftParams {
    pub m: f64,
    pub delta_s: f64,
    /// `√(-p'(v_m))`
    pub sigma_m: f64,
    /// `(γ+1)/(2γ σ_m p(v_m))`
    pub alpha_m: f64,
}

impl ShiftParams {
    /// The second closed form of the gain, `(5/4) σ_m⁴ α_m`.
    pub fn m_from_alpha(&self) -> f64 {
        1.25 * self.sigma_m.powi(4) * self.alpha_m
    }
}

pub fn shift_constant_m(cfg: &WaveConfig) -> Result<ShiftParams> {
    let gas = &cfg.gas;
    let gamma = gas.gamma();
    let p_m = gas.p(cfg.v_m);
    let sigma_m = gas.sound_speed(cfg.v_m);
    let alpha_m = (gamma + 1.0) / (2.0 * gamma * sigma_m * p_m);
    let m = 5.0 * (gamma + 1.0) * sigma_m.powi(3) / (8.0 * gamma * p_m);
    let params = ShiftParams { m, delta_s: cfg.delta_s, sigma_m, alpha_m };
    let other = params.m_from_alpha();
    if (m - other).abs() > 1e-13 * m.abs().max(1.0) {
        return Err(Error::Internal(format!("shift gain closed forms disagree: {m} vs {other}")));
    }
    Ok(params)
}

/// Trapezoid weight of node `i` on `grid`.
#[inline]
pub(crate) fn trapezoid_weight(grid: &Grid1D, i: usize) -> f64 {
    if i == 0 || i + 1 == grid.n {
        0.5 * grid.dxi
    } else {
        grid.dxi
    }
}

/// Grid indices whose shifted coordinate `ξ_i - X` falls inside the tabulated
/// profile; empty for a degenerate shock.
pub(crate) fn shock_window(grid: &Grid1D, bg: &Background, shift: f64) -> std::ops::Range<usize> {
    if bg.profile.is_degenerate() {
        return 0..0;
    }
    let (lo, hi) = bg.profile.xi_range();
    let first = ((lo + shift - grid.xi_min) / grid.dxi).floor();
    let last = ((hi + shift - grid.xi_min) / grid.dxi).ceil();
    let clamp = |x: f64| x.max(0.0).min(grid.n as f64) as usize;
    clamp(first)..clamp(last + 1.0)
}

/// `Ẋ` for the volume field `v` at time `t` and shift `X`.
pub fn shift_rhs(grid: &Grid1D, bg: &Background, params: &ShiftParams, t: f64, v: &[f64], shift: f64) -> f64 {
    if params.delta_s == 0.0 {
        return 0.0;
    }
    let gas = &bg.cfg.gas;
    let sigma = bg.cfg.sigma;
    let mut first = 0.0;
    let mut second = 0.0;
    for i in shock_window(grid, bg, shift) {
        let xi = grid.xi(i);
        let bgs = bg.eval(t, xi, shift);
        let (a, _) = bg.weight_shifted(&bgs.shock);
        let w = trapezoid_weight(grid, i);
        first += w * a / sigma * bgs.shock.h_xi * (gas.p(v[i]) - gas.p(bgs.v));
        second += w * a * bgs.shock.p_xi * (v[i] - bgs.v);
    }
    -(params.m / params.delta_s) * (first - second)
}

/// Upper bound on `|∂Ẋ/∂X|` at fixed fields,
/// `M (1+λ) [ sup|p'(v)v_ξ - p'(ṽ)ṽ^R_ξ| / σ² + sup|v_ξ - ṽ^R_ξ| ]`,
/// using `∫|∂_ξ p(ṽ^S)| = δ_S` and `a < 1+λ`.
pub fn shift_lipschitz_bound(
    grid: &Grid1D,
    bg: &Background,
    params: &ShiftParams,
    t: f64,
    v: &[f64],
    shift: f64,
) -> f64 {
    if params.delta_s == 0.0 {
        return 0.0;
    }
    let gas = &bg.cfg.gas;
    let sigma = bg.cfg.sigma;
    let mut sup_p = 0.0f64;
    let mut sup_v = 0.0f64;
    for i in 1..grid.n - 1 {
        let v_xi = (v[i + 1] - v[i - 1]) / (2.0 * grid.dxi);
        let bgs = bg.eval(t, grid.xi(i), shift);
        sup_p = sup_p.max((gas.dp(v[i]) * v_xi - gas.dp(bgs.v) * bgs.rare.v_x).abs());
        sup_v = sup_v.max((v_xi - bgs.rare.v_x).abs());
    }
    params.m * (1.0 + bg.weight.lambda()) * (sup_p / (sigma * sigma) + sup_v)
}
