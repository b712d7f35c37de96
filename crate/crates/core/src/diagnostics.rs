//! Monitored functionals of a run: perturbation norms, the weighted relative
//! entropy in `(v, h)`, the good terms, the wave-interaction error terms and
//! two exact identities used as sanity checks.
//!
//! Everything is evaluated on the solver grid with trapezoid quadrature and
//! the solver's central-difference stencil.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::euler_waves::exact_rarefaction_unchecked;
use crate::profiles::{Background, CompositeSample};
use crate::shift::{shift_rhs, trapezoid_weight};
use crate::solver::{central_derivative, h1_norm_pair, l2_norm, Grid1D, Model, SimState};

/// One row of `diagnostics.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub x: f64,
    pub xdot: f64,
    pub x_over_t: f64,
    pub perturb_l2_v: f64,
    pub perturb_l2_u: f64,
    pub perturb_h1: f64,
    pub sup_v: f64,
    pub sup_u: f64,
    pub sup_exact: f64,
    pub went: f64,
    pub g_s: f64,
    pub g_r: f64,
    pub g1: f64,
    pub d: f64,
    pub d1: f64,
    pub d2: f64,
    pub f1_l2: f64,
    pub f2_l2: f64,
    pub f3_l2: f64,
    pub mass_residual: f64,
}

impl DiagnosticRecord {
    pub const COLUMNS: [&'static str; 21] = [
        "t",
        "X",
        "Xdot",
        "X_over_t",
        "perturb_L2_v",
        "perturb_L2_u",
        "perturb_H1",
        "sup_v",
        "sup_u",
        "sup_exact",
        "went",
        "G_S",
        "G_R",
        "G1",
        "D",
        "D1",
        "D2",
        "F1_L2",
        "F2_L2",
        "F3_L2",
        "mass_residual",
    ];

    pub fn values(&self) -> [f64; 21] {
        [
            self.t,
            self.x,
            self.xdot,
            self.x_over_t,
            self.perturb_l2_v,
            self.perturb_l2_u,
            self.perturb_h1,
            self.sup_v,
            self.sup_u,
            self.sup_exact,
            self.went,
            self.g_s,
            self.g_r,
            self.g1,
            self.d,
            self.d1,
            self.d2,
            self.f1_l2,
            self.f2_l2,
            self.f3_l2,
            self.mass_residual,
        ]
    }

    pub fn csv_header() -> String {
        Self::COLUMNS.join(",")
    }

    pub fn csv_row(&self) -> String {
        format_row(&self.values())
    }
}

/// Comma-joined values with 17 significant digits.
pub fn format_row(values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 24);
    for (k, x) in values.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        write!(s, "{x:.16e}").unwrap();
    }
    s
}

/// Full CSV text (header plus one line per record).
pub fn records_to_csv(records: &[DiagnosticRecord]) -> String {
    let mut s = DiagnosticRecord::csv_header();
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// `h = u - (ln v)_ξ` with the solver's difference stencil.
pub fn effective_velocity(v: &[f64], u: &[f64], grid: &Grid1D) -> Vec<f64> {
    let ln_v: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let d = central_derivative(grid.dxi, &ln_v);
    u.iter().zip(&d).map(|(a, b)| a - b).collect()
}

/// Background samples at every grid node.
pub fn background_samples(grid: &Grid1D, bg: &Background, t: f64, shift: f64) -> Vec<CompositeSample> {
    (0..grid.n).map(|i| bg.eval(t, grid.xi(i), shift)).collect()
}

fn trapezoid(grid: &Grid1D, f: impl Fn(usize) -> f64) -> f64 {
    (0..grid.n).map(|i| trapezoid_weight(grid, i) * f(i)).sum()
}

/// `∫ a(ξ-X) (|h - h̃|²/2 + Q(v|ṽ)) dξ`.
pub fn weighted_relative_entropy(model: &Model, state: &SimState) -> f64 {
    let bgs = background_samples(&model.grid, &model.bg, state.t, state.shift);
    went_with(model, state, &bgs)
}

fn went_with(model: &Model, state: &SimState, bgs: &[CompositeSample]) -> f64 {
    let gas = &model.bg.cfg.gas;
    let h = effective_velocity(&state.v, &state.u, &model.grid);
    trapezoid(&model.grid, |i| {
        let b = &bgs[i];
        let (a, _) = model.bg.weight_shifted(&b.shock);
        let dh = h[i] - b.h;
        a * (0.5 * dh * dh + gas.relative_q(state.v[i], b.v))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StabilityFunctionals {
    /// `∫ |ṽ^S_ξ(ξ-X)| |v - ṽ|²`
    pub g_s: f64,
    /// `∫ |ũ^R_ξ| |v - ṽ|²`
    pub g_r: f64,
    /// `(λ/δ_S) ∫ |ṽ^S_ξ(ξ-X)| |h - h̃ - (p(v) - p(ṽ))/σ|²`
    pub g1: f64,
    /// `∫ |∂_ξ(p(v) - p(ṽ))|²`
    pub d: f64,
    /// `∫ |∂_ξ(u - ũ)|²`
    pub d1: f64,
    /// `∫ |∂²_ξ(u - ũ)|²`
    pub d2: f64,
}

pub fn stability_functionals(model: &Model, state: &SimState) -> StabilityFunctionals {
    let bgs = background_samples(&model.grid, &model.bg, state.t, state.shift);
    functionals_with(model, state, &bgs)
}

fn functionals_with(model: &Model, state: &SimState, bgs: &[CompositeSample]) -> StabilityFunctionals {
    let grid = &model.grid;
    let cfg = &model.bg.cfg;
    let gas = &cfg.gas;
    let n = grid.n;
    let h = effective_velocity(&state.v, &state.u, grid);
    let dp: Vec<f64> = (0..n).map(|i| gas.p(state.v[i]) - gas.p(bgs[i].v)).collect();
    let du: Vec<f64> = (0..n).map(|i| state.u[i] - bgs[i].u).collect();
    let dp_xi = central_derivative(grid.dxi, &dp);
    let du_xi = central_derivative(grid.dxi, &du);
    let mut du_xixi = vec![0.0; n];
    for i in 1..n - 1 {
        du_xixi[i] = (du[i + 1] - 2.0 * du[i] + du[i - 1]) / (grid.dxi * grid.dxi);
    }
    let g1_scale = if cfg.delta_s > 0.0 { model.bg.weight.lambda() / cfg.delta_s } else { 0.0 };
    let sq = |x: f64| x * x;
    StabilityFunctionals {
        g_s: trapezoid(grid, |i| bgs[i].shock.v_xi.abs() * sq(state.v[i] - bgs[i].v)),
        g_r: trapezoid(grid, |i| bgs[i].rare.u_x.abs() * sq(state.v[i] - bgs[i].v)),
        g1: g1_scale * trapezoid(grid, |i| bgs[i].shock.v_xi.abs() * sq(h[i] - bgs[i].h - dp[i] / cfg.sigma)),
        d: trapezoid(grid, |i| sq(dp_xi[i])),
        d1: trapezoid(grid, |i| sq(du_xi[i])),
        d2: trapezoid(grid, |i| sq(du_xixi[i])),
    }
}

/// Wave-interaction residuals of the superposition and their `L²` norms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WaveErrorTerms {
    /// `(ũ^S_ξ/ṽ^S)_ξ - (ũ_ξ/ṽ)_ξ`
    pub f1: Vec<f64>,
    /// `[p(ṽ) - p(ṽ^R) - p(ṽ^S)]_ξ`
    pub f2: Vec<f64>,
    /// `(ln ṽ^S - ln ṽ)_ξξ`
    pub f3: Vec<f64>,
    pub f1_l2: f64,
    pub f2_l2: f64,
    pub f3_l2: f64,
}

pub fn wave_error_terms(model: &Model, t: f64, shift: f64) -> WaveErrorTerms {
    let bgs = background_samples(&model.grid, &model.bg, t, shift);
    error_terms_with(model, &bgs)
}

fn error_terms_with(model: &Model, bgs: &[CompositeSample]) -> WaveErrorTerms {
    let grid = &model.grid;
    let gas = &model.bg.cfg.gas;
    let viscous: Vec<f64> = bgs.iter().map(|b| b.shock.u_xi / b.shock.v - b.u_xi / b.v).collect();
    let log_slope: Vec<f64> = bgs.iter().map(|b| b.shock.v_xi / b.shock.v - b.v_xi / b.v).collect();
    let f1 = central_derivative(grid.dxi, &viscous);
    let f3 = central_derivative(grid.dxi, &log_slope);
    let f2: Vec<f64> = bgs
        .iter()
        .map(|b| gas.dp(b.v) * b.v_xi - gas.dp(b.rare.v) * b.rare.v_x - gas.dp(b.shock.v) * b.shock.v_xi)
        .collect();
    WaveErrorTerms { f1_l2: l2_norm(grid, &f1), f2_l2: l2_norm(grid, &f2), f3_l2: l2_norm(grid, &f3), f1, f2, f3 }
}

/// Norms of the products of shock and rarefaction factors that bound the
/// interaction terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InteractionNorms {
    pub t: f64,
    /// `‖ṽ^S_ξ (ṽ^R - v_m)‖_{L¹}`
    pub shock_slope_rare_l1: f64,
    /// `‖ṽ^S_ξ (ṽ^R - v_m)‖_{L²}`
    pub shock_slope_rare_l2: f64,
    /// `‖ṽ^R_ξ ṽ^S_ξ‖_{L¹}`
    pub slopes_l1: f64,
    /// `‖ṽ^R_ξ ṽ^S_ξ‖_{L²}`
    pub slopes_l2: f64,
    /// `‖ṽ^R_ξ (ṽ^S - v_m)‖_{L²}`
    pub rare_slope_shock_l2: f64,
}

impl InteractionNorms {
    pub const COLUMNS: [&'static str; 6] =
        ["t", "shock_slope_rare_L1", "shock_slope_rare_L2", "slopes_L1", "slopes_L2", "rare_slope_shock_L2"];

    pub fn values(&self) -> [f64; 6] {
        [
            self.t,
            self.shock_slope_rare_l1,
            self.shock_slope_rare_l2,
            self.slopes_l1,
            self.slopes_l2,
            self.rare_slope_shock_l2,
        ]
    }

    /// The five norms without `t`.
    pub fn norms(&self) -> [f64; 5] {
        let v = self.values();
        [v[1], v[2], v[3], v[4], v[5]]
    }
}

pub fn wave_interaction_norms(grid: &Grid1D, bg: &Background, t: f64, shift: f64) -> InteractionNorms {
    let v_m = bg.cfg.v_m;
    let (mut a1, mut a2, mut b1, mut b2, mut c2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..grid.n {
        let w = trapezoid_weight(grid, i);
        let s = bg.eval(t, grid.xi(i), shift);
        let a = (s.shock.v_xi * (s.rare.v - v_m)).abs();
        let b = (s.rare.v_x * s.shock.v_xi).abs();
        let c = (s.rare.v_x * (s.shock.v - v_m)).abs();
        a1 += w * a;
        a2 += w * a * a;
        b1 += w * b;
        b2 += w * b * b;
        c2 += w * c * c;
    }
    InteractionNorms {
        t,
        shock_slope_rare_l1: a1,
        shock_slope_rare_l2: a2.sqrt(),
        slopes_l1: b1,
        slopes_l2: b2.sqrt(),
        rare_slope_shock_l2: c2.sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// `∫₀¹ |f - f̄|² ≤ (1/2) ∫₀¹ y(1-y) |f'|²` for samples of `f` on a uniform
/// grid of `[0, 1]`.
pub fn poincare_check(f: &[f64]) -> Result<PoincareCheck> {
    let n = f.len();
    if n < 3 {
        return Err(Error::Domain(format!("poincare check needs at least 3 samples, got {n}")));
    }
    let h = 1.0 / (n - 1) as f64;
    let trap = |g: &dyn Fn(usize) -> f64| {
        let mut acc = 0.5 * (g(0) + g(n - 1));
        for i in 1..n - 1 {
            acc += g(i);
        }
        acc * h
    };
    let mean = trap(&|i| f[i]);
    let lhs = trap(&|i| (f[i] - mean).powi(2));
    let df = central_derivative(h, f);
    let rhs = 0.5
        * trap(&|i| {
            let y = i as f64 * h;
            y * (1.0 - y) * df[i] * df[i]
        });
    Ok(PoincareCheck { lhs, rhs, margin: rhs - lhs })
}

/// Residual of `-(σ/2)z² + wz = -(σ/2)(z - w/σ)² + w²/(2σ)`.
pub fn quadratic_identity_residual(z: f64, w: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let lhs = -0.5 * sigma * z * z + w * z;
    let c = z - w / sigma;
    let rhs = -0.5 * sigma * c * c + w * w / (2.0 * sigma);
    Ok((lhs - rhs).abs())
}

fn sup_exact_at(grid: &Grid1D, bg: &Background, t: f64, state: &SimState) -> f64 {
    let cfg = &bg.cfg;
    let mut sup = 0.0f64;
    for i in 0..grid.n {
        let xi = grid.xi(i);
        let x = xi + cfg.sigma * t;
        // t = 0 uses the t → 0+ limit of the fan, the Riemann jump at x = 0
        let ratio = if t > 0.0 {
            x / t
        } else if x < 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        let (vr, ur) = exact_rarefaction_unchecked(ratio, cfg);
        let s = bg.profile.eval(xi - state.shift);
        let v = vr + s.v - cfg.v_m;
        let u = ur + s.u - cfg.u_m;
        sup = sup.max((state.v[i] - v).abs()).max((state.u[i] - u).abs());
    }
    sup
}

/// `sup_ξ |(v, u) - (exact fan + shifted shock - middle state)|` at `x = ξ + σt`.
pub fn sup_distance_to_exact(model: &Model, state: &SimState) -> Result<f64> {
    if !(state.t > 0.0) {
        return Err(Error::Domain(format!("exact fan needs t > 0, got {}", state.t)));
    }
    Ok(sup_exact_at(&model.grid, &model.bg, state.t, state))
}

/// Full diagnostic row for `state`; `mass0` is the initial discrete mass.
pub fn record(model: &Model, state: &SimState, mass0: f64) -> DiagnosticRecord {
    let grid = &model.grid;
    let bgs = background_samples(grid, &model.bg, state.t, state.shift);
    let dv: Vec<f64> = (0..grid.n).map(|i| state.v[i] - bgs[i].v).collect();
    let du: Vec<f64> = (0..grid.n).map(|i| state.u[i] - bgs[i].u).collect();
    let sup = |f: &[f64]| f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let xdot = shift_rhs(grid, &model.bg, &model.shift, state.t, &state.v, state.shift);
    let f = functionals_with(model, state, &bgs);
    let e = error_terms_with(model, &bgs);
    let mass = trapezoid(grid, |i| state.v[i]);
    let (x_over_t, mass_residual) = if state.t > 0.0 {
        (state.shift / state.t, (mass - mass0 - state.flux_integral).abs() / state.t)
    } else {
        (0.0, 0.0)
    };
    DiagnosticRecord {
        t: state.t,
        x: state.shift,
        xdot,
        x_over_t,
        perturb_l2_v: l2_norm(grid, &dv),
        perturb_l2_u: l2_norm(grid, &du),
        perturb_h1: h1_norm_pair(grid, &dv, &du),
        sup_v: sup(&dv),
        sup_u: sup(&du),
        sup_exact: sup_exact_at(grid, &model.bg, state.t, state),
        went: went_with(model, state, &bgs),
        g_s: f.g_s,
        g_r: f.g_r,
        g1: f.g1,
        d: f.d,
        d1: f.d1,
        d2: f.d2,
        f1_l2: e.f1_l2,
        f2_l2: e.f2_l2,
        f3_l2: e.f3_l2,
        mass_residual,
    }
}

/// Distance of a perturbed state from an unperturbed reference state on the
/// same grid, i.e. the part of the solution caused by the perturbation alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceDeviation {
    pub sup_v: f64,
    pub sup_u: f64,
    /// `∫ a(ξ-X) [½|h - h_ref|² + Q(v|v_ref)]`, with `X` the shift of `state`
    pub went: f64,
}

pub fn deviation_from_reference(model: &Model, state: &SimState, reference: &SimState) -> Result<ReferenceDeviation> {
    let n = model.grid.n;
    if state.v.len() != n || reference.v.len() != n {
        return Err(Error::Domain("reference state lives on a different grid".into()));
    }
    let gas = &model.bg.cfg.gas;
    let h = effective_velocity(&state.v, &state.u, &model.grid);
    let h_ref = effective_velocity(&reference.v, &reference.u, &model.grid);
    let mut sup_v = 0.0f64;
    let mut sup_u = 0.0f64;
    for i in 0..n {
        sup_v = sup_v.max((state.v[i] - reference.v[i]).abs());
        sup_u = sup_u.max((state.u[i] - reference.u[i]).abs());
    }
    let went = trapezoid(&model.grid, |i| {
        let shock = model.bg.profile.eval(model.grid.xi(i) - state.shift);
        let (a, _) = model.bg.weight_shifted(&shock);
        let dh = h[i] - h_ref[i];
        a * (0.5 * dh * dh + gas.relative_q(state.v[i], reference.v[i]))
    });
    Ok(ReferenceDeviation { sup_v, sup_u, went })
}

/// Least-squares slope of `ln y` against `t` over the strictly positive
/// entries; `None` with fewer than two such points.
pub fn log_linear_slope(t: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = t.iter().zip(y).filter(|(_, &y)| y > 0.0).map(|(&t, &y)| (t, y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mt, my) = pts.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t / n, b + y / n));
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, y) in &pts {
        sxy += (t - mt) * (y - my);
        sxx += (t - mt) * (t - mt);
    }
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler_waves::WaveConfig;
    use crate::profiles::DEFAULT_TAIL_TOL;
    use crate::solver::Simulation;
    use crate::thermo::GasParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn model(v_m: f64, v_minus: f64, xi: (f64, f64), n: usize) -> Model {
        let cfg = WaveConfig::forward(GasParams::new(5.0 / 3.0).unwrap(), 1.0, 0.0, v_m, v_minus).unwrap();
        let lambda = if cfg.delta_s > 0.0 { cfg.delta_s.sqrt() } else { 0.1 };
        let bg = Background::new(&cfg, lambda, DEFAULT_TAIL_TOL).unwrap();
        Model::new(Grid1D::new(xi.0, xi.1, n).unwrap(), bg).unwrap()
    }

    fn background_state(m: &Model, t: f64, shift: f64) -> SimState {
        let bgs = background_samples(&m.grid, &m.bg, t, shift);
        SimState {
            t,
            v: bgs.iter().map(|b| b.v).collect(),
            u: bgs.iter().map(|b| b.u).collect(),
            shift,
            flux_integral: 0.0,
        }
    }

    #[test]
    fn effective_velocity_cases() {
        let grid = Grid1D::new(-5.0, 5.0, 101).unwrap();
        let u: Vec<f64> = (0..101).map(|i| (i as f64 * 0.1).sin()).collect();
        assert_eq!(effective_velocity(&vec![2.0; 101], &u, &grid), u);
        let alpha = 0.3;
        let v: Vec<f64> = (0..101).map(|i| (alpha * grid.xi(i)).exp()).collect();
        for h in effective_velocity(&v, &vec![0.0; 101], &grid) {
            assert!((h + alpha).abs() < 1e-12);
        }
        // u -> h -> u
        let v: Vec<f64> = (0..101).map(|i| 1.0 + 0.2 * (grid.xi(i)).cos()).collect();
        let h = effective_velocity(&v, &u, &grid);
        let back = effective_velocity(&v, &vec![0.0; 101], &grid);
        for i in 0..101 {
            assert!((h[i] - back[i] - u[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_vanishes_when_h_matches_background() {
        let m = model(0.9, 0.8, (-300.0, 200.0), 2001);
        let mut s = background_state(&m, 0.0, 0.0);
        let bgs = background_samples(&m.grid, &m.bg, 0.0, 0.0);
        let ln_v: Vec<f64> = s.v.iter().map(|x| x.ln()).collect();
        let d = central_derivative(m.grid.dxi, &ln_v);
        s.u = (0..m.grid.n).map(|i| bgs[i].h + d[i]).collect();
        assert!(weighted_relative_entropy(&m, &s).abs() < 1e-14);
    }

    #[test]
    fn entropy_of_far_u_bump_matches_gaussian_mass() {
        // pure rarefaction background: a ≡ 1 and the bump sits in the flat region
        let m = model(1.0, 0.95, (-200.0, 200.0), 8001);
        let base = {
            let mut s = background_state(&m, 0.0, 0.0);
            let bgs = background_samples(&m.grid, &m.bg, 0.0, 0.0);
            let ln_v: Vec<f64> = s.v.iter().map(|x| x.ln()).collect();
            let d = central_derivative(m.grid.dxi, &ln_v);
            s.u = (0..m.grid.n).map(|i| bgs[i].h + d[i]).collect();
            s
        };
        let (eps, w, c) = (1e-3, 4.0, 100.0);
        let mut s = base.clone();
        for i in 0..m.grid.n {
            s.u[i] += eps * (-((m.grid.xi(i) - c) / w).powi(2)).exp();
        }
        let expected = eps * eps * w * (std::f64::consts::PI / 2.0).sqrt() / 2.0;
        let got = weighted_relative_entropy(&m, &s);
        assert!((got - expected).abs() < 1e-6 * expected, "{got} vs {expected}");
    }

    #[test]
    fn entropy_is_quadratic_in_small_amplitudes() {
        let m = model(0.9, 0.8, (-300.0, 200.0), 4001);
        let base = {
            let mut s = background_state(&m, 0.0, 0.0);
            let bgs = background_samples(&m.grid, &m.bg, 0.0, 0.0);
            let ln_v: Vec<f64> = s.v.iter().map(|x| x.ln()).collect();
            let d = central_derivative(m.grid.dxi, &ln_v);
            s.u = (0..m.grid.n).map(|i| bgs[i].h + d[i]).collect();
            s
        };
        let bumped = |eps: f64| {
            let mut s = base.clone();
            for i in 0..m.grid.n {
                let g = (-(m.grid.xi(i) / 5.0).powi(2)).exp();
                s.v[i] += eps * g;
                s.u[i] += eps * g;
            }
            weighted_relative_entropy(&m, &s)
        };
        let ratio = bumped(2e-3) / bumped(1e-3);
        assert!((ratio - 4.0).abs() < 0.04, "{ratio}");
    }

    #[test]
    fn functionals_vanish_on_the_background() {
        let m = model(0.9, 0.8, (-300.0, 200.0), 2001);
        let s = background_state(&m, 0.0, 0.0);
        let f = stability_functionals(&m, &s);
        assert_eq!((f.g_s, f.g_r, f.d, f.d1, f.d2), (0.0, 0.0, 0.0, 0.0, 0.0));
        // the v, u fields do not carry the h mismatch, so G1 only sees it
        assert!(f.g1 >= 0.0);
    }

    #[test]
    fn shock_weight_localizes() {
        let m = model(0.9, 0.8, (-400.0, 200.0), 6001);
        // the fan is centred near ξ = -1.6 at t = 0; move the shock far away
        let mut s = background_state(&m, 0.0, 150.0);
        for i in 0..m.grid.n {
            s.v[i] += 1e-3 * (-((m.grid.xi(i) + 1.6) / 3.0).powi(2)).exp();
        }
        let f = stability_functionals(&m, &s);
        assert!(f.g_r > 0.0);
        assert!(f.g_s < 1e-8 * f.g_r, "{} vs {}", f.g_s, f.g_r);
    }

    #[test]
    fn pressure_dissipation_of_a_sine_window() {
        // trivial background: p' is constant to first order in ε
        let m = model(1.0, 1.0, (-50.0, 50.0), 20001);
        let (eps, k) = (1e-4, 0.5);
        let mut s = background_state(&m, 0.0, 0.0);
        let (lo, hi) = (-4.0 * std::f64::consts::PI / k, 4.0 * std::f64::consts::PI / k);
        for i in 0..m.grid.n {
            let xi = m.grid.xi(i);
            if (lo..=hi).contains(&xi) {
                s.v[i] += eps * (k * xi).sin();
            }
        }
        let d = stability_functionals(&m, &s).d;
        let dp = m.bg.cfg.gas.dp(1.0);
        let expected = eps * eps * k * k * dp * dp * (hi - lo) / 2.0;
        assert!((d - expected).abs() < 1e-3 * expected, "{d} vs {expected}");
    }

    #[test]
    fn error_terms_degenerate_cases() {
        let m = model(0.9, 0.9, (-100.0, 100.0), 1001);
        let e = wave_error_terms(&m, 0.0, 0.0);
        assert!(e.f1_l2 < 1e-12 && e.f2_l2 < 1e-12 && e.f3_l2 < 1e-12);
        let m = model(1.0, 0.9, (-100.0, 100.0), 1001);
        let e = wave_error_terms(&m, 2.0, 0.0);
        assert!(e.f2.iter().all(|x| x.abs() < 1e-15));
        let bgs = background_samples(&m.grid, &m.bg, 2.0, 0.0);
        let r: Vec<f64> = bgs.iter().map(|b| -b.rare.u_x / b.rare.v).collect();
        let expected = central_derivative(m.grid.dxi, &r);
        for (a, b) in e.f1.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(e.f1_l2 > 0.0);
    }

    #[test]
    fn interaction_norms_baseline_and_decay() {
        let m = model(0.9, 0.8, (-600.0, 200.0), 8001);
        let n0 = wave_interaction_norms(&m.grid, &m.bg, 0.0, 0.0);
        for x in n0.norms() {
            assert!(x > 0.0 && x.is_finite());
        }
        let n100 = wave_interaction_norms(&m.grid, &m.bg, 100.0, 0.0);
        for (a, b) in n100.norms().iter().zip(n0.norms()) {
            assert!(*a < b);
        }
        let m = model(0.9, 0.9, (-100.0, 100.0), 1001);
        let z = wave_interaction_norms(&m.grid, &m.bg, 0.0, 0.0);
        assert_eq!(z.norms(), [0.0; 5]);
    }

    #[test]
    fn poincare_cases() {
        assert!(poincare_check(&[1.0, 2.0]).is_err());
        let c = poincare_check(&[3.0; 50]).unwrap();
        assert!(c.lhs.abs() < 1e-28 && c.rhs == 0.0 && c.margin.abs() < 1e-28);
        let n = 10_000;
        let ys: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let c = poincare_check(&ys).unwrap();
        assert!((c.lhs - 1.0 / 12.0).abs() < 1e-8 && (c.rhs - 1.0 / 12.0).abs() < 1e-8);
        assert!(c.margin.abs() < 1e-8);
        let sq: Vec<f64> = ys.iter().map(|y| y * y).collect();
        let c = poincare_check(&sq).unwrap();
        assert!((c.lhs - 4.0 / 45.0).abs() < 1e-7 && (c.rhs - 0.1).abs() < 1e-7 && c.margin > 0.0);
    }

    #[test]
    fn quadratic_identity() {
        assert!(quadratic_identity_residual(1.0, 1.0, 0.0).is_err());
        assert_eq!(quadratic_identity_residual(0.0, 0.0, 1.0).unwrap(), 0.0);
        let sigma = 1.3;
        assert_eq!(quadratic_identity_residual(1.0, sigma, sigma).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let z: f64 = rng.gen_range(-10.0..10.0);
            let w: f64 = rng.gen_range(-10.0..10.0);
            let s: f64 = rng.gen_range(0.5..2.0);
            assert!(quadratic_identity_residual(z, w, s).unwrap() <= 1e-12 * (1.0 + z * z + w * w));
        }
    }

    #[test]
    fn exact_distance_tracks_the_smoothing_gap() {
        let m = model(0.9, 0.8, (-300.0, 200.0), 5001);
        let s = background_state(&m, 0.0, 0.0);
        assert!(sup_distance_to_exact(&m, &s).is_err());
        let mut gaps = Vec::new();
        for t in [1.0, 10.0, 50.0] {
            let s = background_state(&m, t, 0.0);
            let d = sup_distance_to_exact(&m, &s).unwrap();
            // the background differs from the exact composite only in the fan
            let mut gap = 0.0f64;
            for i in 0..m.grid.n {
                let xi = m.grid.xi(i);
                let r = m.bg.rarefaction_at(t, xi);
                let (ve, ue) = crate::euler_waves::exact_rarefaction(t, xi + m.bg.cfg.sigma * t, &m.bg.cfg).unwrap();
                gap = gap.max((r.v - ve).abs()).max((r.u - ue).abs());
            }
            assert!((d - gap).abs() < 1e-12);
            gaps.push(d);
        }
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    }

    #[test]
    fn record_of_unperturbed_start() {
        let m = model(0.9, 0.8, (-300.0, 200.0), 2001);
        let s = background_state(&m, 0.0, 0.0);
        let sim = Simulation::new(m, s.v, s.u).unwrap();
        let r = record(&sim.model, &sim.state, sim.mass());
        assert_eq!((r.xdot, r.sup_v, r.sup_u, r.perturb_h1, r.mass_residual), (0.0, 0.0, 0.0, 0.0, 0.0));
        assert!(r.went >= 0.0 && r.sup_exact > 0.0);
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), DiagnosticRecord::COLUMNS.len());
        let back: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(back, r.values().to_vec());
    }

    #[test]
    fn reference_deviation_sees_only_the_difference() {
        let m = model(0.9, 0.8, (-300.0, 200.0), 2001);
        let reference = background_state(&m, 0.0, 0.0);
        let d = deviation_from_reference(&m, &reference, &reference).unwrap();
        assert_eq!((d.sup_v, d.sup_u, d.went), (0.0, 0.0, 0.0));
        let mut s = reference.clone();
        for i in 0..m.grid.n {
            s.u[i] += 0.01 * (-(m.grid.xi(i) / 5.0).powi(2)).exp();
        }
        let d = deviation_from_reference(&m, &s, &reference).unwrap();
        assert!((d.sup_u - 0.01).abs() < 1e-6 && d.sup_v == 0.0);
        // only h moves: went = ½∫a|δu|²
        let half_sq = 0.5 * 1e-4 * 5.0 * (std::f64::consts::PI / 2.0).sqrt();
        assert!(d.went > 0.99 * half_sq && d.went < 1.01 * half_sq * 2.0);
        let mut short = reference.clone();
        short.v.pop();
        assert!(deviation_from_reference(&m, &short, &reference).is_err());
    }

    #[test]
    fn slope_fit() {
        let t = [0.0f64, 1.0, 2.0, 3.0];
        let y: Vec<f64> = t.iter().map(|t| 2.0 * (-0.5 * t).exp()).collect();
        assert!((log_linear_slope(&t, &y).unwrap() + 0.5).abs() < 1e-12);
        assert!(log_linear_slope(&t, &[1.0, 0.0, 0.0, 0.0]).is_none());
    }
}
