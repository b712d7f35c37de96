//! Navier-Stokes in the shock frame `ξ = x - σt`,
//!
//! ```text
//! v_t = σ v_ξ + u_ξ
//! u_t = σ u_ξ - p(v)_ξ + (u_ξ / v)_ξ
//! ```
//!
//! on a truncated uniform grid, integrated together with the shift `X(t)` by
//! the classical four-stage Runge-Kutta method. The two boundary nodes follow
//! the composite background: their stage derivatives are the exact time
//! derivatives of the background, and after every step they are reset to the
//! background values.

mod run;

pub use run::{run, RunArtifacts, Snapshot};

use crate::error::{Error, Result};
use crate::profiles::Background;
use crate::shift::{shift_constant_m, shift_rhs, ShiftParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub xi_min: f64,
    pub xi_max: f64,
    pub n: usize,
    pub dxi: f64,
}

impl Grid1D {
    pub fn new(xi_min: f64, xi_max: f64, n: usize) -> Result<Self> {
        if !(xi_min < 0.0 && 0.0 < xi_max) || !xi_min.is_finite() || !xi_max.is_finite() {
            return Err(Error::Config(format!("grid must satisfy xi_min < 0 < xi_max, got [{xi_min}, {xi_max}]")));
        }
        if n < 16 {
            return Err(Error::Config(format!("grid needs at least 16 nodes, got {n}")));
        }
        Ok(Self { xi_min, xi_max, n, dxi: (xi_max - xi_min) / (n - 1) as f64 })
    }

    #[inline]
    pub fn xi(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.xi_max
        } else {
            self.xi_min + i as f64 * self.dxi
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.xi(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationKind {
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    V,
    U,
}

/// `amplitude · exp(-((ξ - center)/width)²)` added to one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub kind: PerturbationKind,
    pub target: Target,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn gaussian(target: Target, amplitude: f64, center: f64, width: f64) -> Self {
        Self { kind: PerturbationKind::Gaussian, target, amplitude, center, width }
    }

    #[inline]
    pub fn value(&self, xi: f64) -> f64 {
        match self.kind {
            PerturbationKind::Gaussian => {
                let z = (xi - self.center) / self.width;
                self.amplitude * (-z * z).exp()
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerturbationSpec {
    pub bumps: Vec<Bump>,
}

impl PerturbationSpec {
    pub fn scaled(&self, factor: f64) -> Self {
        Self { bumps: self.bumps.iter().map(|b| Bump { amplitude: b.amplitude * factor, ..*b }).collect() }
    }

    pub fn validate(&self, amplitude_cap: f64) -> Result<()> {
        for (k, b) in self.bumps.iter().enumerate() {
            if !(b.width > 0.0) || !b.width.is_finite() {
                return Err(Error::Config(format!("perturbation.{k}.width must be positive, got {}", b.width)));
            }
            if !(b.amplitude.abs() <= amplitude_cap) {
                return Err(Error::Config(format!(
                    "perturbation.{k}.amplitude {} exceeds the amplitude cap {amplitude_cap}",
                    b.amplitude
                )));
            }
        }
        Ok(())
    }
}

/// Discrete `L²` norm (trapezoid) of a nodal field.
pub fn l2_norm(grid: &Grid1D, f: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, x) in f.iter().enumerate() {
        let w = if i == 0 || i + 1 == grid.n { 0.5 } else { 1.0 };
        acc += w * x * x;
    }
    (acc * grid.dxi).sqrt()
}

/// Central differences inside, one-sided at the two ends.
pub fn central_derivative(dxi: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dxi);
    }
    d[0] = (f[1] - f[0]) / dxi;
    d[n - 1] = (f[n - 1] - f[n - 2]) / dxi;
    d
}

/// Discrete `H¹` norm of a pair of fields: `L²` of values plus `L²` of
/// central-difference derivatives.
pub fn h1_norm_pair(grid: &Grid1D, a: &[f64], b: &[f64]) -> f64 {
    let da = central_derivative(grid.dxi, a);
    let db = central_derivative(grid.dxi, b);
    (l2_norm(grid, a).powi(2) + l2_norm(grid, b).powi(2) + l2_norm(grid, &da).powi(2) + l2_norm(grid, &db).powi(2))
        .sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    /// `H¹` norm of `(v₀ - ṽ(0), u₀ - ũ(0))`
    pub h1_perturbation: f64,
}

/// Composite wave at `t = 0`, `X = 0`, plus the perturbation.
pub fn initial_data(
    grid: &Grid1D,
    bg: &Background,
    pert: &PerturbationSpec,
    amplitude_cap: f64,
) -> Result<InitialData> {
    pert.validate(amplitude_cap)?;
    let mut v = Vec::with_capacity(grid.n);
    let mut u = Vec::with_capacity(grid.n);
    let mut dv = vec![0.0; grid.n];
    let mut du = vec![0.0; grid.n];
    for i in 0..grid.n {
        let xi = grid.xi(i);
        let s = bg.eval(0.0, xi, 0.0);
        for b in &pert.bumps {
            match b.target {
                Target::V => dv[i] += b.value(xi),
                Target::U => du[i] += b.value(xi),
            }
        }
        let vi = s.v + dv[i];
        if !(vi > 0.0) {
            return Err(Error::Config(format!("perturbed initial volume {vi} at xi = {xi} is not positive")));
        }
        v.push(vi);
        u.push(s.u + du[i]);
    }
    let h1_perturbation = h1_norm_pair(grid, &dv, &du);
    Ok(InitialData { v, u, h1_perturbation })
}

/// Interior update of the semi-discrete system: second-order central
/// differences, viscous flux `D⁻(D⁺u / v_face)` with arithmetic face volumes.
///
/// `p` holds `p(v)` at the nodes. The two end entries of `dv` and `du` are not
/// written.
pub fn discrete_ns_operator(sigma: f64, dxi: f64, v: &[f64], u: &[f64], p: &[f64], dv: &mut [f64], du: &mut [f64]) {
    let n = v.len();
    let inv_2h = 0.5 / dxi;
    let inv_h2 = 1.0 / (dxi * dxi);
    let mut flux_left = (u[1] - u[0]) / (0.5 * (v[0] + v[1]));
    for i in 1..n - 1 {
        let flux_right = (u[i + 1] - u[i]) / (0.5 * (v[i] + v[i + 1]));
        let u_xi = (u[i + 1] - u[i - 1]) * inv_2h;
        dv[i] = sigma * (v[i + 1] - v[i - 1]) * inv_2h + u_xi;
        du[i] = sigma * u_xi - (p[i + 1] - p[i - 1]) * inv_2h + (flux_right - flux_left) * inv_h2;
        flux_left = flux_right;
    }
}

/// Fields, time, shift and the accumulated boundary mass flux.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub shift: f64,
    /// `∫₀ᵗ [(σv+u)(ξ_max) - (σv+u)(ξ_min)] ds`, integrated with the same stages.
    pub flux_integral: f64,
}

/// Time derivatives of the whole coupled system at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateRhs {
    pub dv: Vec<f64>,
    pub du: Vec<f64>,
    pub xdot: f64,
    pub dflux: f64,
}

/// Immutable part of a simulation.
#[derive(Debug, Clone)]
pub struct Model {
    pub grid: Grid1D,
    pub bg: Background,
    pub shift: ShiftParams,
}

impl Model {
    pub fn new(grid: Grid1D, bg: Background) -> Result<Self> {
        let shift = shift_constant_m(&bg.cfg)?;
        Ok(Self { grid, bg, shift })
    }

    /// Largest admissible step: `min(dξ/s_max, dξ² min v / 2)` with
    /// `s_max = σ + max λ2(v)`.
    pub fn stable_dt(&self, v: &[f64]) -> f64 {
        let gas = &self.bg.cfg.gas;
        let v_min = v.iter().copied().fold(f64::INFINITY, f64::min);
        // λ2 is decreasing in v
        let s_max = self.bg.cfg.sigma + gas.lambda2(v_min);
        let h = self.grid.dxi;
        (h / s_max).min(h * h * v_min / 2.0)
    }

    fn check_volume(&self, t: f64, v: &[f64]) -> Result<()> {
        for (i, &x) in v.iter().enumerate() {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::BlowUp { t, reason: format!("volume {x} at xi = {}", self.grid.xi(i)) });
            }
        }
        Ok(())
    }

    /// Writes the time derivatives of `(v, u)` into `dv`, `du`; returns
    /// `(Ẋ, boundary flux)`.
    #[allow(clippy::too_many_arguments)]
    pub fn eval_rhs(
        &self,
        t: f64,
        v: &[f64],
        u: &[f64],
        shift: f64,
        p: &mut [f64],
        dv: &mut [f64],
        du: &mut [f64],
    ) -> Result<(f64, f64)> {
        self.check_volume(t, v)?;
        let gas = &self.bg.cfg.gas;
        let sigma = self.bg.cfg.sigma;
        for (pi, &vi) in p.iter_mut().zip(v) {
            *pi = gas.p(vi);
        }
        let xdot = shift_rhs(&self.grid, &self.bg, &self.shift, t, v, shift);
        discrete_ns_operator(sigma, self.grid.dxi, v, u, p, dv, du);
        let n = self.grid.n;
        for i in [0, n - 1] {
            let xi = self.grid.xi(i);
            let r = self.bg.rarefaction_at(t, xi);
            let s = self.bg.profile.eval(xi - shift);
            dv[i] = r.u_x + sigma * r.v_x - xdot * s.v_xi;
            du[i] = -gas.dp(r.v) * r.v_x + sigma * r.u_x - xdot * s.u_xi;
        }
        let dflux = (sigma * v[n - 1] + u[n - 1]) - (sigma * v[0] + u[0]);
        Ok((xdot, dflux))
    }

    /// Allocating wrapper around [`Model::eval_rhs`].
    pub fn rhs(&self, state: &SimState) -> Result<StateRhs> {
        let n = self.grid.n;
        let mut p = vec![0.0; n];
        let mut dv = vec![0.0; n];
        let mut du = vec![0.0; n];
        let (xdot, dflux) = self.eval_rhs(state.t, &state.v, &state.u, state.shift, &mut p, &mut dv, &mut du)?;
        Ok(StateRhs { dv, du, xdot, dflux })
    }

    /// Resets the boundary nodes of `state` to the background.
    pub fn apply_boundary(&self, state: &mut SimState) {
        let n = self.grid.n;
        for i in [0, n - 1] {
            let s = self.bg.eval(state.t, self.grid.xi(i), state.shift);
            state.v[i] = s.v;
            state.u[i] = s.u;
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Scratch {
    p: Vec<f64>,
    kv: [Vec<f64>; 4],
    ku: [Vec<f64>; 4],
    sv: Vec<f64>,
    su: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        let z = || vec![0.0; n];
        Self { p: z(), kv: [z(), z(), z(), z()], ku: [z(), z(), z(), z()], sv: z(), su: z() }
    }
}

/// A model plus its evolving state.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub model: Model,
    pub state: SimState,
    scratch: Scratch,
}

impl Simulation {
    pub fn new(model: Model, v: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        let n = model.grid.n;
        if v.len() != n || u.len() != n {
            return Err(Error::Config(format!("fields must have {n} nodes")));
        }
        let state = SimState { t: 0.0, v, u, shift: 0.0, flux_integral: 0.0 };
        Ok(Self { model, state, scratch: Scratch::new(n) })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.model.grid
    }

    pub fn background(&self) -> &Background {
        &self.model.bg
    }

    pub fn stable_dt(&self) -> f64 {
        self.model.stable_dt(&self.state.v)
    }

    /// One RK4 step of the coupled `(v, u, X)` system.
    pub fn advance(&mut self, dt: f64) -> Result<()> {
        let bound = self.stable_dt();
        if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
            return Err(Error::Step(format!("time step {dt} violates the stability bound {bound}")));
        }
        let model = &self.model;
        let st = &mut self.state;
        let sc = &mut self.scratch;
        let n = model.grid.n;
        let t0 = st.t;
        let stage_t = [t0, t0 + 0.5 * dt, t0 + 0.5 * dt, t0 + dt];
        let stage_c = [0.0, 0.5 * dt, 0.5 * dt, dt];
        let mut xdots = [0.0; 4];
        let mut fluxes = [0.0; 4];
        for k in 0..4 {
            let x_stage = st.shift + if k == 0 { 0.0 } else { stage_c[k] * xdots[k - 1] };
            if k == 0 {
                sc.sv.copy_from_slice(&st.v);
                sc.su.copy_from_slice(&st.u);
            } else {
                let c = stage_c[k];
                let (prev_v, prev_u) = (&sc.kv[k - 1], &sc.ku[k - 1]);
                for i in 0..n {
                    sc.sv[i] = st.v[i] + c * prev_v[i];
                    sc.su[i] = st.u[i] + c * prev_u[i];
                }
            }
            let (kv, ku) = (&mut sc.kv[k], &mut sc.ku[k]);
            let (xd, fl) = model.eval_rhs(stage_t[k], &sc.sv, &sc.su, x_stage, &mut sc.p, kv, ku)?;
            xdots[k] = xd;
            fluxes[k] = fl;
        }
        let w = dt / 6.0;
        for i in 0..n {
            st.v[i] += w * (sc.kv[0][i] + 2.0 * sc.kv[1][i] + 2.0 * sc.kv[2][i] + sc.kv[3][i]);
            st.u[i] += w * (sc.ku[0][i] + 2.0 * sc.ku[1][i] + 2.0 * sc.ku[2][i] + sc.ku[3][i]);
        }
        st.shift += w * (xdots[0] + 2.0 * xdots[1] + 2.0 * xdots[2] + xdots[3]);
        st.flux_integral += w * (fluxes[0] + 2.0 * fluxes[1] + 2.0 * fluxes[2] + fluxes[3]);
        st.t = t0 + dt;
        model.apply_boundary(st);

        let cfg = &model.bg.cfg;
        let (lo, hi) = (cfg.v_minus / 3.0, 3.0 * cfg.v_plus);
        for (i, &x) in st.v.iter().enumerate() {
            if !(x > lo && x < hi) {
                return Err(Error::BlowUp {
                    t: st.t,
                    reason: format!("volume {x} at xi = {} left ({lo}, {hi})", model.grid.xi(i)),
                });
            }
        }
        if !st.u.iter().all(|x| x.is_finite()) || !st.shift.is_finite() {
            return Err(Error::BlowUp { t: st.t, reason: "non-finite velocity or shift".into() });
        }
        Ok(())
    }

    /// Trapezoid mass `Σ v dξ`.
    pub fn mass(&self) -> f64 {
        let g = &self.model.grid;
        let mut acc = 0.0;
        for (i, &x) in self.state.v.iter().enumerate() {
            acc += if i == 0 || i + 1 == g.n { 0.5 * x } else { x };
        }
        acc * g.dxi
    }
}
