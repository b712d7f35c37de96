//! Smooth approximate 1-rarefaction built on the Burgers equation with
//! `tanh` initial data.

use crate::euler_waves::WaveConfig;

/// Beyond this `|x₀|`, `tanh(x₀)` rounds to `±1` in double precision.
const TANH_SATURATION: f64 = 19.5;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RarefactionSample {
    pub v: f64,
    pub u: f64,
    pub v_x: f64,
    pub u_x: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ApproxRarefaction {
    cfg: WaveConfig,
    w_minus: f64,
    w_m: f64,
    mid: f64,
    half_jump: f64,
}

impl ApproxRarefaction {
    pub fn new(cfg: &WaveConfig) -> Self {
        let (w_minus, w_m) = (cfg.w_minus(), cfg.w_m());
        Self { cfg: *cfg, w_minus, w_m, mid: 0.5 * (w_m + w_minus), half_jump: 0.5 * (w_m - w_minus) }
    }

    pub fn config(&self) -> &WaveConfig {
        &self.cfg
    }

    pub fn w_minus(&self) -> f64 {
        self.w_minus
    }

    pub fn w_m(&self) -> f64 {
        self.w_m
    }

    /// `w₀(x) = (w_m+w₋)/2 + ((w_m-w₋)/2) tanh x`
    pub fn w0(&self, x: f64) -> f64 {
        self.mid + self.half_jump * x.tanh()
    }

    pub fn w0_prime(&self, x: f64) -> f64 {
        let c = x.cosh();
        self.half_jump / (c * c)
    }

    /// Burgers solution `w(s, x)` and `w_x(s, x)` for `s >= 0` by the method of
    /// characteristics: solve `x = x₀ + w₀(x₀) s` for the foot `x₀`.
    ///
    /// The foot is bracketed by `[x - w_m s, x - w₋ s]`, bisected to 1e-7 and
    /// polished by three Newton steps.
    pub fn burgers_w(&self, s: f64, x: f64) -> (f64, f64) {
        debug_assert!(s >= 0.0, "Burgers time must be non-negative");
        if self.half_jump == 0.0 {
            return (self.w_m, 0.0);
        }
        let mut lo = x - self.w_m * s;
        let mut hi = x - self.w_minus * s;
        if lo >= TANH_SATURATION {
            return (self.w_m, self.slope_at_foot(s, lo));
        }
        if hi <= -TANH_SATURATION {
            return (self.w_minus, self.slope_at_foot(s, hi));
        }
        let residual = |x0: f64| x0 + self.w0(x0) * s - x;
        while hi - lo > 1e-7 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x0 = 0.5 * (lo + hi);
        for _ in 0..3 {
            x0 -= residual(x0) / (1.0 + s * self.w0_prime(x0));
        }
        (self.w0(x0), self.slope_at_foot(s, x0))
    }

    #[inline]
    fn slope_at_foot(&self, s: f64, x0: f64) -> f64 {
        let d = self.w0_prime(x0);
        d / (1.0 + s * d)
    }

    /// `(ṽ^R, ũ^R, ṽ^R_x, ũ^R_x)(t, x)` with `λ1(ṽ^R) = w(1+t, x)` and `z1`
    /// constant.
    ///
    /// Differentiating `λ1(ṽ^R) = w` and `ũ^R = const - A(ṽ^R)` gives
    /// `ũ^R_x = 2 ṽ^R w_x/(γ+1)` and `ṽ^R_x = (ṽ^R)^((γ+1)/2) ũ^R_x / √γ`.
    pub fn eval(&self, t: f64, x: f64) -> RarefactionSample {
        let (w, w_x) = self.burgers_w(1.0 + t, x);
        self.sample_from_w(w, w_x)
    }

    pub(crate) fn sample_from_w(&self, w: f64, w_x: f64) -> RarefactionSample {
        let cfg = &self.cfg;
        let gas = &cfg.gas;
        let gamma = gas.gamma();
        let (v, u) = if w == self.w_m {
            (cfg.v_m, cfg.u_m)
        } else if w == self.w_minus {
            (cfg.v_minus, cfg.u_minus)
        } else {
            let v = gas.lambda1_inverse(w);
            (v, cfg.u_m + gas.lambda1_antiderivative(cfg.v_m) - gas.lambda1_antiderivative(v))
        };
        let u_x = 2.0 * v * w_x / (gamma + 1.0);
        let v_x = (0.5 * (gamma + 1.0) * v.ln()).exp() * u_x / gamma.sqrt();
        RarefactionSample { v, u, v_x, u_x }
    }
}

/// `(ṽ^R, ũ^R, ṽ^R_x, ũ^R_x)` at time `t >= 0`.
pub fn approx_rarefaction_eval(t: f64, x: f64, rare: &ApproxRarefaction) -> RarefactionSample {
    rare.eval(t, x)
}
