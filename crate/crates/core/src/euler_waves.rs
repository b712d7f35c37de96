//! Inviscid Riemann-problem algebra for the R1 + S2 composite configuration.

use crate::error::{require_positive, Error, Result};
use crate::thermo::GasParams;

pub const DEFAULT_STRENGTH_CAP: f64 = 0.25;

/// End states, intermediate state and derived wave data of a 1-rarefaction
/// followed by a 2-shock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveConfig {
    pub gas: GasParams,
    pub v_plus: f64,
    pub u_plus: f64,
    pub v_m: f64,
    pub u_m: f64,
    pub v_minus: f64,
    pub u_minus: f64,
    pub sigma: f64,
    /// `|p(v₊) - p(v_m)|`
    pub delta_s: f64,
    /// `|v_m - v₋|`
    pub delta_r: f64,
}

impl WaveConfig {
    /// Builds the configuration from `(γ, v₊, u₊, v_m, v₋)`: `u_m` from the
    /// Rankine-Hugoniot relations, `u₋` from constancy of `z1`.
    ///
    /// Equal volumes give the degenerate single-wave (or trivial) cases.
    pub fn forward(gas: GasParams, v_plus: f64, u_plus: f64, v_m: f64, v_minus: f64) -> Result<Self> {
        require_positive("v_minus", v_minus)?;
        if !(v_minus <= v_m && v_m <= v_plus) || !v_plus.is_finite() || !u_plus.is_finite() {
            return Err(Error::Config(format!(
                "ordering v_minus <= v_m <= v_plus violated (v_minus={v_minus}, v_m={v_m}, v_plus={v_plus})"
            )));
        }
        let sigma = if v_m < v_plus { shock_speed(v_m, v_plus, &gas)? } else { gas.lambda2(v_plus) };
        let u_m = s2_connect(v_plus, u_plus, v_m, &gas)?;
        let u_minus = r1_connect(v_m, u_m, v_minus, &gas)?;
        Ok(Self {
            gas,
            v_plus,
            u_plus,
            v_m,
            u_m,
            v_minus,
            u_minus,
            sigma,
            delta_s: (gas.p(v_plus) - gas.p(v_m)).abs(),
            delta_r: (v_m - v_minus).abs(),
        })
    }

    /// Rejects strengths above `cap`.
    pub fn check_strengths(&self, cap: f64) -> Result<()> {
        if self.delta_s > cap {
            return Err(Error::Config(format!("shock strength {} exceeds cap {cap}", self.delta_s)));
        }
        if self.delta_r > cap {
            return Err(Error::Config(format!("rarefaction strength {} exceeds cap {cap}", self.delta_r)));
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.gas.gamma()
    }

    /// `λ1(v₋)`, left edge speed of the fan.
    pub fn w_minus(&self) -> f64 {
        self.gas.lambda1(self.v_minus)
    }

    /// `λ1(v_m)`, right edge speed of the fan.
    pub fn w_m(&self) -> f64 {
        self.gas.lambda1(self.v_m)
    }

    /// Residuals of both Rankine-Hugoniot equations between `(v_m,u_m)` and `(v₊,u₊)`.
    pub fn rankine_hugoniot_residuals(&self) -> (f64, f64) {
        let g = &self.gas;
        let r1 = -self.sigma * (self.v_plus - self.v_m) - (self.u_plus - self.u_m);
        let r2 = -self.sigma * (self.u_plus - self.u_m) + (g.p(self.v_plus) - g.p(self.v_m));
        (r1, r2)
    }
}

/// Speed of the 2-shock from `v_m` to `v₊`.
pub fn shock_speed(v_m: f64, v_plus: f64, g: &GasParams) -> Result<f64> {
    require_positive("v_m", v_m)?;
    if !(v_m < v_plus) {
        return Err(Error::Config(format!("not a 2-shock: need v_m < v_plus (v_m={v_m}, v_plus={v_plus})")));
    }
    Ok((-(g.p(v_plus) - g.p(v_m)) / (v_plus - v_m)).sqrt())
}

/// Velocity `u_m` on the 2-shock curve through `(v₊, u₊)`.
pub fn s2_connect(v_plus: f64, u_plus: f64, v_m: f64, g: &GasParams) -> Result<f64> {
    require_positive("v_m", v_m)?;
    if v_m > v_plus {
        return Err(Error::Config(format!("S2 connection needs v_m <= v_plus (v_m={v_m}, v_plus={v_plus})")));
    }
    if v_m == v_plus {
        return Ok(u_plus);
    }
    Ok(u_plus + shock_speed(v_m, v_plus, g)? * (v_plus - v_m))
}

/// Velocity `u₋` on the 1-rarefaction curve through `(v_m, u_m)`.
pub fn r1_connect(v_m: f64, u_m: f64, v_minus: f64, g: &GasParams) -> Result<f64> {
    require_positive("v_minus", v_minus)?;
    if v_minus > v_m {
        return Err(Error::Config(format!("R1 connection needs v_minus <= v_m (v_minus={v_minus}, v_m={v_m})")));
    }
    if v_minus == v_m {
        return Ok(u_m);
    }
    Ok(u_m + g.lambda1_antiderivative(v_m) - g.lambda1_antiderivative(v_minus))
}

/// Self-similar 1-rarefaction fan `(v^r, u^r)(x/t)` of `cfg`.
pub fn exact_rarefaction(t: f64, x: f64, cfg: &WaveConfig) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("rarefaction fan needs t > 0, got {t}")));
    }
    Ok(exact_rarefaction_unchecked(x / t, cfg))
}

#[inline]
pub(crate) fn exact_rarefaction_unchecked(ratio: f64, cfg: &WaveConfig) -> (f64, f64) {
    let (w_minus, w_m) = (cfg.w_minus(), cfg.w_m());
    if ratio <= w_minus {
        return (cfg.v_minus, cfg.u_minus);
    }
    if ratio >= w_m {
        return (cfg.v_m, cfg.u_m);
    }
    let g = &cfg.gas;
    let v = g.lambda1_inverse(ratio);
    let u = cfg.u_m + g.lambda1_antiderivative(cfg.v_m) - g.lambda1_antiderivative(v);
    (v, u)
}

/// Solves for the intermediate state joining `(v₋,u₋)` (by R1) and `(v₊,u₊)`
/// (by S2).
///
/// The mismatch `u_S2(v) - u_R1(v)` is strictly decreasing on `[v₋, v₊]`, so the
/// root is found by bisection to a volume tolerance of 1e-12.
pub fn riemann_intermediate(v_minus: f64, u_minus: f64, v_plus: f64, u_plus: f64, g: &GasParams) -> Result<(f64, f64)> {
    require_positive("v_minus", v_minus)?;
    require_positive("v_plus", v_plus)?;
    if v_minus > v_plus {
        return Err(Error::Config(format!("no R1+S2 configuration: v_minus={v_minus} exceeds v_plus={v_plus}")));
    }
    let a_minus = g.lambda1_antiderivative(v_minus);
    let u_s2 = |v: f64| if v >= v_plus { u_plus } else { u_plus + ((g.p(v) - g.p(v_plus)) * (v_plus - v)).sqrt() };
    let u_r1 = |v: f64| u_minus + a_minus - g.lambda1_antiderivative(v);
    let mismatch = |v: f64| u_s2(v) - u_r1(v);

    let f_lo = mismatch(v_minus);
    let f_hi = mismatch(v_plus);
    let scale = 1e-13 * (1.0 + u_plus.abs() + u_minus.abs());
    if f_lo.abs() <= scale {
        return Ok((v_minus, u_r1(v_minus)));
    }
    if f_hi.abs() <= scale {
        return Ok((v_plus, u_plus));
    }
    if f_lo < 0.0 {
        return Err(Error::Config(
            "left state is not on a 1-rarefaction curve from any S2 state (R1 curve fails; needs an S1 wave)".into(),
        ));
    }
    if f_hi > 0.0 {
        return Err(Error::Config(
            "right state is not reachable by a 2-shock (S2 curve fails; needs an R2 wave)".into(),
        ));
    }
    let (mut lo, mut hi) = (v_minus, v_plus);
    while hi - lo > 1e-12 * v_plus.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mismatch(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v_m = 0.5 * (lo + hi);
    Ok((v_m, u_s2(v_m)))
}
