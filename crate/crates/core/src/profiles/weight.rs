//! Monotone weight `a(ξ) = 1 + (λ/δ_S)(p(v_m) - p(ṽ^S(ξ)))` attached to the shock layer.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::profiles::shock::{ShockProfile, ShockSample};

#[derive(Debug, Clone)]
pub struct WeightFunction {
    lambda: f64,
    delta_s: f64,
    p_m: f64,
    profile: Arc<ShockProfile>,
}

impl WeightFunction {
    /// Requires `δ_S < λ`. A degenerate (zero-strength) shock gives `a ≡ 1`.
    pub fn new(lambda: f64, profile: Arc<ShockProfile>) -> Result<Self> {
        let cfg = *profile.config();
        if !(lambda > cfg.delta_s) || !lambda.is_finite() {
            return Err(Error::Config(format!(
                "weight window violated: need delta_S < lambda (lambda = {lambda}, delta_S = {})",
                cfg.delta_s
            )));
        }
        Ok(Self { lambda, delta_s: cfg.delta_s, p_m: cfg.gas.p(cfg.v_m), profile })
    }

    /// `λ = √δ_S`, the largest amplitude in the admissible window.
    pub fn default_lambda(delta_s: f64) -> f64 {
        delta_s.sqrt()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn profile(&self) -> &ShockProfile {
        &self.profile
    }

    /// `(a, a')` from an already evaluated profile sample.
    #[inline]
    pub fn from_sample(&self, s: &ShockSample) -> (f64, f64) {
        if self.delta_s == 0.0 {
            return (1.0, 0.0);
        }
        let gas = &self.profile.config().gas;
        let k = self.lambda / self.delta_s;
        (1.0 + k * (self.p_m - gas.p(s.v)), -k * s.p_xi)
    }
}

pub fn weight_a(xi: f64, weight: &WeightFunction) -> (f64, f64) {
    weight.from_sample(&weight.profile.eval(xi))
}
