//! γ-law thermodynamics for the barotropic system with `p(v) = v^(-γ)`.
//!
//! Viscosity and the pressure constant are normalized to one. Every power of
//! the specific volume is evaluated as `exp(α ln v)`.
//!
//! The unchecked methods on [`GasParams`] are the hot-loop versions used by the
//! solver and assume `v > 0`. The free functions validate their arguments.

use crate::error::{require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    gamma: f64,
}

#[inline]
fn powf_log(v: f64, alpha: f64) -> f64 {
    (alpha * v.ln()).exp()
}

impl GasParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::Config(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn p(&self, v: f64) -> f64 {
        powf_log(v, -self.gamma)
    }

    #[inline]
    pub fn dp(&self, v: f64) -> f64 {
        -self.gamma * powf_log(v, -self.gamma - 1.0)
    }

    #[inline]
    pub fn d2p(&self, v: f64) -> f64 {
        self.gamma * (self.gamma + 1.0) * powf_log(v, -self.gamma - 2.0)
    }

    /// Internal energy `Q(v) = v^(1-γ)/(γ-1)`, so that `Q' = -p`.
    #[inline]
    pub fn q(&self, v: f64) -> f64 {
        powf_log(v, 1.0 - self.gamma) / (self.gamma - 1.0)
    }

    /// Sound speed `√(-p'(v))`, i.e. the second eigenvalue.
    #[inline]
    pub fn sound_speed(&self, v: f64) -> f64 {
        self.gamma.sqrt() * powf_log(v, -0.5 * (self.gamma + 1.0))
    }

    #[inline]
    pub fn lambda1(&self, v: f64) -> f64 {
        -self.sound_speed(v)
    }

    #[inline]
    pub fn lambda2(&self, v: f64) -> f64 {
        self.sound_speed(v)
    }

    /// Antiderivative of `λ1`: `A(v) = (2√γ/(γ-1)) v^(-(γ-1)/2)`.
    #[inline]
    pub fn lambda1_antiderivative(&self, v: f64) -> f64 {
        2.0 * self.gamma.sqrt() / (self.gamma - 1.0) * powf_log(v, -0.5 * (self.gamma - 1.0))
    }

    /// Inverse of `λ1` on `w < 0`: `v = (γ/w²)^(1/(γ+1))`.
    #[inline]
    pub fn lambda1_inverse(&self, w: f64) -> f64 {
        powf_log(self.gamma / (w * w), 1.0 / (self.gamma + 1.0))
    }

    #[inline]
    pub fn relative_p(&self, v: f64, w: f64) -> f64 {
        powf_log(w, -self.gamma) * binomial_remainder(-self.gamma, v / w - 1.0)
    }

    #[inline]
    pub fn relative_q(&self, v: f64, w: f64) -> f64 {
        powf_log(w, 1.0 - self.gamma) / (self.gamma - 1.0) * binomial_remainder(1.0 - self.gamma, v / w - 1.0)
    }
}

/// `(1+x)^α - 1 - αx` without the cancellation of the naive formula.
///
/// Both relative quantities reduce to this after factoring out a power of `w`:
/// `p(v|w) = w^(-γ) R_{-γ}(v/w - 1)` and `Q(v|w) = w^(1-γ)/(γ-1) R_{1-γ}(v/w - 1)`.
pub(crate) fn binomial_remainder(alpha: f64, x: f64) -> f64 {
    if x.abs() < 1e-2 {
        // Σ_{k≥2} C(α,k) x^k
        let mut coeff = alpha * (alpha - 1.0) / 2.0;
        let mut xk = x * x;
        let mut sum = 0.0;
        for k in 2..40 {
            let term = coeff * xk;
            sum += term;
            if term.abs() <= 1e-19 * sum.abs() {
                break;
            }
            coeff *= (alpha - k as f64) / (k as f64 + 1.0);
            xk *= x;
        }
        sum
    } else {
        (alpha * x.ln_1p()).exp_m1() - alpha * x
    }
}

pub fn pressure_derivs(v: f64, g: &GasParams) -> Result<(f64, f64, f64)> {
    require_positive("specific volume", v)?;
    Ok((g.p(v), g.dp(v), g.d2p(v)))
}

pub fn internal_energy_q(v: f64, g: &GasParams) -> Result<f64> {
    require_positive("specific volume", v)?;
    Ok(g.q(v))
}

pub fn eigenvalues(v: f64, g: &GasParams) -> Result<(f64, f64)> {
    require_positive("specific volume", v)?;
    let c = g.sound_speed(v);
    Ok((-c, c))
}

/// 1-Riemann invariant `z1 = u + A(v)` with `A' = λ1`.
pub fn riemann_invariant_z1(v: f64, u: f64, g: &GasParams) -> Result<f64> {
    require_positive("specific volume", v)?;
    Ok(u + g.lambda1_antiderivative(v))
}

/// `p(v|w) = p(v) - p(w) - p'(w)(v - w)`.
pub fn relative_pressure(v: f64, w: f64, g: &GasParams) -> Result<f64> {
    require_positive("v", v)?;
    require_positive("w", w)?;
    Ok(g.relative_p(v, w))
}

/// `Q(v|w) = Q(v) - Q(w) + p(w)(v - w)`.
pub fn relative_q(v: f64, w: f64, g: &GasParams) -> Result<f64> {
    require_positive("v", v)?;
    require_positive("w", w)?;
    Ok(g.relative_q(v, w))
}

/// Relative entropy `|h - h̄|²/2 + Q(v|v̄)` in the effective variables.
pub fn relative_entropy(v: f64, h: f64, v_bar: f64, h_bar: f64, g: &GasParams) -> Result<f64> {
    require_positive("v", v)?;
    require_positive("v_bar", v_bar)?;
    let dh = h - h_bar;
    Ok(0.5 * dh * dh + g.relative_q(v, v_bar))
}
