//! Property checks bundled behind the `verify` subcommand.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::diagnostics::{poincare_check, quadratic_identity_residual};
use crate::euler_waves::{exact_rarefaction, WaveConfig};
use crate::profiles::{solve_shock_profile, ApproxRarefaction, ShockProfile, WeightFunction, DEFAULT_TAIL_TOL};
use crate::shift::shift_constant_m;
use crate::thermo::GasParams;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
    pub note: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, measured: f64, bound: f64) -> Self {
        Self { name, passed, measured, bound, note: String::new() }
    }

    fn failed(name: &'static str, note: String) -> Self {
        Self { name, passed: false, measured: f64::NAN, bound: f64::NAN, note }
    }

    /// `name,status,measured,bound[,note]`
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("{},{status},{:.6e},{:.6e}", self.name, self.measured, self.bound);
        if !self.note.is_empty() {
            s.push(',');
            s.push_str(&self.note.replace(',', ";"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        self.checks.iter().map(|c| c.line() + "\n").collect()
    }
}

/// Names of the checks, in report order.
pub const CHECK_NAMES: [&str; 15] = [
    "quadratic_identity",
    "shift_gain_consistency",
    "rankine_hugoniot",
    "poincare_linear_equality",
    "poincare_random_sine",
    "relative_pressure_asymptotics",
    "relative_energy_asymptotics",
    "weight_window",
    "weight_total_variation",
    "profile_monotonicity",
    "profile_endpoints",
    "profile_tail_rate",
    "burgers_monotone",
    "burgers_slope_bound",
    "rarefaction_gap",
];

struct Ctx {
    cfg: RunConfig,
    waves: Result<WaveConfig, String>,
    profile: Result<Arc<ShockProfile>, String>,
}

/// Runs every registered check. Never fails as a whole; problems become
/// failed lines.
pub fn verify_suite(config: &RunConfig) -> VerifyReport {
    verify_selected(config, &CHECK_NAMES)
}

/// Runs only the named checks, in the order given; unknown names are
/// reported as failed checks.
pub fn verify_selected(config: &RunConfig, names: &[&str]) -> VerifyReport {
    let waves = GasParams::new(config.gamma)
        .and_then(|g| WaveConfig::forward(g, config.v_plus, config.u_plus, config.v_m, config.v_minus))
        .map_err(|e| e.to_string());
    let profile = match &waves {
        Ok(w) => solve_shock_profile(w, DEFAULT_TAIL_TOL).map(Arc::new).map_err(|e| e.to_string()),
        Err(e) => Err(e.clone()),
    };
    let ctx = Ctx { cfg: config.clone(), waves, profile };
    let checks: [fn(&Ctx) -> CheckResult; 15] = [
        quadratic_identity,
        shift_gain,
        rankine_hugoniot,
        poincare_linear,
        poincare_random,
        relative_pressure,
        relative_energy,
        weight_window,
        weight_total_variation,
        profile_monotonicity,
        profile_endpoints,
        profile_tail_rate,
        burgers_monotone,
        burgers_slope_bound,
        rarefaction_gap_check,
    ];
    let run = |name: &str| match CHECK_NAMES.iter().position(|n| *n == name) {
        Some(k) => checks[k](&ctx),
        None => CheckResult::failed("unknown", format!("unknown check {name}")),
    };
    VerifyReport { checks: names.iter().map(|n| run(n)).collect() }
}

macro_rules! need {
    ($name:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(msg) => return CheckResult::failed($name, msg.clone()),
        }
    };
}

fn quadratic_identity(ctx: &Ctx) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let z: f64 = rng.gen_range(-10.0..10.0);
        let w: f64 = rng.gen_range(-10.0..10.0);
        let s: f64 = rng.gen_range(0.5..2.0);
        let r = quadratic_identity_residual(z, w, s).unwrap_or(f64::INFINITY);
        worst = worst.max(r / (1.0 + z * z + w * w));
    }
    CheckResult::new("quadratic_identity", worst < 1e-12, worst, 1e-12)
}

fn shift_gain(ctx: &Ctx) -> CheckResult {
    let w = need!("shift_gain_consistency", &ctx.waves);
    match shift_constant_m(w) {
        Ok(p) => {
            let d = (p.m - p.m_from_alpha()).abs();
            CheckResult::new("shift_gain_consistency", d < 1e-13, d, 1e-13)
        }
        Err(e) => CheckResult::failed("shift_gain_consistency", e.to_string()),
    }
}

fn rankine_hugoniot(ctx: &Ctx) -> CheckResult {
    let mut worst = 0.0f64;
    let mut configs = vec![];
    if let Ok(w) = &ctx.waves {
        configs.push(*w);
    }
    for gamma in [1.4, 5.0 / 3.0, 2.0] {
        for v_m in [0.95, 0.9, 0.8] {
            if let Ok(w) = WaveConfig::forward(GasParams::new(gamma).unwrap(), 1.0, 0.0, v_m, v_m) {
                configs.push(w);
            }
        }
    }
    for w in configs.iter().filter(|w| w.v_m < w.v_plus) {
        let (a, b) = w.rankine_hugoniot_residuals();
        worst = worst.max(a.abs()).max(b.abs());
    }
    CheckResult::new("rankine_hugoniot", worst < 1e-12, worst, 1e-12)
}

fn poincare_linear(_: &Ctx) -> CheckResult {
    let n = 10_000;
    let f: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let c = poincare_check(&f).unwrap();
    let err = (c.lhs - 1.0 / 12.0).abs().max((c.rhs - 1.0 / 12.0).abs());
    CheckResult::new("poincare_linear_equality", err < 1e-8, err, 1e-8)
}

/// Random sine series `Σ_{k=1}^{10} a_k sin(kπy)` with `|a_k| ≤ 1`.
pub fn random_sine_samples(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let amps: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (0..n)
        .map(|i| {
            let y = i as f64 / (n - 1) as f64;
            amps.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * std::f64::consts::PI * y).sin()).sum()
        })
        .collect()
}

fn poincare_random(ctx: &Ctx) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed.wrapping_add(1));
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let f = random_sine_samples(&mut rng, 4096);
        worst = worst.min(poincare_check(&f).unwrap().margin);
    }
    CheckResult::new("poincare_random_sine", worst >= -1e-8, worst, -1e-8)
}

fn asymptotic_ratio_error(f: impl Fn(&GasParams, f64, f64) -> f64, limit: impl Fn(&GasParams, f64) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for gamma in [1.4, 5.0 / 3.0, 2.0] {
        let g = GasParams::new(gamma).unwrap();
        for w in [0.8, 1.0, 1.2] {
            for v in [w - 1e-3, w + 1e-3] {
                let dp = g.p(v) - g.p(w);
                let ratio = f(&g, v, w) / (dp * dp);
                worst = worst.max((ratio / limit(&g, w) - 1.0).abs());
            }
        }
    }
    worst
}

fn relative_pressure(_: &Ctx) -> CheckResult {
    let e = asymptotic_ratio_error(|g, v, w| g.relative_p(v, w), |g, w| (g.gamma() + 1.0) / (2.0 * g.gamma() * g.p(w)));
    CheckResult::new("relative_pressure_asymptotics", e < 0.01, e, 0.01)
}

fn relative_energy(_: &Ctx) -> CheckResult {
    let e = asymptotic_ratio_error(
        |g, v, w| g.relative_q(v, w),
        |g, w| g.p(w).powf(-1.0 / g.gamma() - 1.0) / (2.0 * g.gamma()),
    );
    CheckResult::new("relative_energy_asymptotics", e < 0.01, e, 0.01)
}

fn lambda(ctx: &Ctx, w: &WaveConfig) -> f64 {
    ctx.cfg.lambda(w)
}

fn weight_window(ctx: &Ctx) -> CheckResult {
    let w = need!("weight_window", &ctx.waves);
    let l = lambda(ctx, w);
    let mut c = CheckResult::new("weight_window", l > w.delta_s, l, w.delta_s);
    if !c.passed {
        c.note = format!(
            "weight window violated: the weight strength lambda = {l} must exceed the shock strength delta_S = {}",
            w.delta_s
        );
    }
    c
}

fn weight_total_variation(ctx: &Ctx) -> CheckResult {
    let name = "weight_total_variation";
    let w = need!(name, &ctx.waves);
    let profile = need!(name, &ctx.profile);
    if profile.is_degenerate() {
        return CheckResult::new(name, true, 0.0, 0.0);
    }
    let weight = match WeightFunction::new(lambda(ctx, w), Arc::clone(profile)) {
        Ok(x) => x,
        Err(e) => return CheckResult::failed(name, e.to_string()),
    };
    let (lo, hi) = profile.xi_range();
    let n = 200_000;
    let h = (hi - lo) / n as f64;
    let mut tv = 0.0;
    for i in 0..=n {
        let c = if i == 0 || i == n { 0.5 } else { 1.0 };
        tv += c * weight.from_sample(&profile.eval(lo + i as f64 * h)).1.abs() * h;
    }
    let err = (tv - weight.lambda()).abs() / weight.lambda();
    CheckResult::new(name, err < 1e-6, err, 1e-6)
}

fn profiles_for_check(ctx: &Ctx) -> Result<Vec<Arc<ShockProfile>>, String> {
    let mut out = vec![ctx.profile.clone()?];
    let g = GasParams::new(ctx.cfg.gamma).map_err(|e| e.to_string())?;
    for v_m in [0.95, 0.9, 0.8] {
        let w = WaveConfig::forward(g, 1.0, 0.0, v_m, v_m).map_err(|e| e.to_string())?;
        out.push(Arc::new(solve_shock_profile(&w, DEFAULT_TAIL_TOL).map_err(|e| e.to_string())?));
    }
    Ok(out.into_iter().filter(|p| !p.is_degenerate()).collect())
}

fn profile_monotonicity(ctx: &Ctx) -> CheckResult {
    let name = "profile_monotonicity";
    let profiles = profiles_for_check(ctx);
    let profiles = need!(name, &profiles);
    // smallest ṽ^S_ξ and smallest -ũ^S_ξ over every node
    let mut worst = f64::INFINITY;
    for p in profiles.iter() {
        for i in 1..p.len() - 1 {
            let s = p.eval(p.xi_at(i));
            worst = worst.min(s.v_xi).min(-s.u_xi);
        }
        for pair in p.v_samples().windows(2) {
            if pair[1] <= pair[0] {
                worst = worst.min(pair[1] - pair[0]);
            }
        }
    }
    CheckResult::new(name, worst > 0.0, worst, 0.0)
}

fn profile_endpoints(ctx: &Ctx) -> CheckResult {
    let name = "profile_endpoints";
    let profiles = profiles_for_check(ctx);
    let profiles = need!(name, &profiles);
    let mut worst = 0.0f64;
    for p in profiles.iter() {
        let c = p.config();
        let v = p.v_samples();
        worst = worst.max((v[0] - c.v_m).abs()).max((v[v.len() - 1] - c.v_plus).abs());
    }
    CheckResult::new(name, worst < 1e-10, worst, 1e-10)
}

/// Fitted right-tail decay rate of `ṽ^S - v₊` divided by the linearized rate.
pub fn tail_rate_ratio(p: &ShockProfile) -> f64 {
    let c = p.config();
    let (_, hi) = p.xi_range();
    let rate = p.right_tail_rate().abs();
    // fit over the last ten decay lengths, where the tail is in its linear regime
    let a = hi - 10.0 / rate;
    let b = hi - 1.0 / rate;
    let ya = (c.v_plus - p.eval(a).v).ln();
    let yb = (c.v_plus - p.eval(b).v).ln();
    ((yb - ya) / (b - a)).abs() / rate
}

fn profile_tail_rate(ctx: &Ctx) -> CheckResult {
    let name = "profile_tail_rate";
    let profiles = profiles_for_check(ctx);
    let profiles = need!(name, &profiles);
    // largest factor by which a fitted slope departs from the linearized one
    let worst = profiles
        .iter()
        .map(|p| {
            let r = tail_rate_ratio(p);
            r.max(1.0 / r)
        })
        .fold(1.0f64, f64::max);
    CheckResult::new(name, worst < 2.0, worst, 2.0)
}

fn burgers_monotone(ctx: &Ctx) -> CheckResult {
    let w = need!("burgers_monotone", &ctx.waves);
    let rare = ApproxRarefaction::new(w);
    if rare.w_m() == rare.w_minus() {
        return CheckResult::new("burgers_monotone", true, 0.0, 0.0);
    }
    let mut min_slope = f64::INFINITY;
    for s in [1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 200.0] {
        let (lo, hi) = (rare.w_minus() * s - 15.0, rare.w_m() * s + 15.0);
        for k in 0..=4000 {
            let x = lo + (hi - lo) * k as f64 / 4000.0;
            min_slope = min_slope.min(rare.burgers_w(s, x).1);
        }
    }
    CheckResult::new("burgers_monotone", min_slope > 0.0, min_slope, 0.0)
}

/// Largest `sup_x w_x(s) / min((w_m - w₋)/2, 1/s)` over `s ∈ [1, 200]`.
pub fn burgers_slope_ratio(rare: &ApproxRarefaction) -> f64 {
    let d = 0.5 * (rare.w_m() - rare.w_minus());
    let mut worst = 0.0f64;
    for k in 0..=199 {
        let s = 1.0 + k as f64;
        let (lo, hi) = (rare.w_minus() * s - 15.0, rare.w_m() * s + 15.0);
        let sup = (0..=4000).map(|j| rare.burgers_w(s, lo + (hi - lo) * j as f64 / 4000.0).1).fold(0.0f64, f64::max);
        worst = worst.max(sup / d.min(1.0 / s));
    }
    worst
}

fn burgers_slope_bound(ctx: &Ctx) -> CheckResult {
    let w = need!("burgers_slope_bound", &ctx.waves);
    let rare = ApproxRarefaction::new(w);
    if rare.w_m() == rare.w_minus() {
        return CheckResult::new("burgers_slope_bound", true, 0.0, 1.0 + 1e-6);
    }
    let r = burgers_slope_ratio(&rare);
    CheckResult::new("burgers_slope_bound", r <= 1.0 + 1e-6, r, 1.0 + 1e-6)
}

/// `sup_x |(ṽ^R, ũ^R)(t, x) - (v^r, u^r)(x/t)|`, sampled densely across the fan.
pub fn rarefaction_gap(rare: &ApproxRarefaction, t: f64) -> f64 {
    let cfg = rare.config();
    let s = 1.0 + t;
    let (lo, hi) = (rare.w_minus() * s - 30.0, rare.w_m() * s + 30.0);
    let n = 20_000;
    let mut sup = 0.0f64;
    for k in 0..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let r = rare.eval(t, x);
        let (v, u) = exact_rarefaction(t, x, cfg).unwrap();
        sup = sup.max((r.v - v).abs()).max((r.u - u).abs());
    }
    sup
}

fn rarefaction_gap_check(ctx: &Ctx) -> CheckResult {
    let w = need!("rarefaction_gap", &ctx.waves);
    let rare = ApproxRarefaction::new(w);
    let gaps: Vec<f64> = [1.0, 10.0, 50.0, 100.0, 200.0].iter().map(|&t| rarefaction_gap(&rare, t)).collect();
    let decreasing = gaps.windows(2).all(|p| p[1] <= p[0]);
    let last = *gaps.last().unwrap();
    let bound = 0.1 * w.delta_r;
    let mut c = CheckResult::new("rarefaction_gap", decreasing && (last < bound || w.delta_r == 0.0), last, bound);
    if !decreasing {
        c.note = "gap not decreasing in t".into();
    }
    c
}
