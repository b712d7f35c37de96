//! Flat `key = value` run configuration.
//!
//! ```text
//! # baseline
//! gamma = 1.6666666666666667
//! v_m = 0.9
//! perturbation.0.kind = gaussian
//! perturbation.0.target = v
//! snapshot_times = 0, 50, 100
//! sweep.n_cells = 512, 1024, 2048
//! ```
//!
//! Unknown keys, unparsable values and range violations are errors naming the
//! key. Perturbation indices must be contiguous from 0; giving any
//! `perturbation.*` key replaces the default pair of bumps.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::euler_waves::{WaveConfig, DEFAULT_STRENGTH_CAP};
use crate::profiles::{Background, WeightFunction, DEFAULT_TAIL_TOL};
use crate::solver::{Bump, Grid1D, PerturbationKind, PerturbationSpec, Target};
use crate::thermo::GasParams;

/// Defaults and one-line descriptions of every scalar key, for `--help`.
pub const KEY_HELP: &[(&str, &str, &str)] = &[
    ("gamma", "5/3", "adiabatic exponent, > 1"),
    ("v_plus", "1", "right specific volume"),
    ("u_plus", "0", "right velocity"),
    ("v_m", "0.9", "intermediate volume, v_minus <= v_m <= v_plus"),
    ("v_minus", "0.8", "left volume"),
    ("lambda_weight", "sqrt(delta_S)", "weight strength, must exceed delta_S"),
    ("xi_min", "-40/delta_S + (lambda1(v_minus) - sigma) t_end", "left end of the shock-frame domain"),
    ("xi_max", "40/delta_S", "right end of the shock-frame domain"),
    ("n_cells", "4096", "grid nodes, >= 16"),
    ("cfl", "0.4", "fraction of the stable step, in (0, 1]"),
    ("t_end", "100", "final time, >= 0"),
    ("output_interval", "1", "time between diagnostic rows, > 0"),
    ("snapshot_times", "(none)", "comma-separated field snapshot times"),
    ("seed", "0", "seed for randomized verification checks"),
    ("strength_cap", "0.25", "upper bound on delta_S and delta_R"),
    ("amplitude_cap", "0.1", "upper bound on |perturbation amplitude|"),
    ("perturbation.N.kind", "gaussian", "bump shape"),
    ("perturbation.N.target", "v", "perturbed field, v or u"),
    ("perturbation.N.amplitude", "0.01", "bump height"),
    ("perturbation.N.center", "0", "bump centre in the shock frame"),
    ("perturbation.N.width", "5", "bump width, > 0"),
    ("sweep.v_m", "(v_m)", "list of intermediate volumes to sweep"),
    ("sweep.v_minus", "(v_minus)", "list of left volumes to sweep"),
    ("sweep.amplitude", "(1)", "list of factors applied to all perturbation amplitudes"),
    ("sweep.n_cells", "(n_cells)", "list of grid sizes to sweep"),
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepGrid {
    pub v_m: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub n_cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gamma: f64,
    pub v_plus: f64,
    pub u_plus: f64,
    pub v_m: f64,
    pub v_minus: f64,
    pub lambda_weight: Option<f64>,
    pub xi_min: Option<f64>,
    pub xi_max: Option<f64>,
    pub n_cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub output_interval: f64,
    pub snapshot_times: Vec<f64>,
    pub perturbation: PerturbationSpec,
    pub seed: u64,
    pub strength_cap: f64,
    pub amplitude_cap: f64,
    pub sweep: SweepGrid,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma: 5.0 / 3.0,
            v_plus: 1.0,
            u_plus: 0.0,
            v_m: 0.9,
            v_minus: 0.8,
            lambda_weight: None,
            xi_min: None,
            xi_max: None,
            n_cells: 4096,
            cfl: 0.4,
            t_end: 100.0,
            output_interval: 1.0,
            snapshot_times: Vec::new(),
            perturbation: PerturbationSpec {
                bumps: vec![Bump::gaussian(Target::V, 0.01, 0.0, 5.0), Bump::gaussian(Target::U, 0.01, 0.0, 5.0)],
            },
            seed: 0,
            strength_cap: DEFAULT_STRENGTH_CAP,
            amplitude_cap: 0.1,
            sweep: SweepGrid::default(),
        }
    }
}

/// Domain half-length used when there is no shock layer to scale by.
const FALLBACK_HALF_LENGTH: f64 = 200.0;

impl RunConfig {
    pub fn wave_config(&self) -> Result<WaveConfig> {
        let gas = GasParams::new(self.gamma)?;
        let cfg = WaveConfig::forward(gas, self.v_plus, self.u_plus, self.v_m, self.v_minus)?;
        cfg.check_strengths(self.strength_cap)?;
        Ok(cfg)
    }

    pub fn lambda(&self, cfg: &WaveConfig) -> f64 {
        self.lambda_weight.unwrap_or_else(|| {
            if cfg.delta_s > 0.0 {
                WeightFunction::default_lambda(cfg.delta_s)
            } else {
                1.0
            }
        })
    }

    pub fn background(&self) -> Result<Background> {
        let cfg = self.wave_config()?;
        Background::new(&cfg, self.lambda(&cfg), DEFAULT_TAIL_TOL)
    }

    /// Grid with the configured or default bounds. The default left end makes
    /// room for the rarefaction fan, whose tail moves at `λ1(v₋) - σ` in the
    /// shock frame.
    pub fn grid(&self, cfg: &WaveConfig) -> Result<Grid1D> {
        let half = if cfg.delta_s > 0.0 { 40.0 / cfg.delta_s } else { FALLBACK_HALF_LENGTH };
        let drift = (cfg.gas.lambda1(cfg.v_minus) - cfg.sigma) * self.t_end;
        let xi_min = self.xi_min.unwrap_or(-half + drift);
        let xi_max = self.xi_max.unwrap_or(half);
        Grid1D::new(xi_min, xi_max, self.n_cells)
    }

    /// Output times `k · output_interval` up to `t_end`, merged with the
    /// snapshot times, sorted and deduplicated.
    pub fn event_times(&self) -> Vec<f64> {
        let mut ts = Vec::new();
        let mut k = 0u64;
        loop {
            let t = k as f64 * self.output_interval;
            if t > self.t_end * (1.0 + 1e-12) {
                break;
            }
            ts.push(t.min(self.t_end));
            k += 1;
        }
        if ts.last().is_some_and(|&t| t < self.t_end) {
            ts.push(self.t_end);
        }
        ts.extend(self.snapshot_times.iter().copied().filter(|&t| t <= self.t_end));
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        ts
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) {
            return Err(Error::Config(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        for (k, x) in [("v_plus", self.v_plus), ("v_m", self.v_m), ("v_minus", self.v_minus)] {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::Config(format!("{k} must be positive, got {x}")));
            }
        }
        if !(self.v_minus <= self.v_m && self.v_m <= self.v_plus) {
            return Err(Error::Config(format!(
                "ordering v_minus < v_m < v_plus violated (v_minus = {}, v_m = {}, v_plus = {})",
                self.v_minus, self.v_m, self.v_plus
            )));
        }
        if !self.u_plus.is_finite() {
            return Err(Error::Config("u_plus must be finite".into()));
        }
        if self.n_cells < 16 {
            return Err(Error::Config(format!("n_cells must be at least 16, got {}", self.n_cells)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        if !(self.output_interval > 0.0) {
            return Err(Error::Config(format!("output_interval must be positive, got {}", self.output_interval)));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0)) {
            return Err(Error::Config(format!("snapshot_times must be non-negative, got {t}")));
        }
        if !(self.strength_cap > 0.0) || !(self.amplitude_cap > 0.0) {
            return Err(Error::Config("strength_cap and amplitude_cap must be positive".into()));
        }
        if let Some(l) = self.lambda_weight {
            if !(l > 0.0) {
                return Err(Error::Config(format!("lambda_weight must be positive, got {l}")));
            }
        }
        self.perturbation.validate(self.amplitude_cap)?;
        if self.sweep.n_cells.iter().any(|&n| n < 16) {
            return Err(Error::Config("sweep.n_cells entries must be at least 16".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let mut pert = BTreeMap::new();
        self.set_inner(key, value, &mut pert)?;
        if !pert.is_empty() {
            for (idx, fields) in pert {
                while self.perturbation.bumps.len() <= idx {
                    self.perturbation.bumps.push(default_bump());
                }
                fields.apply(&mut self.perturbation.bumps[idx]);
            }
        }
        Ok(())
    }

    fn set_inner(&mut self, key: &str, value: &str, pert: &mut BTreeMap<usize, BumpFields>) -> Result<()> {
        match key {
            "gamma" => self.gamma = parse_f64(key, value)?,
            "v_plus" => self.v_plus = parse_f64(key, value)?,
            "u_plus" => self.u_plus = parse_f64(key, value)?,
            "v_m" => self.v_m = parse_f64(key, value)?,
            "v_minus" => self.v_minus = parse_f64(key, value)?,
            "lambda_weight" => self.lambda_weight = Some(parse_f64(key, value)?),
            "xi_min" => self.xi_min = Some(parse_f64(key, value)?),
            "xi_max" => self.xi_max = Some(parse_f64(key, value)?),
            "n_cells" => self.n_cells = parse_usize(key, value)?,
            "cfl" => self.cfl = parse_f64(key, value)?,
            "t_end" => self.t_end = parse_f64(key, value)?,
            "output_interval" => self.output_interval = parse_f64(key, value)?,
            "snapshot_times" => self.snapshot_times = parse_list(key, value, parse_f64)?,
            "seed" => {
                self.seed =
                    value.parse().map_err(|_| Error::Config(format!("seed: cannot parse '{value}' as an integer")))?
            }
            "strength_cap" => self.strength_cap = parse_f64(key, value)?,
            "amplitude_cap" => self.amplitude_cap = parse_f64(key, value)?,
            "sweep.v_m" => self.sweep.v_m = parse_list(key, value, parse_f64)?,
            "sweep.v_minus" => self.sweep.v_minus = parse_list(key, value, parse_f64)?,
            "sweep.amplitude" => self.sweep.amplitude = parse_list(key, value, parse_f64)?,
            "sweep.n_cells" => self.sweep.n_cells = parse_list(key, value, parse_usize)?,
            _ => {
                if let Some(rest) = key.strip_prefix("perturbation.") {
                    let (idx, field) =
                        rest.split_once('.').ok_or_else(|| Error::Config(format!("unknown key '{key}'")))?;
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Config(format!("unknown key '{key}': bad perturbation index")))?;
                    let entry = pert.entry(idx).or_default();
                    match field {
                        "kind" => {
                            entry.kind = Some(match value {
                                "gaussian" => PerturbationKind::Gaussian,
                                _ => return Err(Error::Config(format!("{key}: unknown kind '{value}'"))),
                            })
                        }
                        "target" => {
                            entry.target = Some(match value {
                                "v" => Target::V,
                                "u" => Target::U,
                                _ => return Err(Error::Config(format!("{key}: target must be v or u, got '{value}'"))),
                            })
                        }
                        "amplitude" => entry.amplitude = Some(parse_f64(key, value)?),
                        "center" => entry.center = Some(parse_f64(key, value)?),
                        "width" => entry.width = Some(parse_f64(key, value)?),
                        _ => return Err(Error::Config(format!("unknown key '{key}'"))),
                    }
                } else {
                    return Err(Error::Config(format!("unknown key '{key}'")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct BumpFields {
    kind: Option<PerturbationKind>,
    target: Option<Target>,
    amplitude: Option<f64>,
    center: Option<f64>,
    width: Option<f64>,
}

impl BumpFields {
    fn apply(&self, b: &mut Bump) {
        if let Some(k) = self.kind {
            b.kind = k;
        }
        if let Some(t) = self.target {
            b.target = t;
        }
        if let Some(a) = self.amplitude {
            b.amplitude = a;
        }
        if let Some(c) = self.center {
            b.center = c;
        }
        if let Some(w) = self.width {
            b.width = w;
        }
    }
}

fn default_bump() -> Bump {
    Bump::gaussian(Target::V, 0.01, 0.0, 5.0)
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let parsed = match value.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().ok().zip(b.trim().parse::<f64>().ok()).map(|(a, b)| a / b),
        None => value.parse::<f64>().ok(),
    };
    match parsed {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::Config(format!("{key}: cannot parse '{value}' as a number"))),
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{value}' as a count")))
}

fn parse_list<T>(key: &str, value: &str, item: fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|s| item(key, s.trim())).collect()
}

/// Splits `key = value`, ignoring `#` comments and blank lines.
fn assignments(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value', got '{line}'", lineno + 1)))?;
        out.push((lineno + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses a config file and applies `overrides` (`key=value`) on top, then
/// validates.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut pairs = assignments(text)?;
    for (k, o) in overrides.iter().enumerate() {
        let (key, value) =
            o.split_once('=').ok_or_else(|| Error::Config(format!("--set expects key=value, got '{o}'")))?;
        pairs.push((usize::MAX - k, key.trim().to_string(), value.trim().to_string()));
    }
    // any perturbation key replaces the default bumps
    let mut pert: BTreeMap<usize, BumpFields> = BTreeMap::new();
    let mut any_pert = false;
    for (_, key, value) in &pairs {
        any_pert |= key.starts_with("perturbation.");
        cfg.set_inner(key, value, &mut pert)?;
    }
    if any_pert {
        let max = pert.keys().next_back().copied().unwrap_or(0);
        if pert.len() != max + 1 {
            return Err(Error::Config("perturbation indices must be contiguous from 0".into()));
        }
        cfg.perturbation.bumps = pert
            .values()
            .map(|f| {
                let mut b = default_bump();
                f.apply(&mut b);
                b
            })
            .collect();
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &[])
}

/// Renders `cfg` back into config text that parses to the same value.
pub fn render_config(cfg: &RunConfig) -> String {
    let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
    let mut s = String::new();
    let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
    kv("gamma", format!("{:?}", cfg.gamma));
    kv("v_plus", format!("{:?}", cfg.v_plus));
    kv("u_plus", format!("{:?}", cfg.u_plus));
    kv("v_m", format!("{:?}", cfg.v_m));
    kv("v_minus", format!("{:?}", cfg.v_minus));
    if let Some(l) = cfg.lambda_weight {
        kv("lambda_weight", format!("{l:?}"));
    }
    if let Some(x) = cfg.xi_min {
        kv("xi_min", format!("{x:?}"));
    }
    if let Some(x) = cfg.xi_max {
        kv("xi_max", format!("{x:?}"));
    }
    kv("n_cells", cfg.n_cells.to_string());
    kv("cfl", format!("{:?}", cfg.cfl));
    kv("t_end", format!("{:?}", cfg.t_end));
    kv("output_interval", format!("{:?}", cfg.output_interval));
    if !cfg.snapshot_times.is_empty() {
        kv("snapshot_times", list(&cfg.snapshot_times));
    }
    kv("seed", cfg.seed.to_string());
    kv("strength_cap", format!("{:?}", cfg.strength_cap));
    kv("amplitude_cap", format!("{:?}", cfg.amplitude_cap));
    for (i, b) in cfg.perturbation.bumps.iter().enumerate() {
        kv(&format!("perturbation.{i}.kind"), "gaussian".into());
        kv(&format!("perturbation.{i}.target"), if b.target == Target::V { "v" } else { "u" }.into());
        kv(&format!("perturbation.{i}.amplitude"), format!("{:?}", b.amplitude));
        kv(&format!("perturbation.{i}.center"), format!("{:?}", b.center));
        kv(&format!("perturbation.{i}.width"), format!("{:?}", b.width));
    }
    s
}
