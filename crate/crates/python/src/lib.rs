//! Python bindings: `import pynswave`.
//!
//! Configurations are passed as the same `key = value` text the CLI reads,
//! plus optional `key=value` overrides.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use nswave::config::parse_config_with;
use nswave::euler_waves;
use nswave::verify::verify_suite;
use nswave::{DiagnosticRecord, Error, RunConfig};

/// `(name, passed, measured, bound, note)`
type Check = (String, bool, f64, f64, String);
type Columns = HashMap<&'static str, Vec<f64>>;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn load(text: &str, overrides: Option<Vec<String>>) -> PyResult<RunConfig> {
    parse_config_with(text, &overrides.unwrap_or_default()).map_err(to_py)
}

/// `p(v) = v^-γ` and the related closed forms.
#[pyclass(frozen)]
struct Gas(nswave::GasParams);

#[pymethods]
impl Gas {
    #[new]
    fn new(gamma: f64) -> PyResult<Self> {
        nswave::GasParams::new(gamma).map(Gas).map_err(to_py)
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }

    fn p(&self, v: f64) -> f64 {
        self.0.p(v)
    }

    fn dp(&self, v: f64) -> f64 {
        self.0.dp(v)
    }

    fn q(&self, v: f64) -> f64 {
        self.0.q(v)
    }

    fn lambda1(&self, v: f64) -> f64 {
        self.0.lambda1(v)
    }

    fn lambda2(&self, v: f64) -> f64 {
        self.0.lambda2(v)
    }

    fn relative_p(&self, v: f64, w: f64) -> f64 {
        self.0.relative_p(v, w)
    }

    fn relative_q(&self, v: f64, w: f64) -> f64 {
        self.0.relative_q(v, w)
    }

    fn __repr__(&self) -> String {
        format!("Gas(gamma={})", self.0.gamma())
    }
}

/// End states, shock speed and strengths of the rarefaction + shock pair.
#[pyfunction]
#[pyo3(signature = (gamma = 5.0 / 3.0, v_plus = 1.0, u_plus = 0.0, v_m = 0.9, v_minus = 0.8))]
fn wave_config(gamma: f64, v_plus: f64, u_plus: f64, v_m: f64, v_minus: f64) -> PyResult<HashMap<&'static str, f64>> {
    let gas = nswave::GasParams::new(gamma).map_err(to_py)?;
    let w = nswave::WaveConfig::forward(gas, v_plus, u_plus, v_m, v_minus).map_err(to_py)?;
    Ok(HashMap::from([
        ("gamma", gamma),
        ("v_plus", w.v_plus),
        ("u_plus", w.u_plus),
        ("v_m", w.v_m),
        ("u_m", w.u_m),
        ("v_minus", w.v_minus),
        ("u_minus", w.u_minus),
        ("sigma", w.sigma),
        ("delta_s", w.delta_s),
        ("delta_r", w.delta_r),
    ]))
}

/// Intermediate state `(v_m, u_m)` of the Riemann problem.
#[pyfunction]
#[pyo3(signature = (v_minus, u_minus, v_plus, u_plus, gamma = 5.0 / 3.0))]
fn riemann_intermediate(v_minus: f64, u_minus: f64, v_plus: f64, u_plus: f64, gamma: f64) -> PyResult<(f64, f64)> {
    let gas = nswave::GasParams::new(gamma).map_err(to_py)?;
    euler_waves::riemann_intermediate(v_minus, u_minus, v_plus, u_plus, &gas).map_err(to_py)
}

/// Tabulated shock profile and weight: columns `xi, v_s, u_s, h_s, v_s_xi, a`.
#[pyfunction]
#[pyo3(signature = (config = "", overrides = None))]
fn profile(config: &str, overrides: Option<Vec<String>>) -> PyResult<Columns> {
    let bg = load(config, overrides)?.background().map_err(to_py)?;
    let p = &bg.profile;
    let mut cols: Columns = HashMap::new();
    for i in 0..p.len() {
        let xi = p.xi_at(i);
        let s = p.eval(xi);
        let (a, _) = bg.weight.from_sample(&s);
        for (k, x) in [("xi", xi), ("v_s", s.v), ("u_s", s.u), ("h_s", s.h), ("v_s_xi", s.v_xi), ("a", a)] {
            cols.entry(k).or_default().push(x);
        }
    }
    Ok(cols)
}

/// Runs the simulation; returns the diagnostic columns and the blow-up
/// message (`None` when the run reached `t_end`).
#[pyfunction]
#[pyo3(signature = (config = "", overrides = None))]
fn simulate(py: Python<'_>, config: &str, overrides: Option<Vec<String>>) -> PyResult<(Columns, Option<String>)> {
    let cfg = load(config, overrides)?;
    let artifacts = py.detach(|| nswave::run(&cfg)).map_err(to_py)?;
    let mut cols: Columns = HashMap::new();
    for r in &artifacts.records {
        for (k, x) in DiagnosticRecord::COLUMNS.iter().zip(r.values()) {
            cols.entry(k).or_default().push(x);
        }
    }
    Ok((cols, artifacts.failure.map(|e| e.to_string())))
}

/// Property checks as `(name, passed, measured, bound, note)` tuples.
#[pyfunction]
#[pyo3(signature = (config = "", overrides = None))]
fn verify(py: Python<'_>, config: &str, overrides: Option<Vec<String>>) -> PyResult<Vec<Check>> {
    let cfg = load(config, overrides)?;
    let report = py.detach(|| verify_suite(&cfg));
    Ok(report.checks.into_iter().map(|c| (c.name.to_string(), c.passed, c.measured, c.bound, c.note)).collect())
}

/// Runs the command-line front end with `args` (without the program name)
/// and returns its exit code.
#[pyfunction]
fn main(py: Python<'_>, args: Vec<String>) -> i32 {
    let argv: Vec<String> = std::iter::once("nswave".to_string()).chain(args).collect();
    py.detach(|| nswave::cli::main_with_args(argv))
}

#[pymodule]
fn pynswave(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Gas>()?;
    m.add_function(wrap_pyfunction!(wave_config, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_intermediate, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(main, m)?)?;
    Ok(())
}
