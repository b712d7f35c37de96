use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::RunConfig;
use crate::diagnostics::{
    background_samples, effective_velocity, format_row, record, records_to_csv, wave_interaction_norms,
    DiagnosticRecord, InteractionNorms,
};
use crate::error::{Error, Result};
use crate::solver::{initial_data, Grid1D, Model, SimState, Simulation};

/// Field snapshot with the background it is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub h: Vec<f64>,
    pub v_bg: Vec<f64>,
    pub u_bg: Vec<f64>,
    pub h_bg: Vec<f64>,
    pub a: Vec<f64>,
}

impl Snapshot {
    pub const COLUMNS: [&'static str; 8] = ["xi", "v", "u", "h", "v_bg", "u_bg", "h_bg", "a"];

    pub fn capture(model: &Model, state: &SimState) -> Self {
        let bgs = background_samples(&model.grid, &model.bg, state.t, state.shift);
        Self {
            t: state.t,
            xi: model.grid.nodes(),
            v: state.v.clone(),
            u: state.u.clone(),
            h: effective_velocity(&state.v, &state.u, &model.grid),
            v_bg: bgs.iter().map(|b| b.v).collect(),
            u_bg: bgs.iter().map(|b| b.u).collect(),
            h_bg: bgs.iter().map(|b| b.h).collect(),
            a: bgs.iter().map(|b| model.bg.weight_shifted(&b.shock).0).collect(),
        }
    }

    pub fn file_name(&self) -> String {
        format!("snapshot_t{}.csv", self.t)
    }

    pub fn to_csv(&self) -> String {
        let mut s = Self::COLUMNS.join(",");
        s.push('\n');
        for i in 0..self.xi.len() {
            let row =
                [self.xi[i], self.v[i], self.u[i], self.h[i], self.v_bg[i], self.u_bg[i], self.h_bg[i], self.a[i]];
            writeln!(s, "{}", format_row(&row)).unwrap();
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub grid: Grid1D,
    pub records: Vec<DiagnosticRecord>,
    pub interaction: Vec<InteractionNorms>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: SimState,
    /// `H¹` norm of the initial perturbation
    pub initial_h1: f64,
    /// Set when the run stopped early; everything before it is kept.
    pub failure: Option<Error>,
}

impl RunArtifacts {
    pub fn diagnostics_csv(&self) -> String {
        records_to_csv(&self.records)
    }

    pub fn interaction_csv(&self) -> String {
        let mut s = InteractionNorms::COLUMNS.join(",");
        s.push('\n');
        for n in &self.interaction {
            writeln!(s, "{}", format_row(&n.values())).unwrap();
        }
        s
    }

    /// Writes `diagnostics.csv`, `interaction_norms.csv` and the snapshots.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("diagnostics.csv"), self.diagnostics_csv())?;
        fs::write(dir.join("interaction_norms.csv"), self.interaction_csv())?;
        for snap in &self.snapshots {
            fs::write(dir.join(snap.file_name()), snap.to_csv())?;
        }
        Ok(())
    }
}

fn is_snapshot_time(cfg: &RunConfig, t: f64) -> bool {
    cfg.snapshot_times.iter().any(|&s| (s - t).abs() <= 1e-12 * s.abs().max(1.0))
}

/// Runs the configured simulation from `t = 0` to `t_end`.
///
/// Configuration problems are returned as errors; a blow-up during stepping
/// is recorded in [`RunArtifacts::failure`] with the outputs gathered so far.
pub fn run(config: &RunConfig) -> Result<RunArtifacts> {
    config.validate()?;
    let bg = config.background()?;
    let grid = config.grid(&bg.cfg)?;
    let init = initial_data(&grid, &bg, &config.perturbation, config.amplitude_cap)?;
    let model = Model::new(grid, bg)?;
    let mut sim = Simulation::new(model, init.v, init.u)?;
    let mass0 = sim.mass();

    let mut records = Vec::new();
    let mut interaction = Vec::new();
    let mut snapshots = Vec::new();
    let mut emit = |sim: &Simulation| {
        let (m, s) = (&sim.model, &sim.state);
        if is_snapshot_time(config, s.t) {
            snapshots.push(Snapshot::capture(m, s));
        }
        let on_interval = {
            let k = (s.t / config.output_interval).round();
            (k * config.output_interval - s.t).abs() <= 1e-9 || s.t == config.t_end
        };
        if on_interval {
            records.push(record(m, s, mass0));
            interaction.push(wave_interaction_norms(&m.grid, &m.bg, s.t, s.shift));
        }
    };

    let events = config.event_times();
    let mut failure = None;
    emit(&sim);
    'outer: for &target in events.iter().skip(1) {
        while sim.state.t < target {
            let bound = sim.stable_dt();
            let mut dt = config.cfl * bound;
            let last = sim.state.t + dt >= target - 1e-12 * target.max(1.0);
            if last {
                dt = target - sim.state.t;
            }
            if let Err(e) = sim.advance(dt) {
                failure = Some(e);
                break 'outer;
            }
            if last {
                sim.state.t = target;
            }
        }
        emit(&sim);
    }

    Ok(RunArtifacts {
        grid,
        records,
        interaction,
        snapshots,
        final_state: sim.state,
        initial_h1: init.h1_perturbation,
        failure,
    })
}
