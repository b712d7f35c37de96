use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::config::{render_config, RunConfig};
use crate::diagnostics::format_row;
use crate::error::Result;
use crate::solver::run;

/// One line of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub v_m: f64,
    pub v_minus: f64,
    pub amplitude: f64,
    pub n_cells: usize,
    pub status: String,
    pub t_final: f64,
    pub final_sup: f64,
    pub final_abs_xdot: f64,
    pub x_final: f64,
    pub x_over_t: f64,
    pub went_ratio: f64,
}

impl SweepRow {
    pub const HEADER: &'static str =
        "run,v_m,v_minus,amplitude,n_cells,status,t_final,final_sup,final_abs_Xdot,X_final,X_over_t,went_ratio";

    fn csv(&self) -> String {
        let nums = format_row(&[
            self.t_final,
            self.final_sup,
            self.final_abs_xdot,
            self.x_final,
            self.x_over_t,
            self.went_ratio,
        ]);
        format!(
            "{:03},{:?},{:?},{:?},{},{},{nums}",
            self.index, self.v_m, self.v_minus, self.amplitude, self.n_cells, self.status
        )
    }
}

fn or_default<T: Copy>(list: &[T], default: T) -> Vec<T> {
    if list.is_empty() {
        vec![default]
    } else {
        list.to_vec()
    }
}

/// The configurations of a sweep, in summary order
/// (`v_m` slowest, `n_cells` fastest).
pub fn sweep_configs(base: &RunConfig) -> Vec<(RunConfig, f64)> {
    let mut out = Vec::new();
    for &v_m in &or_default(&base.sweep.v_m, base.v_m) {
        for &v_minus in &or_default(&base.sweep.v_minus, base.v_minus) {
            for &amp in &or_default(&base.sweep.amplitude, 1.0) {
                for &n in &or_default(&base.sweep.n_cells, base.n_cells) {
                    let mut c = base.clone();
                    c.sweep = Default::default();
                    c.v_m = v_m;
                    c.v_minus = v_minus;
                    c.n_cells = n;
                    c.perturbation = base.perturbation.scaled(amp);
                    out.push((c, amp));
                }
            }
        }
    }
    out
}

fn run_one(index: usize, cfg: &RunConfig, amplitude: f64, dir: &Path) -> SweepRow {
    let mut row = SweepRow {
        index,
        v_m: cfg.v_m,
        v_minus: cfg.v_minus,
        amplitude,
        n_cells: cfg.n_cells,
        status: "ok".into(),
        t_final: f64::NAN,
        final_sup: f64::NAN,
        final_abs_xdot: f64::NAN,
        x_final: f64::NAN,
        x_over_t: f64::NAN,
        went_ratio: f64::NAN,
    };
    let result = fs::create_dir_all(dir)
        .map_err(Into::into)
        .and_then(|_| fs::write(dir.join("config.txt"), render_config(cfg)).map_err(Into::into))
        .and_then(|_| cfg.validate())
        .and_then(|_| run(cfg));
    match result {
        Err(e) => row.status = format!("error: {e}").replace(',', ";"),
        Ok(a) => {
            if let Err(e) = a.write_to(dir) {
                row.status = format!("error: {e}").replace(',', ";");
            } else if let Some(e) = &a.failure {
                row.status = format!("blow-up: {e}").replace(',', ";");
            }
            if let (Some(first), Some(last)) = (a.records.first(), a.records.last()) {
                row.t_final = last.t;
                row.final_sup = last.sup_v.max(last.sup_u);
                row.final_abs_xdot = last.xdot.abs();
                row.x_final = last.x;
                row.x_over_t = last.x_over_t;
                row.went_ratio = if first.went > 0.0 { last.went / first.went } else { f64::NAN };
            }
        }
    }
    row
}

/// Runs every configuration of the sweep in parallel, each in its own
/// `run_###` directory, and writes `summary.csv` (plus `refinement.csv` when
/// three or more grid sizes are swept).
pub fn sweep(base: &RunConfig, out: &Path) -> Result<Vec<SweepRow>> {
    fs::create_dir_all(out)?;
    let configs = sweep_configs(base);
    let rows: Vec<SweepRow> = configs
        .par_iter()
        .enumerate()
        .map(|(i, (cfg, amp))| run_one(i, cfg, *amp, &out.join(format!("run_{i:03}"))))
        .collect();
    let mut text = String::from(SweepRow::HEADER);
    text.push('\n');
    for r in &rows {
        text.push_str(&r.csv());
        text.push('\n');
    }
    fs::write(out.join("summary.csv"), text)?;
    if let Some(refinement) = refinement_csv(&rows) {
        fs::write(out.join("refinement.csv"), refinement)?;
    }
    Ok(rows)
}

/// Self-convergence of the final shift over consecutive grid sizes: for runs
/// that differ only in `n_cells`, `ratio = |X_a - X_b| / |X_b - X_c|` and
/// `order = log2(ratio)` for successive doublings.
pub fn refinement_csv(rows: &[SweepRow]) -> Option<String> {
    let mut text = String::from("v_m,v_minus,amplitude,n_coarse,n_mid,n_fine,ratio,order\n");
    let mut any = false;
    let mut groups: Vec<Vec<&SweepRow>> = Vec::new();
    for r in rows {
        match groups
            .iter_mut()
            .find(|g| g[0].v_m == r.v_m && g[0].v_minus == r.v_minus && g[0].amplitude == r.amplitude)
        {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    for mut g in groups {
        g.sort_by_key(|r| r.n_cells);
        for w in g.windows(3) {
            let ratio = (w[0].x_final - w[1].x_final).abs() / (w[1].x_final - w[2].x_final).abs();
            any = true;
            let _ = writeln!(
                text,
                "{:?},{:?},{:?},{},{},{},{}",
                w[0].v_m,
                w[0].v_minus,
                w[0].amplitude,
                w[0].n_cells,
                w[1].n_cells,
                w[2].n_cells,
                format_row(&[ratio, ratio.log2()])
            );
        }
    }
    any.then_some(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn product_order_and_size() {
        let cfg = parse_config("sweep.v_m = 0.9, 0.95\nsweep.amplitude = 0.5, 1").unwrap();
        let list = sweep_configs(&cfg);
        assert_eq!(list.len(), 4);
        assert_eq!((list[0].0.v_m, list[0].1), (0.9, 0.5));
        assert_eq!((list[3].0.v_m, list[3].1), (0.95, 1.0));
        assert_eq!(list[0].0.perturbation.bumps[0].amplitude, 0.005);
        assert_eq!(sweep_configs(&RunConfig::default()).len(), 1);
    }

    #[test]
    fn two_by_two_sweep_writes_isolated_runs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("t_end = 0.5\nn_cells = 128\nsweep.v_m = 0.9, 0.95\nsweep.amplitude = 0.5, 1").unwrap();
        let rows = sweep(&cfg, dir.path()).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.status == "ok"));
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 5);
        let cols = SweepRow::HEADER.split(',').count();
        assert!(summary.lines().all(|l| l.split(',').count() == cols));
        for i in 0..4 {
            assert!(dir.path().join(format!("run_{i:03}/diagnostics.csv")).exists());
        }
        // identical config, identical summary
        let dir2 = tempfile::tempdir().unwrap();
        sweep(&cfg, dir2.path()).unwrap();
        assert_eq!(summary, fs::read_to_string(dir2.path().join("summary.csv")).unwrap());
    }

    #[test]
    fn one_point_sweep_matches_simulate() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("t_end = 0.5\nn_cells = 128").unwrap();
        sweep(&cfg, dir.path()).unwrap();
        let direct = run(&cfg).unwrap().diagnostics_csv();
        assert_eq!(fs::read_to_string(dir.path().join("run_000/diagnostics.csv")).unwrap(), direct);
    }
}
