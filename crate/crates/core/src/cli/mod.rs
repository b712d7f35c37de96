//! Command-line front end: `profile`, `rarefaction`, `simulate`, `verify` and
//! `sweep`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical blow-up,
//! 3 verification failure.

mod sweep;

pub use sweep::{sweep, SweepRow};

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{parse_config_with, render_config, RunConfig, KEY_HELP};
use crate::diagnostics::format_row;
use crate::error::{Error, Result};
use crate::euler_waves::exact_rarefaction_unchecked;
use crate::profiles::ApproxRarefaction;
use crate::solver::run;
use crate::verify::verify_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOW_UP: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nswave",
    version,
    about = "Viscous shock + rarefaction composite waves of 1D barotropic Navier-Stokes"
)]
#[command(after_help = key_help())]
pub struct Cli {
    /// Flat `key = value` configuration file (`#` starts a comment)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Override one configuration key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate the viscous shock profile and the weight to profile.csv
    Profile,
    /// Tabulate the smooth and exact rarefaction to rarefaction.csv
    Rarefaction,
    /// Run the perturbed composite wave to t_end
    Simulate,
    /// Run the property checks and print one line per check
    Verify,
    /// Run the cartesian product of the sweep.* lists in parallel
    Sweep,
}

fn key_help() -> String {
    let mut s = String::from("Configuration keys (default in brackets):\n");
    for (k, d, what) in KEY_HELP {
        let _ = writeln!(s, "  {k:<26} {what} [{d}]");
    }
    s.push_str("\nExit codes: 0 success, 1 configuration error, 2 numerical blow-up, 3 verification failure.");
    s
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BlowUp { .. } => EXIT_BLOW_UP,
        _ => EXIT_CONFIG,
    }
}

pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    parse_config_with(&text, overrides)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    let cfg = load_config(cli.config.as_deref(), &cli.set)?;
    let out = cli.out.as_path();
    match cli.command {
        Command::Profile => {
            fs::create_dir_all(out)?;
            fs::write(out.join("profile.csv"), profile_csv(&cfg)?)?;
            println!("wrote {}", out.join("profile.csv").display());
            Ok(EXIT_OK)
        }
        Command::Rarefaction => {
            fs::create_dir_all(out)?;
            fs::write(out.join("rarefaction.csv"), rarefaction_csv(&cfg)?)?;
            println!("wrote {}", out.join("rarefaction.csv").display());
            Ok(EXIT_OK)
        }
        Command::Simulate => simulate(&cfg, out),
        Command::Verify => {
            let report = verify_suite(&cfg);
            print!("{}", report.to_text());
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Sweep => {
            let rows = sweep(&cfg, out)?;
            let failed = rows.iter().filter(|r| r.status != "ok").count();
            println!("{} runs, {failed} failed; summary in {}", rows.len(), out.join("summary.csv").display());
            Ok(EXIT_OK)
        }
    }
}

fn simulate(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let artifacts = run(cfg)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("config.txt"), render_config(cfg))?;
    artifacts.write_to(out)?;
    if let Some(last) = artifacts.records.last() {
        println!(
            "t = {}, X = {:.6e}, sup|v-v~| = {:.3e}, went = {:.3e}; {} rows in {}",
            last.t,
            last.x,
            last.sup_v,
            last.went,
            artifacts.records.len(),
            out.join("diagnostics.csv").display()
        );
    }
    match artifacts.failure {
        Some(e @ Error::BlowUp { .. }) => {
            eprintln!("error: {e}");
            Ok(EXIT_BLOW_UP)
        }
        Some(e) => Err(e),
        None => Ok(EXIT_OK),
    }
}

/// `xi, v_s, u_s, h_s, v_s_xi, a` over the tabulated profile.
pub fn profile_csv(cfg: &RunConfig) -> Result<String> {
    let bg = cfg.background()?;
    let p = &bg.profile;
    let mut s = String::from("xi,v_s,u_s,h_s,v_s_xi,a\n");
    for i in 0..p.len() {
        let xi = p.xi_at(i);
        let sample = p.eval(xi);
        let (a, _) = bg.weight.from_sample(&sample);
        writeln!(s, "{}", format_row(&[xi, sample.v, sample.u, sample.h, sample.v_xi, a])).unwrap();
    }
    Ok(s)
}

/// Smooth and exact rarefaction at the snapshot times (or `0` and `t_end`).
pub fn rarefaction_csv(cfg: &RunConfig) -> Result<String> {
    let w = cfg.wave_config()?;
    let rare = ApproxRarefaction::new(&w);
    let times = if cfg.snapshot_times.is_empty() { vec![0.0, cfg.t_end] } else { cfg.snapshot_times.clone() };
    let s_max = 1.0 + times.iter().copied().fold(0.0, f64::max);
    let (lo, hi) = (rare.w_minus() * s_max - 20.0, 20.0);
    let n = cfg.n_cells;
    let mut s = String::from("t,x,w,w_x,v,u,v_x,u_x,v_exact,u_exact\n");
    for &t in &times {
        for k in 0..n {
            let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let (wv, wx) = rare.burgers_w(1.0 + t, x);
            let r = rare.eval(t, x);
            let ratio = if t > 0.0 {
                x / t
            } else if x < 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
            let (ve, ue) = exact_rarefaction_unchecked(ratio, &w);
            writeln!(s, "{}", format_row(&[t, x, wv, wx, r.v, r.u, r.v_x, r.u_x, ve, ue])).unwrap();
        }
    }
    Ok(s)
}
