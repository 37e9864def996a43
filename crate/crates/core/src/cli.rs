//! `twomode` command-line front end.
//!
//! Frequencies are in units of `g` and times in units of `1/g` unless `--si`
//! is given, in which case frequencies are rad/s and times are seconds.
//! Exit codes: 0 success, 2 invalid input, 1 internal failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{evolve_rk4, full_propagator_analytic, OracleEvolver};
use crate::fock::{acs_state, bloch_vector, AcsParams, StateVector};
use crate::format_float;
use crate::gates::{gate_conditions, GateId, GateSpec, DEFAULT_DETUNING_FACTOR};
use crate::params::PhysicalParams;
use crate::sweeps::{trajectory, SweepConfig, SweepKind};

#[derive(Debug, Parser)]
#[command(name = "twomode", version, about = "Single-qubit gates on two coupled Bose-Einstein condensates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the gate conditions for one gate and the deviation of the ideal
    /// 2x2 propagator from the target, up to a global phase.
    GateCheck {
        /// Gate: not (x), y, h, z, s or t.
        #[arg(long)]
        gate: GateId,
        /// Coupling strength g (rad/s with --si, otherwise any unit).
        #[arg(long)]
        g: f64,
        /// Delta_G / g for phase gates (z, s, t); at least 25.
        #[arg(long, default_value_t = DEFAULT_DETUNING_FACTOR)]
        detuning_factor: f64,
        /// Treat g as rad/s and also report times in milliseconds.
        #[arg(long)]
        si: bool,
    },
    /// Evolve a coherent state under the parameters in a JSON file and write
    /// the final Fock-space amplitudes as CSV (k,re,im).
    Evolve {
        /// JSON file with omega_a, omega_b, gamma_a, gamma_b, gamma_ab, g, delta, n_atoms.
        #[arg(long)]
        config: PathBuf,
        /// Evolution time.
        #[arg(long)]
        t: f64,
        /// Polar angle of the initial coherent state.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8)]
        theta: f64,
        /// Azimuth of the initial coherent state.
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Override n_atoms from the config.
        #[arg(long)]
        n_atoms: Option<usize>,
        /// Propagation engine.
        #[arg(long, value_enum, default_value_t = Engine::Oracle)]
        engine: Engine,
        /// RK4 step, in the same time unit as --t (rk4 engine only).
        #[arg(long)]
        dt: Option<f64>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Config frequencies are rad/s and --t, --dt are seconds.
        #[arg(long)]
        si: bool,
    },
    /// Run a fidelity sweep and write CSV plus a JSON sidecar next to it. The
    /// sidecar is itself a valid --config.
    Sweep {
        /// lambda-gamma: F over (Lambda/g, dGamma/Gamma_G); delta: worst-sign F over dDelta/Delta_G.
        #[arg(long, value_enum)]
        kind: Option<CliSweepKind>,
        /// Gate: not (x), y, h, z, s or t. Delta sweeps accept not, y and h only.
        #[arg(long)]
        gate: Option<GateId>,
        /// JSON sweep config (kind, gate, g, detuning_factor, n_atoms, initial,
        /// lambda_values, dgamma_ratio_values, ddelta_ratio_values; all optional).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override n_atoms from the config.
        #[arg(long)]
        n_atoms: Option<usize>,
        /// Output CSV path; the sidecar is written with a .json extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the Bloch vector along an evolution and write t,x,y,z CSV.
    Trajectory {
        /// JSON trajectory config: either `params` (PhysicalParams) and
        /// `t_final`, or `gate` (with optional g, detuning_factor, n_atoms) to
        /// follow one gate for its gate time. Optional: initial, n_samples.
        #[arg(long)]
        config: PathBuf,
        /// Override the number of samples from the config.
        #[arg(long)]
        n_samples: Option<usize>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Config frequencies are rad/s and times are seconds.
        #[arg(long)]
        si: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Oracle,
    Rk4,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliSweepKind {
    LambdaGamma,
    Delta,
}

impl From<CliSweepKind> for SweepKind {
    fn from(k: CliSweepKind) -> Self {
        match k {
            CliSweepKind::LambdaGamma => SweepKind::LambdaGamma,
            CliSweepKind::Delta => SweepKind::Delta,
        }
    }
}

fn default_samples() -> usize {
    201
}

fn default_initial() -> AcsParams {
    AcsParams { theta: std::f64::consts::FRAC_PI_8, phi: 0.0 }
}

/// Input of the `trajectory` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryConfig {
    #[serde(default)]
    pub params: Option<PhysicalParams>,
    #[serde(default)]
    pub gate: Option<GateId>,
    #[serde(default)]
    pub g: Option<f64>,
    #[serde(default)]
    pub detuning_factor: Option<f64>,
    #[serde(default)]
    pub n_atoms: Option<usize>,
    #[serde(default)]
    pub t_final: Option<f64>,
    #[serde(default = "default_initial")]
    pub initial: AcsParams,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    run(args, &mut out)
}

/// Like [`main`] but writes reports to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    eprint!("{}", e.render());
                    2
                }
                _ => {
                    let text = e.to_string();
                    let line = text.lines().next().unwrap_or("invalid arguments");
                    eprintln!("twomode: {}", line.trim_start_matches("error: "));
                    2
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("twomode: {}", single_line(&e.to_string()));
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::GateCheck { gate, g, detuning_factor, si } => gate_check(gate, g, detuning_factor, si, out),
        Command::Evolve { config, t, theta, phi, n_atoms, engine, dt, out: path, si } => {
            let mut p: PhysicalParams = read_json(&config)?;
            if let Some(n) = n_atoms {
                p.n_atoms = n;
            }
            evolve_cmd(p, t, AcsParams::new(theta, phi)?, engine, dt, &path, si, out)
        }
        Command::Sweep { kind, gate, config, n_atoms, out: path } => {
            let mut cfg: SweepConfig = match &config {
                Some(c) => read_json(c)?,
                None => SweepConfig::default(),
            };
            if let Some(k) = kind {
                cfg.kind = Some(k.into());
            }
            if gate.is_some() {
                cfg.gate = gate;
            }
            if let Some(n) = n_atoms {
                cfg.n_atoms = n;
            }
            sweep_cmd(&cfg, &path, out)
        }
        Command::Trajectory { config, n_samples, out: path, si } => {
            let mut cfg: TrajectoryConfig = read_json(&config)?;
            if let Some(n) = n_samples {
                cfg.n_samples = n;
            }
            trajectory_cmd(&cfg, &path, si, out)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn report_spec(spec: &GateSpec, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "gate = {}", spec.gate)?;
    writeln!(out, "g = {}", format_float(spec.coupling()))?;
    writeln!(out, "t_gate = {}", format_float(spec.t_gate))?;
    writeln!(out, "delta_g = {}", format_float(spec.delta_g))?;
    writeln!(out, "gamma_g = {}", format_float(spec.gamma_g))?;
    if let Some(k) = spec.detuning_factor {
        writeln!(out, "detuning_factor = {}", format_float(k))?;
    }
    Ok(())
}

fn gate_check(gate: GateId, g: f64, detuning_factor: f64, si: bool, out: &mut dyn Write) -> Result<()> {
    let spec = gate_conditions(gate, g, detuning_factor)?;
    // the deviation depends only on dimensionless products, so evaluate it at g = 1
    let unit = gate_conditions(gate, 1.0, detuning_factor)?;
    let deviation = unit.deviation()?;
    report_spec(&spec, out)?;
    writeln!(out, "t_gate_g_units = {}", format_float(unit.t_gate))?;
    if si {
        writeln!(out, "t_gate_ms = {}", format_float(spec.t_gate * 1e3))?;
    }
    writeln!(out, "deviation = {}", format_float(deviation))?;
    writeln!(out, "spec = {}", serde_json::to_string(&spec)?)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn evolve_cmd(
    p: PhysicalParams,
    t: f64,
    initial: AcsParams,
    engine: Engine,
    dt: Option<f64>,
    path: &Path,
    si: bool,
    out: &mut dyn Write,
) -> Result<()> {
    p.validate()?;
    if !t.is_finite() {
        return Err(Error::param("t", format!("must be finite, got {t}")));
    }
    let (p, t, dt) = if si {
        let scale = g_scale(&p)?;
        (p.scaled(1.0 / scale), t * scale, dt.map(|d| d * scale))
    } else {
        (p, t, dt)
    };
    let s0 = acs_state(&initial, p.n_atoms)?;
    let state = match engine {
        Engine::Oracle => OracleEvolver::new(&p)?.evolve(&s0, t)?,
        Engine::Rk4 => {
            let dt = dt.ok_or_else(|| Error::param("dt", "required with --engine rk4"))?;
            evolve_rk4(&p, &s0, t, dt)?
        }
        Engine::Analytic => {
            let u = full_propagator_analytic(&p, t)?;
            StateVector::normalized(u * s0.amplitudes())?
        }
    };
    let mut w = create(path)?;
    state.write_csv(&mut w)?;
    w.flush()?;
    let b = bloch_vector(&state);
    writeln!(out, "n_atoms = {}", p.n_atoms)?;
    writeln!(out, "norm = {}", format_float(state.norm()))?;
    writeln!(out, "bloch = {} {} {}", format_float(b.x), format_float(b.y), format_float(b.z))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn g_scale(p: &PhysicalParams) -> Result<f64> {
    if p.g > 0.0 {
        Ok(p.g)
    } else {
        Err(Error::param("g", "must be positive with --si (it sets the unit)"))
    }
}

/// Path of the JSON sidecar belonging to a CSV output.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn sweep_cmd(cfg: &SweepConfig, path: &Path, out: &mut dyn Write) -> Result<()> {
    let result = cfg.run()?;
    let side = sidecar_path(path);
    if side == path {
        return Err(Error::InvalidArgument(format!("output {} would be overwritten by its sidecar", path.display())));
    }
    let mut w = create(path)?;
    result.grid.write_csv(&mut w)?;
    w.flush()?;
    let mut w = create(&side)?;
    serde_json::to_writer_pretty(&mut w, &result.sidecar)?;
    writeln!(w)?;
    w.flush()?;
    let (lo, hi) = result
        .grid
        .fidelities
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| (lo.min(*f), hi.max(*f)));
    writeln!(out, "cells = {}", result.grid.fidelities.len())?;
    writeln!(out, "missing = {}", result.sidecar.missing_cells)?;
    writeln!(out, "fidelity_min = {}", format_float(lo))?;
    writeln!(out, "fidelity_max = {}", format_float(hi))?;
    if let Some(a) = result.sidecar.max_sign_asymmetry {
        writeln!(out, "max_sign_asymmetry = {}", format_float(a))?;
    }
    writeln!(out, "wrote {} and {}", path.display(), side.display())?;
    Ok(())
}

fn trajectory_cmd(cfg: &TrajectoryConfig, path: &Path, si: bool, out: &mut dyn Write) -> Result<()> {
    let (p, t_final) = match (&cfg.params, cfg.gate) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument("trajectory config takes either `params` or `gate`, not both".into()))
        }
        (None, None) => return Err(Error::InvalidArgument("trajectory config needs `params` or `gate`".into())),
        (Some(p), None) => {
            let t = cfg.t_final.ok_or_else(|| Error::param("t_final", "required with `params`"))?;
            let mut p = *p;
            if let Some(n) = cfg.n_atoms {
                p.n_atoms = n;
            }
            (p, t)
        }
        (None, Some(gate)) => {
            let spec = gate_conditions(gate, cfg.g.unwrap_or(1.0), cfg.detuning_factor.unwrap_or(DEFAULT_DETUNING_FACTOR))?;
            let p = spec.ideal_params(cfg.n_atoms.unwrap_or(1000))?;
            (p, cfg.t_final.unwrap_or(spec.t_gate))
        }
    };
    p.validate()?;
    let (p, t_final, time_scale) = if si {
        let scale = g_scale(&p)?;
        (p.scaled(1.0 / scale), t_final * scale, 1.0 / scale)
    } else {
        (p, t_final, 1.0)
    };
    let traj = trajectory(&p, &cfg.initial, t_final, cfg.n_samples)?;
    let mut w = create(path)?;
    traj.write_csv(&mut w, time_scale)?;
    w.flush()?;
    let last = traj.points.last().expect("at least two samples");
    writeln!(out, "samples = {}", traj.times.len())?;
    writeln!(out, "final_bloch = {} {} {}", format_float(last.x), format_float(last.y), format_float(last.z))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("twomode").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    fn field(report: &str, key: &str) -> f64 {
        report
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("no {key} in {report}"))
            .parse()
            .unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn gate_check_not() {
        let (code, out) = run_capture(&["gate-check", "--gate", "not", "--g", "1.0"]);
        assert_eq!(code, 0);
        assert!((field(&out, "t_gate") - 1.5708).abs() < 5e-5);
        assert!(field(&out, "deviation") <= 1e-10);
    }

    #[test]
    fn gate_check_si_reports_milliseconds() {
        let g = 2.0 * std::f64::consts::PI * 600.0;
        let (code, out) = run_capture(&["gate-check", "--gate", "y", "--g", &g.to_string(), "--si"]);
        assert_eq!(code, 0);
        assert!((field(&out, "t_gate_ms") - 0.4167).abs() < 1e-4);
    }

    #[test]
    fn validation_errors_exit_two() {
        assert_eq!(run_capture(&["gate-check", "--gate", "q", "--g", "1"]).0, 2);
        assert_eq!(run_capture(&["gate-check", "--gate", "z", "--g", "1", "--detuning-factor", "3"]).0, 2);
        assert_eq!(run_capture(&["gate-check", "--gate", "not", "--g", "-1"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("gate-check"));
        let (code, out) = run_capture(&["sweep", "--help"]);
        assert_eq!(code, 0);
        for flag in ["--kind", "--gate", "--config", "--n-atoms", "--out"] {
            assert!(out.contains(flag), "{flag} missing from help");
        }
    }

    #[test]
    fn trajectory_config_rejects_unknown_keys() {
        let r: std::result::Result<TrajectoryConfig, _> = serde_json::from_str(r#"{"gate":"not","bogus":1}"#);
        assert!(r.unwrap_err().to_string().contains("bogus"));
    }
}
