//! Robustness sweeps and Bloch-sphere trajectories.
//!
//! Grid cells are independent `run_gate` calls evaluated in parallel; results
//! are assembled in grid order, so output never depends on scheduling.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::OracleEvolver;
use crate::fock::{acs_state, bloch_vector, AcsParams, BlochVector};
use crate::format_float;
use crate::gates::{gate_conditions, realize_params, run_gate, GateId, GateOverrides, GateSpec, DEFAULT_DETUNING_FACTOR};
use crate::params::PhysicalParams;

/// Named, ordered sample values of one sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("sweep axis must not be empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("sweep axis contains non-finite value {v}")));
        }
        Ok(Self { name: name.into(), values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Fidelity samples over one or two axes, row-major in (axis1, axis2).
/// `None` marks a cell whose parameters could not be realized.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityGrid {
    pub gate: GateId,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub fidelities: Vec<Option<f64>>,
    pub n_atoms: usize,
    pub initial: AcsParams,
}

impl FidelityGrid {
    pub fn cols(&self) -> usize {
        self.axis2.as_ref().map_or(1, Axis::len)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.fidelities[i * self.cols() + j]
    }

    /// Writes `axis1,axis2,fidelity` (or `axis1,fidelity`) rows; missing cells
    /// have an empty fidelity field.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let cell = |f: Option<f64>| f.map(format_float).unwrap_or_default();
        match &self.axis2 {
            Some(axis2) => {
                w.write_record(["axis1", "axis2", "fidelity"])?;
                for (i, a) in self.axis1.values.iter().enumerate() {
                    for (j, b) in axis2.values.iter().enumerate() {
                        w.write_record([format_float(*a), format_float(*b), cell(self.get(i, j))])?;
                    }
                }
            }
            None => {
                w.write_record(["axis1", "fidelity"])?;
                for (i, a) in self.axis1.values.iter().enumerate() {
                    w.write_record([format_float(*a), cell(self.get(i, 0))])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Bloch vectors sampled along an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<BlochVector>,
}

impl Trajectory {
    /// Writes `t,x,y,z` rows. Times are multiplied by `time_scale`.
    pub fn write_csv<W: Write>(&self, writer: W, time_scale: f64) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "x", "y", "z"])?;
        for (t, b) in self.times.iter().zip(&self.points) {
            w.write_record([format_float(t * time_scale), format_float(b.x), format_float(b.y), format_float(b.z)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `n` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => (0..n).map(|i| start + (end - start) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Λ/g axis for the surface sweep: 50 points from 0 to −0.02. Negative Λ is
/// what raising γ_ab from zero produces.
pub fn default_lambda_axis() -> Vec<f64> {
    linspace(0.0, -0.02, 50)
}

/// ΔΓ/Γ axis for the surface sweep: 50 points from 0 to 0.2.
pub fn default_dgamma_axis() -> Vec<f64> {
    linspace(0.0, 0.2, 50)
}

/// δΔ/Δ axis for the detuning sweep: 31 points from 0 to 0.3.
pub fn default_ddelta_axis() -> Vec<f64> {
    linspace(0.0, 0.3, 31)
}

/// Fidelity over (Λ, ΔΓ/Γ_G).
///
/// `lambda_values` are Λ in units of g (realized through γ_ab = −2Λ) and
/// `dgamma_ratio_values` set Γ_s = Γ_G + ratio·|Γ_G| (realized through ω_ab).
pub fn sweep_lambda_gamma(
    spec: &GateSpec,
    lambda_values: &[f64],
    dgamma_ratio_values: &[f64],
    n_atoms: usize,
    initial: &AcsParams,
) -> Result<FidelityGrid> {
    initial.validate()?;
    crate::fock::check_n(n_atoms)?;
    let axis1 = Axis::new("lambda_over_g", lambda_values.to_vec())?;
    let axis2 = Axis::new("dgamma_over_gamma", dgamma_ratio_values.to_vec())?;
    let g = spec.coupling();
    let cells: Vec<(f64, f64)> = axis1
        .values
        .iter()
        .flat_map(|&l| axis2.values.iter().map(move |&r| (l, r)))
        .collect();
    let fidelities = cells
        .par_iter()
        .map(|&(l, r)| {
            let overrides = GateOverrides { lambda_nl: l * g, gamma_shift: r * spec.gamma_g.abs(), ..Default::default() };
            run_gate(spec, initial, &overrides, n_atoms).ok().map(|run| run.fidelity)
        })
        .collect();
    Ok(FidelityGrid { gate: spec.gate, axis1, axis2: Some(axis2), fidelities, n_atoms, initial: *initial })
}

/// Fidelities at Δ_s = Δ_G(1 + r) and Δ_G(1 − r) for each ratio r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedDeltaPoint {
    pub ratio: f64,
    pub above: Option<f64>,
    pub below: Option<f64>,
}

impl SignedDeltaPoint {
    pub fn worst(&self) -> Option<f64> {
        match (self.above, self.below) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        }
    }

    pub fn asymmetry(&self) -> Option<f64> {
        Some((self.above? - self.below?).abs())
    }
}

fn check_delta_sweep(spec: &GateSpec, ratios: &[f64]) -> Result<()> {
    if !spec.gate.is_transfer() {
        return Err(Error::param("gate", format!("detuning sweeps apply to NOT, Y and H only, got {}", spec.gate)));
    }
    Axis::new("ddelta_over_delta", ratios.to_vec())?;
    if let Some(r) = ratios.iter().find(|r| **r < 0.0) {
        return Err(Error::InvalidArgument(format!("detuning ratios are magnitudes and must be >= 0, got {r}")));
    }
    Ok(())
}

/// Both signs of the detuning error at every ratio.
pub fn sweep_delta_signed(spec: &GateSpec, ratios: &[f64], n_atoms: usize, initial: &AcsParams) -> Result<Vec<SignedDeltaPoint>> {
    check_delta_sweep(spec, ratios)?;
    initial.validate()?;
    crate::fock::check_n(n_atoms)?;
    let jobs: Vec<f64> = ratios.iter().flat_map(|&r| [r, -r]).collect();
    let results: Vec<Option<f64>> = jobs
        .par_iter()
        .map(|&r| {
            let overrides = GateOverrides { delta_ratio: r, ..Default::default() };
            run_gate(spec, initial, &overrides, n_atoms).ok().map(|run| run.fidelity)
        })
        .collect();
    Ok(ratios
        .iter()
        .zip(results.chunks(2))
        .map(|(&ratio, pair)| SignedDeltaPoint { ratio, above: pair[0], below: pair[1] })
        .collect())
}

/// Worst-sign fidelity over δΔ/Δ_G for a transfer gate.
pub fn sweep_delta(spec: &GateSpec, ratios: &[f64], n_atoms: usize, initial: &AcsParams) -> Result<FidelityGrid> {
    let points = sweep_delta_signed(spec, ratios, n_atoms, initial)?;
    Ok(grid_from_signed(spec.gate, &points, n_atoms, initial))
}

fn grid_from_signed(gate: GateId, points: &[SignedDeltaPoint], n_atoms: usize, initial: &AcsParams) -> FidelityGrid {
    FidelityGrid {
        gate,
        axis1: Axis { name: "ddelta_over_delta".into(), values: points.iter().map(|p| p.ratio).collect() },
        axis2: None,
        fidelities: points.iter().map(SignedDeltaPoint::worst).collect(),
        n_atoms,
        initial: *initial,
    }
}

/// Bloch vectors of the exactly evolved coherent state at `n_samples`
/// uniformly spaced times in [0, t_final].
pub fn trajectory(p: &PhysicalParams, initial: &AcsParams, t_final: f64, n_samples: usize) -> Result<Trajectory> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n_samples}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_final must be positive and finite, got {t_final}")));
    }
    let evolver = OracleEvolver::new(p)?;
    let s0 = acs_state(initial, p.n_atoms)?;
    let times = linspace(0.0, t_final, n_samples);
    let points = times
        .par_iter()
        .map(|&t| evolver.evolve(&s0, t).map(|s| bloch_vector(&s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    LambdaGamma,
    Delta,
}

fn default_g() -> f64 {
    1.0
}
fn default_factor() -> f64 {
    DEFAULT_DETUNING_FACTOR
}
fn default_n() -> usize {
    1000
}
fn default_initial() -> AcsParams {
    AcsParams { theta: PI / 8.0, phi: 0.0 }
}

/// Everything needed to reproduce a sweep. Missing fields take the defaults;
/// [`SweepConfig::resolve`] fills them in explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub kind: Option<SweepKind>,
    #[serde(default)]
    pub gate: Option<GateId>,
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default = "default_factor")]
    pub detuning_factor: f64,
    #[serde(default = "default_n")]
    pub n_atoms: usize,
    #[serde(default = "default_initial")]
    pub initial: AcsParams,
    #[serde(default)]
    pub lambda_values: Option<Vec<f64>>,
    #[serde(default)]
    pub dgamma_ratio_values: Option<Vec<f64>>,
    #[serde(default)]
    pub ddelta_ratio_values: Option<Vec<f64>>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kind: None,
            gate: None,
            g: default_g(),
            detuning_factor: default_factor(),
            n_atoms: default_n(),
            initial: default_initial(),
            lambda_values: None,
            dgamma_ratio_values: None,
            ddelta_ratio_values: None,
        }
    }
}

/// Sweep result with the provenance written to the JSON sidecar.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub grid: FidelityGrid,
    pub sidecar: SweepSidecar,
}

/// Sidecar contents. The flattened `config` is complete, so the sidecar is
/// itself a valid sweep config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSidecar {
    #[serde(flatten)]
    pub config: SweepConfig,
    pub gate_spec: GateSpec,
    pub baseline_params: PhysicalParams,
    pub realization: String,
    pub missing_cells: usize,
    #[serde(default)]
    pub max_sign_asymmetry: Option<f64>,
    pub generator: String,
}

impl SweepConfig {
    /// Copy with kind, gate and all axis values made explicit.
    pub fn resolve(&self) -> Result<SweepConfig> {
        let kind = self.kind.ok_or_else(|| Error::param("kind", "sweep kind is required"))?;
        let gate = self.gate.ok_or_else(|| Error::param("gate", "gate is required"))?;
        let mut out = self.clone();
        out.kind = Some(kind);
        out.gate = Some(gate);
        match kind {
            SweepKind::LambdaGamma => {
                out.lambda_values.get_or_insert_with(default_lambda_axis);
                out.dgamma_ratio_values.get_or_insert_with(default_dgamma_axis);
                out.ddelta_ratio_values = None;
            }
            SweepKind::Delta => {
                out.ddelta_ratio_values.get_or_insert_with(default_ddelta_axis);
                out.lambda_values = None;
                out.dgamma_ratio_values = None;
            }
        }
        Ok(out)
    }

    pub fn run(&self) -> Result<SweepOutput> {
        let config = self.resolve()?;
        let gate = config.gate.expect("resolved");
        let spec = gate_conditions(gate, config.g, config.detuning_factor)?;
        let baseline_params = realize_params(&spec, &GateOverrides::default(), config.n_atoms)?;
        let (grid, max_sign_asymmetry, realization) = match config.kind.expect("resolved") {
            SweepKind::LambdaGamma => {
                let grid = sweep_lambda_gamma(
                    &spec,
                    config.lambda_values.as_deref().unwrap_or_default(),
                    config.dgamma_ratio_values.as_deref().unwrap_or_default(),
                    config.n_atoms,
                    &config.initial,
                )?;
                let text = "gamma_a = gamma_b = 0; gamma_ab = -2 * lambda_over_g * g; \
                            omega_b = 0; omega_a = gamma_g + dgamma_over_gamma * |gamma_g|; delta = delta_g";
                (grid, None, text.to_string())
            }
            SweepKind::Delta => {
                let points = sweep_delta_signed(
                    &spec,
                    config.ddelta_ratio_values.as_deref().unwrap_or_default(),
                    config.n_atoms,
                    &config.initial,
                )?;
                let asym = points.iter().filter_map(SignedDeltaPoint::asymmetry).fold(None, |m: Option<f64>, a| {
                    Some(m.map_or(a, |m| m.max(a)))
                });
                let grid = grid_from_signed(gate, &points, config.n_atoms, &config.initial);
                let text = "gamma_a = gamma_b = gamma_ab = 0; omega_b = 0; omega_a = gamma_g; \
                            delta = delta_g * (1 +/- ddelta_over_delta), worst sign recorded";
                (grid, asym, text.to_string())
            }
        };
        let missing_cells = grid.fidelities.iter().filter(|f| f.is_none()).count();
        let sidecar = SweepSidecar {
            config,
            gate_spec: spec,
            baseline_params,
            realization,
            missing_cells,
            max_sign_asymmetry,
            generator: concat!("twomode ", env!("CARGO_PKG_VERSION")).to_string(),
        };
        Ok(SweepOutput { grid, sidecar })
    }
}
