//! Single-qubit gates: parameter conditions, target matrices and fidelities.
//!
//! Transfer-population gates (NOT, Y, H) need an exact pair (Δ_G, Γ_G) set by
//! `g`. Phase gates (Z, S, T) suppress transfer with a strong detuning
//! `Δ_G = k·g`; their conditions are only asymptotically exact, with an
//! O(1/k) residual.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{qubit_propagator, OracleEvolver, QubitPropagator};
use crate::fock::{acs_from_spinor, acs_state, AcsParams, StateVector};
use crate::params::{derive_params, PhysicalParams};
use crate::C64;

/// Smallest accepted `Δ_G / g` for phase gates.
pub const MIN_DETUNING_FACTOR: f64 = 25.0;

/// Default `Δ_G / g` for phase gates.
pub const DEFAULT_DETUNING_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateId {
    #[serde(rename = "not")]
    Not,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "h")]
    Hadamard,
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "t")]
    T,
}

impl GateId {
    pub const ALL: [GateId; 6] = [GateId::Not, GateId::Y, GateId::Hadamard, GateId::Z, GateId::S, GateId::T];
    pub const TRANSFER: [GateId; 3] = [GateId::Not, GateId::Y, GateId::Hadamard];
    pub const PHASE: [GateId; 3] = [GateId::Z, GateId::S, GateId::T];

    pub fn is_transfer(self) -> bool {
        matches!(self, GateId::Not | GateId::Y | GateId::Hadamard)
    }

    pub fn is_phase(self) -> bool {
        !self.is_transfer()
    }

    /// Lower-case name used on the command line and in JSON.
    pub fn key(self) -> &'static str {
        match self {
            GateId::Not => "not",
            GateId::Y => "y",
            GateId::Hadamard => "h",
            GateId::Z => "z",
            GateId::S => "s",
            GateId::T => "t",
        }
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateId::Not => "NOT",
            GateId::Y => "Y",
            GateId::Hadamard => "H",
            GateId::Z => "Z",
            GateId::S => "S",
            GateId::T => "T",
        };
        f.write_str(name)
    }
}

impl FromStr for GateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "not" | "x" => Ok(GateId::Not),
            "y" => Ok(GateId::Y),
            "h" | "hadamard" => Ok(GateId::Hadamard),
            "z" => Ok(GateId::Z),
            "s" => Ok(GateId::S),
            "t" => Ok(GateId::T),
            _ => Err(Error::param("gate", format!("unknown gate `{s}` (expected not, y, h, z, s or t)"))),
        }
    }
}

/// Standard matrix of the gate; phase gates are `diag(1, e^{iφ})`.
pub fn target_matrix(id: GateId) -> Matrix2<C64> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let phase = |phi: f64| Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, phi));
    match id {
        GateId::Not => Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        GateId::Y => Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        GateId::Hadamard => {
            let h = FRAC_1_SQRT_2;
            Matrix2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
        }
        GateId::Z => phase(PI),
        GateId::S => phase(FRAC_PI_2),
        GateId::T => phase(FRAC_PI_4),
    }
}

/// Evolution time and detuning conditions realizing one gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "GateSpecRecord", into = "GateSpecRecord")]
pub struct GateSpec {
    pub gate: GateId,
    pub t_gate: f64,
    /// Two-photon detuning Δ_G.
    pub delta_g: f64,
    /// Frequency-scattering detuning Γ_G.
    pub gamma_g: f64,
    pub target: Matrix2<C64>,
    /// `Δ_G / g`, phase gates only.
    pub detuning_factor: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateSpecRecord {
    gate: GateId,
    t_gate: f64,
    delta_g: f64,
    gamma_g: f64,
    detuning_factor: Option<f64>,
}

impl From<GateSpecRecord> for GateSpec {
    fn from(r: GateSpecRecord) -> Self {
        GateSpec {
            gate: r.gate,
            t_gate: r.t_gate,
            delta_g: r.delta_g,
            gamma_g: r.gamma_g,
            target: target_matrix(r.gate),
            detuning_factor: r.detuning_factor,
        }
    }
}

impl From<GateSpec> for GateSpecRecord {
    fn from(s: GateSpec) -> Self {
        GateSpecRecord {
            gate: s.gate,
            t_gate: s.t_gate,
            delta_g: s.delta_g,
            gamma_g: s.gamma_g,
            detuning_factor: s.detuning_factor,
        }
    }
}

impl GateSpec {
    /// Coupling `g` implied by `Δ_G`.
    pub fn coupling(&self) -> f64 {
        match self.gate {
            GateId::Not => self.delta_g / 4.0,
            GateId::Y => self.delta_g / 2.0,
            GateId::Hadamard => self.delta_g * FRAC_1_SQRT_2 / 4.0,
            _ => self.delta_g / self.detuning_factor.unwrap_or(DEFAULT_DETUNING_FACTOR),
        }
    }

    /// Parameters realizing the spec with Λ = 0 and ω_ab = Γ_G.
    pub fn ideal_params(&self, n_atoms: usize) -> Result<PhysicalParams> {
        realize_params(self, &GateOverrides::default(), n_atoms)
    }

    /// 2×2 propagator at `t_gate` under ideal conditions.
    pub fn propagator(&self) -> Result<QubitPropagator> {
        let dp = derive_params(&self.ideal_params(1)?)?;
        qubit_propagator(&dp, self.t_gate)
    }

    /// Deviation of the ideal propagator from the target, up to global phase.
    pub fn deviation(&self) -> Result<f64> {
        Ok(phase_aligned_deviation(&self.propagator()?.matrix, &self.target))
    }
}

/// Gate times and detunings for gate `id` at coupling `g`.
///
/// `detuning_factor` sets `Δ_G = detuning_factor · g` for phase gates and is
/// ignored for transfer gates.
pub fn gate_conditions(id: GateId, g: f64, detuning_factor: f64) -> Result<GateSpec> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::param("g", format!("must be positive and finite, got {g}")));
    }
    let (t_gate, delta_g, gamma_g, factor) = match id {
        GateId::Not => {
            let d = 4.0 * g;
            (2.0 * PI / d, d, 4.0 * g, None)
        }
        GateId::Y => {
            let d = 2.0 * g;
            (PI / d, d, 2.0 * g, None)
        }
        GateId::Hadamard => {
            let d = 8.0 * FRAC_1_SQRT_2 * g;
            (2.0 * PI / d, d, -2.0 * g + d, None)
        }
        GateId::Z | GateId::S | GateId::T => {
            if !(detuning_factor.is_finite() && detuning_factor >= MIN_DETUNING_FACTOR) {
                return Err(Error::param(
                    "detuning_factor",
                    format!(
                        "phase gates only work for Δ_G ≫ g (population transfer is suppressed with an \
                         O(g/Δ_G) residual); need detuning_factor >= {MIN_DETUNING_FACTOR}, got {detuning_factor}"
                    ),
                ));
            }
            let d = detuning_factor * g;
            let (t, gamma) = match id {
                GateId::Z => (PI / (2.0 * d), -2.0 * d),
                GateId::S => (3.0 * PI / (2.0 * d), d / 3.0),
                _ => (PI / (2.0 * d), d / 2.0),
            };
            (t, d, gamma, Some(detuning_factor))
        }
    };
    Ok(GateSpec { gate: id, t_gate, delta_g, gamma_g, target: target_matrix(id), detuning_factor: factor })
}

/// Max elementwise `|e^{iφ} u − target|` with the phase `φ` that aligns
/// `tr(target† u)` to the positive real axis.
pub fn phase_aligned_deviation(u: &Matrix2<C64>, target: &Matrix2<C64>) -> f64 {
    let overlap = (target.adjoint() * u).trace();
    let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { C64::new(1.0, 0.0) };
    (u * phase - target).camax()
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Departures from the ideal realization of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GateOverrides {
    /// Nonlinear parameter Λ, realized through `γ_ab = −2Λ`.
    pub lambda_nl: f64,
    /// Shift of Γ away from Γ_G, realized through ω_ab.
    pub gamma_shift: f64,
    /// Relative detuning error: Δ_s = Δ_G (1 + delta_ratio).
    pub delta_ratio: f64,
    /// Common offset added to ω_a and ω_b.
    pub omega_offset: f64,
}

/// Physical parameters realizing `spec` with the given departures.
///
/// The default realization has γ_a = γ_b = γ_ab = 0 (so Λ = 0 and Γ = ω_ab)
/// and ω_b = 0, ω_a = Γ_G.
pub fn realize_params(spec: &GateSpec, overrides: &GateOverrides, n_atoms: usize) -> Result<PhysicalParams> {
    let gamma_s = spec.gamma_g + overrides.gamma_shift;
    let p = PhysicalParams {
        omega_a: overrides.omega_offset + gamma_s,
        omega_b: overrides.omega_offset,
        gamma_a: 0.0,
        gamma_b: 0.0,
        gamma_ab: -2.0 * overrides.lambda_nl,
        g: spec.coupling(),
        delta: spec.delta_g * (1.0 + overrides.delta_ratio),
        n_atoms,
    };
    p.validate()?;
    Ok(p)
}

/// Result of simulating one gate on an N-atom coherent state.
#[derive(Debug, Clone)]
pub struct GateRun {
    pub params: PhysicalParams,
    pub final_state: StateVector,
    pub target_state: StateVector,
    pub fidelity: f64,
}

/// Evolves the coherent state `initial` for `t_gate` with the exact engine and
/// compares against the coherent state of the target-transformed spinor.
pub fn run_gate(spec: &GateSpec, initial: &AcsParams, overrides: &GateOverrides, n_atoms: usize) -> Result<GateRun> {
    let params = realize_params(spec, overrides, n_atoms)?;
    let s0 = acs_state(initial, n_atoms)?;
    let final_state = OracleEvolver::new(&params)?.evolve(&s0, spec.t_gate)?;
    let (alpha, beta) = initial.spinor();
    let t = &spec.target;
    let target_state = acs_from_spinor(t[(0, 0)] * alpha + t[(0, 1)] * beta, t[(1, 0)] * alpha + t[(1, 1)] * beta, n_atoms)?;
    let fidelity = fidelity(&target_state, &final_state)?;
    Ok(GateRun { params, final_state, target_state, fidelity })
}
