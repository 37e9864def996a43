//! Single-qubit logic gates on two coupled Bose-Einstein condensates.
//!
//! Atoms condensed in two hyperfine levels `a` and `b`, coupled by a two-photon
//! transition, are described by a two-mode Hamiltonian with trap energies,
//! intra- and inter-species collisions, a coupling `g` and a detuning `Δ`.
//! An N-atom atomic coherent state (ACS) encodes one qubit on the Bloch sphere.
//!
//! The crate provides:
//!
//! - [`params`]: physical parameters and the derived quantities (Λ, Γ, ξ, ϖ, η).
//! - [`fock`]: the `N + 1` dimensional two-mode Fock space, pseudo-spin
//!   operators, coherent states and Bloch readout.
//! - [`evolve`]: the analytic 2×2 rotation-product propagator, the analytic
//!   Fock-space propagator (valid at Λ = 0), an exact eigendecomposition
//!   oracle and an RK4 integrator of the time-dependent Hamiltonian.
//! - [`gates`]: gate conditions for NOT, Y, H, Z, S, T and gate fidelities.
//! - [`sweeps`]: fidelity surfaces, detuning robustness curves and Bloch
//!   trajectories, with CSV/JSON output.
//! - [`cli`]: the `twomode` command-line front end.
//!
//! All functions are unit-agnostic: any consistent set of angular-frequency and
//! time units works (ħ = 1). The CLI works in units of `g` by default.

pub mod cli;
pub mod error;
pub mod evolve;
pub mod fock;
pub mod gates;
pub mod params;
pub mod sweeps;

pub use error::{Error, Result};
pub use evolve::{
    evolve_oracle, evolve_rk4, full_propagator_analytic, qubit_propagator, OracleEvolver,
    QubitPropagator,
};
pub use fock::{acs_state, bloch_vector, pseudo_spin_matrices, AcsParams, BlochVector, StateVector};
pub use gates::{fidelity, gate_conditions, run_gate, target_matrix, GateId, GateOverrides, GateSpec};
pub use params::{derive_params, DerivedParams, PhysicalParams};
pub use sweeps::{sweep_delta, sweep_lambda_gamma, trajectory, FidelityGrid, Trajectory};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

/// Formats a float with 17 significant digits, enough to round-trip any f64.
pub(crate) fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
