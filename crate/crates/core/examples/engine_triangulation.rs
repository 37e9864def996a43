//! Cross-checks the evolution engines on one parameter set: exact
//! eigendecomposition, analytic Fock-space propagator (needs Lambda = 0),
//! RK4 on the time-dependent Hamiltonian, and the 2x2 propagator at N = 1.
//!
//! cargo run --release --example engine_triangulation

use twomode::evolve::spectral_radius_bound;
use twomode::*;

fn main() -> Result<()> {
    let linear = PhysicalParams { omega_a: 2.5, omega_b: 0.5, gamma_a: 0.02, gamma_b: 0.02, gamma_ab: 0.02, g: 1.0, delta: 1.2, n_atoms: 60 };
    let nonlinear = PhysicalParams { gamma_a: 0.03, gamma_b: 0.01, gamma_ab: -0.01, n_atoms: 20, ..linear };
    let initial = AcsParams::new(1.1, 0.4)?;
    let t = 2.0;

    let s0 = acs_state(&initial, linear.n_atoms)?;
    let oracle = evolve_oracle(&linear, &s0, t)?;
    let analytic = StateVector::new(full_propagator_analytic(&linear, t)? * s0.amplitudes())?;
    println!("Lambda = 0, N = {}: 1 - |<oracle|analytic>|^2 = {:.2e}", linear.n_atoms, 1.0 - oracle.inner(&analytic)?.norm_sqr());

    let s0 = acs_state(&initial, nonlinear.n_atoms)?;
    let oracle = evolve_oracle(&nonlinear, &s0, t)?;
    let rho = spectral_radius_bound(&nonlinear);
    println!("Lambda = {:.4}, N = {}:", nonlinear.lambda_nl(), nonlinear.n_atoms);
    for dt in [0.04 / rho, 0.02 / rho, 0.01 / rho] {
        let rk = evolve_rk4(&nonlinear, &s0, t, dt)?;
        println!("  rk4 dt = {dt:.2e}: |psi_rk4 - psi_oracle| = {:.2e}", (rk.amplitudes() - oracle.amplitudes()).norm());
    }

    let single = PhysicalParams { n_atoms: 1, ..linear };
    let u = qubit_propagator(&derive_params(&single)?, t)?;
    let col = evolve_oracle(&single, &StateVector::basis(1, 0)?, t)?;
    let diff = ((col.amplitudes()[0] - u.matrix[(0, 0)]).norm()).max((col.amplitudes()[1] - u.matrix[(1, 0)]).norm());
    println!("N = 1: max |oracle - 2x2 propagator| on |0> = {diff:.2e}");
    Ok(())
}
