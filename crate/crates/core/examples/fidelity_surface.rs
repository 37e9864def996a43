//! Gate fidelity over the nonlinearity Lambda/g and the relative shift of the
//! frequency-scattering detuning, for one gate.
//!
//! cargo run --release --example fidelity_surface [-- <gate> <n_atoms> <out.csv>]

use std::f64::consts::FRAC_PI_8;
use std::fs::File;

use twomode::sweeps::{default_dgamma_axis, default_lambda_axis};
use twomode::{gate_conditions, sweep_lambda_gamma, AcsParams, GateId};

fn main() -> twomode::Result<()> {
    let mut args = std::env::args().skip(1);
    let gate: GateId = args.next().unwrap_or_else(|| "h".into()).parse()?;
    let n: usize = args.next().map_or(100, |s| s.parse().expect("n_atoms must be an integer"));
    let out = args.next().unwrap_or_else(|| format!("surface_{}.csv", gate.key()));

    let spec = gate_conditions(gate, 1.0, 100.0)?;
    let grid = sweep_lambda_gamma(&spec, &default_lambda_axis(), &default_dgamma_axis(), n, &AcsParams::new(FRAC_PI_8, 0.0)?)?;
    grid.write_csv(File::create(&out)?)?;

    let cells = grid.fidelities.iter().flatten();
    let above = cells.clone().filter(|f| **f >= 0.99).count();
    let min = cells.fold(f64::INFINITY, |m, f| m.min(*f));
    println!("{gate}: N={n}, {} cells, min F = {min:.4}, {above} cells with F >= 0.99 -> {out}", grid.fidelities.len());
    Ok(())
}
