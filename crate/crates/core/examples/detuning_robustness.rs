//! Worst-sign fidelity of NOT, Y and H against a relative error in the
//! two-photon detuning.
//!
//! cargo run --release --example detuning_robustness [-- <n_atoms>]

use std::f64::consts::FRAC_PI_8;

use twomode::sweeps::{linspace, sweep_delta_signed};
use twomode::{gate_conditions, AcsParams, GateId};

fn main() -> twomode::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(100, |s| s.parse().expect("n_atoms must be an integer"));
    let ratios = linspace(0.0, 0.1, 11);
    let initial = AcsParams::new(FRAC_PI_8, 0.0)?;
    println!("N = {n}; columns: dDelta/Delta, then F(+), F(-) per gate");
    let rows: Vec<_> = GateId::TRANSFER
        .iter()
        .map(|&id| sweep_delta_signed(&gate_conditions(id, 1.0, 0.0)?, &ratios, n, &initial))
        .collect::<twomode::Result<_>>()?;
    print!("{:>7}", "r");
    for id in GateId::TRANSFER {
        print!(" {:>9} {:>9}", format!("{id}+"), format!("{id}-"));
    }
    println!();
    for (i, r) in ratios.iter().enumerate() {
        print!("{r:>7.3}");
        for row in &rows {
            let p = &row[i];
            print!(" {:>9.5} {:>9.5}", p.above.unwrap_or(f64::NAN), p.below.unwrap_or(f64::NAN));
        }
        println!();
    }
    Ok(())
}
