//! Gate conditions for all six gates at g = 1 and how closely the ideal 2x2
//! propagator reproduces each target.
//!
//! cargo run --release --example gate_table [-- <detuning_factor>]

use twomode::{gate_conditions, GateId};

fn main() -> twomode::Result<()> {
    let k: f64 = std::env::args().nth(1).map_or(Ok(100.0), |s| s.parse()).expect("detuning factor must be a number");
    println!("{:<4} {:>12} {:>12} {:>12} {:>12}", "gate", "g*t_gate", "Delta_G/g", "Gamma_G/g", "deviation");
    for id in GateId::ALL {
        let spec = gate_conditions(id, 1.0, k)?;
        println!(
            "{:<4} {:>12.6} {:>12.6} {:>12.6} {:>12.3e}",
            id.to_string(),
            spec.t_gate,
            spec.delta_g,
            spec.gamma_g,
            spec.deviation()?
        );
    }
    println!("\nphase-gate deviation against detuning factor:");
    for k in [25.0, 50.0, 100.0, 200.0, 400.0] {
        let devs: Vec<String> = GateId::PHASE
            .iter()
            .map(|&id| Ok(format!("{id}={:.4}", gate_conditions(id, 1.0, k)?.deviation()?)))
            .collect::<twomode::Result<_>>()?;
        println!("  k={k:<5} {}", devs.join("  "));
    }
    Ok(())
}
