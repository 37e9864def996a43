//! Gate times in milliseconds for two experimentally reported couplings.
//!
//! cargo run --release --example feasibility_times

use std::f64::consts::PI;
use twomode::{gate_conditions, GateId};

fn main() -> twomode::Result<()> {
    // g = 2π/(4 t_π/2) with t_π/2 = 170 µs, rounded to 1.5 kHz, and a 600 Hz coupling
    let t_half_pi = 170e-6;
    for (label, g) in [
        ("2pi x 1/(4 t_pi/2)", 2.0 * PI / (4.0 * t_half_pi)),
        ("2pi x 1.5 kHz", 2.0 * PI * 1500.0),
        ("2pi x 600 Hz", 2.0 * PI * 600.0),
    ] {
        println!("g = {label} = {g:.1} rad/s");
        for id in GateId::TRANSFER {
            println!("  t_{id:<3} = {:.4} ms", gate_conditions(id, g, 0.0)?.t_gate * 1e3);
        }
        for id in GateId::PHASE {
            println!("  t_{id:<3} = {:.4} ms  (Delta_G = 100 g)", gate_conditions(id, g, 100.0)?.t_gate * 1e3);
        }
    }
    Ok(())
}
