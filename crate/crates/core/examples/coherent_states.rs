//! Atomic coherent states: Fock-space amplitudes, Bloch readout and the
//! pseudo-spin commutator.
//!
//! cargo run --release --example coherent_states [-- <theta> <phi> <n_atoms>]

use twomode::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("arguments must be numbers"));
    let theta = args.next().unwrap_or(std::f64::consts::FRAC_PI_8);
    let phi = args.next().unwrap_or(0.0);
    let n = args.next().unwrap_or(10.0) as usize;

    let a = AcsParams::new(theta, phi)?;
    let s = acs_state(&a, n)?;
    println!("|theta={theta:.4}, phi={phi:.4}> with N = {n}");
    for (k, c) in s.amplitudes().iter().enumerate() {
        println!("  k={k:<3} n_a={:<3} n_b={k:<3} amplitude = {:+.6}{:+.6}i", n - k, c.re, c.im);
    }
    let b = bloch_vector(&s);
    let e = a.bloch();
    println!("Bloch readout  ({:+.6}, {:+.6}, {:+.6})", b.x, b.y, b.z);
    println!("expected       ({:+.6}, {:+.6}, {:+.6})", e.x, e.y, e.z);

    let j = pseudo_spin_matrices(n)?;
    let comm = &j.jx * &j.jy - &j.jy * &j.jx - &j.jz * C64::new(0.0, 2.0);
    println!("max |[Jx, Jy] - 2i Jz| = {:.2e}", comm.camax());
    Ok(())
}
