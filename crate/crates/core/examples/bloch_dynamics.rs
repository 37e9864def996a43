//! Bloch-sphere path of |pi/8, 0> under each transfer gate, sampled over the
//! gate time. Writes one `t,x,y,z` CSV per gate into the given directory.
//!
//! cargo run --release --example bloch_dynamics [-- <out_dir> <n_atoms>]

use std::f64::consts::FRAC_PI_8;
use std::fs::File;
use std::path::PathBuf;

use twomode::{gate_conditions, trajectory, AcsParams, GateId};

fn main() -> twomode::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "bloch_dynamics".into()));
    let n: usize = args.next().map_or(1000, |s| s.parse().expect("n_atoms must be an integer"));
    std::fs::create_dir_all(&dir)?;
    let initial = AcsParams::new(FRAC_PI_8, 0.0)?;
    for id in GateId::TRANSFER {
        let spec = gate_conditions(id, 1.0, 0.0)?;
        let traj = trajectory(&spec.ideal_params(n)?, &initial, spec.t_gate, 101)?;
        let path = dir.join(format!("{}.csv", id.key()));
        traj.write_csv(File::create(&path)?, 1.0)?;
        let end = traj.points.last().unwrap();
        println!("{id:<3} end = ({:+.6}, {:+.6}, {:+.6}) -> {}", end.x, end.y, end.z, path.display());
    }
    Ok(())
}
