//! NOT gate on the x path: bare, transitionless and dressed-state drives.

use satd::dynamics::realize_single_qubit;
use satd::experiments::MHZ;
use satd::gates::{avg_gate_fidelity, ideal_gate, GateSpec};
use satd::hamiltonians::Drive;
use satd::satd::SatdOptions;

fn main() -> satd::Result<()> {
    let g = GateSpec::not();
    let target = ideal_gate(&g)?;
    for x in [1.0, 2.0, 4.0, 8.0] {
        let p = g.drive(3.0 * MHZ, 2.0, x, 0.0)?;
        let mut line = format!("x = {x:>3}:");
        for (label, drive) in [
            ("bare", Drive::bare()),
            ("tqd", Drive::corrected(SatdOptions::transitionless())),
            ("satd", Drive::corrected(SatdOptions::default())),
        ] {
            let u = realize_single_qubit(&p, &drive, 1e-8)?.u_final;
            line += &format!(
                "  {label} 1-F = {:.2e}",
                1.0 - avg_gate_fidelity(&target, &u)?
            );
        }
        println!("{line}");
    }
    Ok(())
}
