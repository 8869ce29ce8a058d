//! CS and CNOT on the electron-nuclear pair, against the hyperfine coupling.

use satd::experiments::{gate_fidelity, MHZ};
use satd::gates::GateSpec;
use satd::hamiltonians::{Drive, NoiseParams};
use satd::satd::SatdOptions;

fn main() -> satd::Result<()> {
    let clean = Drive::corrected(SatdOptions::default());
    let noisy = clean.with_noise(NoiseParams::systematic(0.05, 0.05)?);
    for g in [GateSpec::cs(), GateSpec::cnot()] {
        let p = g.drive(3.0 * MHZ, 2.0, 2.0, 0.0)?;
        for a in [30.0, 130.0, 500.0] {
            let f0 = gate_fidelity(&g, &p, &clean, a * MHZ, 1e-7)?;
            let f1 = gate_fidelity(&g, &p, &noisy, a * MHZ, 1e-7)?;
            println!(
                "{:?} A_hf = {a:>5} MHz: F = {f0:.6}  F(d = e = 0.05) = {f1:.6}",
                g.kind
            );
        }
    }
    Ok(())
}
