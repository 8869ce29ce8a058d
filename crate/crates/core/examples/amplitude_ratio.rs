//! Peak amplitude ratio of original to corrected pulses over (eta, x).

use satd::experiments::{sweep_amplitude_ratio, SweepSettings};
use satd::gates::GateSpec;

fn main() -> satd::Result<()> {
    let xs = [0.5, 1.0, 2.0, 4.0, 8.0, 100.0];
    let r = sweep_amplitude_ratio(
        &GateSpec::s(),
        &[0.5, 1.0, 2.0],
        &xs,
        &SweepSettings::default(),
    )?;
    let (eta, x, rr, rd) = (
        r.column("eta").unwrap(),
        r.column("x").unwrap(),
        r.column("r_rabi").unwrap(),
        r.column("r_detuning").unwrap(),
    );
    for i in 0..eta.len() {
        println!(
            "eta = {}  x = {:>5}  R_rabi = {:.4}  R_detuning = {:.4}",
            eta[i], x[i], rr[i], rd[i]
        );
    }
    Ok(())
}
