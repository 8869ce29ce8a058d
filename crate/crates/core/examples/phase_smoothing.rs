//! Infidelity of the S gate when the phase jumps are smoothed with tanh ramps.

use satd::experiments::{sweep_phase_smoothing, SweepSettings};
use satd::gates::GateSpec;

fn main() -> satd::Result<()> {
    let sigma = [0.0, 2.0, 5.0, 10.0, 20.0];
    let r = sweep_phase_smoothing(
        &GateSpec::s(),
        &sigma,
        &[0.5, 1.0, 2.0],
        0.05,
        &SweepSettings::default(),
    )?;
    let (eta, s, inf, err) = (
        r.column("eta").unwrap(),
        r.column("sigma_ns").unwrap(),
        r.column("infidelity").unwrap(),
        r.column("infidelity_with_errors").unwrap(),
    );
    for i in 0..eta.len() {
        println!(
            "eta = {}  sigma = {:>4} ns  1-F = {:.2e}  with errors {:.2e}",
            eta[i], s[i], inf[i], err[i]
        );
    }
    Ok(())
}
