//! Runs the S gate with the dressed-state corrections and prints its
//! fidelity, phase budget and propagator statistics.

use std::time::Instant;

use satd::experiments::{run_gate, GateRun, MHZ};
use satd::gates::GateSpec;
use satd::hamiltonians::NoiseParams;
use satd::satd::SatdOptions;

fn main() -> satd::Result<()> {
    for (label, satd) in [("bare", None), ("corrected", Some(SatdOptions::default()))] {
        let run = GateRun {
            gate: GateSpec::s(),
            omega0: 3.0 * MHZ,
            eta: 1.0,
            x: 2.0,
            sigma: 0.0,
            satd,
            noise: NoiseParams::default(),
            a_hf: 130.0 * MHZ,
            tol: 1e-8,
            state_grid: 1001,
        };
        let start = Instant::now();
        let rep = run_gate(&run)?;
        println!(
            "{label:>9}: 1 - F = {:.3e}  steps = {}  est_error = {:.1e}  ({:.1} ms)",
            rep.infidelity,
            rep.step_count,
            rep.est_error,
            start.elapsed().as_secs_f64() * 1e3
        );
        if let Some(ph) = rep.phases {
            println!(
                "           gamma_g = {:.6}  gamma_d = {:.3e}  I_phi1 = {:.6}  I_phi2 = {:.6}",
                ph.gamma_g, ph.gamma_d, ph.i_phi1, ph.i_phi2
            );
        }
    }
    Ok(())
}
