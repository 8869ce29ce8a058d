//! Dynamical-phase budget with and without the g_z design term.

use satd::dynamics::phase_decomposition;
use satd::experiments::MHZ;
use satd::gates::GateSpec;
use satd::satd::{cancellation_integrands, SatdOptions};

fn main() -> satd::Result<()> {
    for g in [GateSpec::s(), GateSpec::not()] {
        for eta in [0.5, 1.0, 2.0, 4.0] {
            let p = g.drive(3.0 * MHZ, eta, 2.0, 0.0)?;
            let on = phase_decomposition(&p, &SatdOptions::default())?;
            let off = phase_decomposition(&p, &SatdOptions::without_gz())?;
            let (f1, f2) = cancellation_integrands(&p, 0.3 * p.tau(), &SatdOptions::default())?;
            println!(
                "{:?} eta = {eta}: gamma_d = {:+.2e} (g_z on)  {:+.4} (g_z off)  f1 - f2 = {:+.1e}",
                g.kind,
                on.gamma_d,
                off.gamma_d,
                f1 - f2
            );
        }
    }
    Ok(())
}
