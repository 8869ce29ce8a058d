//! Prints the original and corrected pulses of the S gate at a few times.

use satd::experiments::{emit_pulse_comparison, SweepSettings, MHZ};
use satd::gates::GateSpec;
use satd::satd::SatdOptions;

fn main() -> satd::Result<()> {
    let p = GateSpec::s().drive(3.0 * MHZ, 1.0, 2.0, 0.0)?;
    let r = emit_pulse_comparison(
        &p,
        Some(SatdOptions::default()),
        17,
        &SweepSettings::default(),
    )?;
    let col = |name: &str| r.column(name).unwrap();
    let (t, d, w, dt, wt, ft) = (
        col("t_us"),
        col("delta"),
        col("omega_r"),
        col("delta_tilde"),
        col("omega_r_tilde"),
        col("phi_tilde"),
    );
    println!(
        "{:>8} {:>9} {:>9} {:>9} {:>9} {:>8}",
        "t (us)", "Delta", "Omega_R", "Delta~", "Omega_R~", "phi~"
    );
    for i in 0..t.len() {
        println!(
            "{:>8.4} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>8.4}",
            t[i], d[i], w[i], dt[i], wt[i], ft[i]
        );
    }
    println!("open trajectory: {}", r.extras["open_trajectory"]);
    Ok(())
}
