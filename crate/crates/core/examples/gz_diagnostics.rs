//! Peak of |g_z/Omega| against eta, and the energy symmetry it restores.

use satd::experiments::{gz_time_series, sweep_gz_diagnostics, SweepSettings};
use satd::gates::GateSpec;

fn main() -> satd::Result<()> {
    let s = SweepSettings::default();
    let etas: Vec<f64> = (5..=40).map(|i| i as f64 / 10.0).collect();
    let r = sweep_gz_diagnostics(&GateSpec::s(), &etas, &[2.0, 4.0], &s)?;
    println!("argmin eta by x: {}", r.extras["argmin_eta_by_x"]);
    let series = gz_time_series(&GateSpec::s(), 1.0, 2.0, 1001, &s)?;
    println!(
        "E_DS symmetry defect / Omega0: with g_z {:.1e}, without {:.3}",
        series.extras["symmetry_defect_gz_over_omega0"]
            .as_f64()
            .unwrap(),
        series.extras["symmetry_defect_no_gz_over_omega0"]
            .as_f64()
            .unwrap()
    );
    Ok(())
}
