//! State-averaged fidelity under relaxation and dephasing, with linear fits.

use satd::experiments::{linspace, sweep_lindblad, SweepSettings};
use satd::gates::GateSpec;
use satd::hamiltonians::NoiseParams;

fn main() -> satd::Result<()> {
    let base = NoiseParams::new(0.05, 0.05, 5e-4, 0.0)?;
    let kappa2 = linspace(1e-3, 1e-2, 10);
    let r = sweep_lindblad(
        &[GateSpec::s(), GateSpec::not()],
        &kappa2,
        &base,
        &SweepSettings::default(),
    )?;
    let (fs, fn_) = (r.column("f_s").unwrap(), r.column("f_not").unwrap());
    for (i, k) in kappa2.iter().enumerate() {
        println!(
            "kappa2 = {k:.4} /us  F_S = {:.6}  F_NOT = {:.6}",
            fs[i], fn_[i]
        );
    }
    println!("fits: {}", serde_json::to_string_pretty(&r.extras["fits"])?);
    Ok(())
}
