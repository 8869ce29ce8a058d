//! Gate fidelity along the detuning and amplitude error axes.

use satd::experiments::{linspace, sweep_systematic_errors, SweepSettings};
use satd::gates::GateSpec;

fn main() -> satd::Result<()> {
    let s = SweepSettings::default();
    let axis = linspace(-0.15, 0.15, 7);
    let gates = [GateSpec::s(), GateSpec::not()];
    let d = sweep_systematic_errors("delta_cut", &gates, &[2.0], &axis, &[0.0], &s)?;
    let e = sweep_systematic_errors("eps_cut", &gates, &[2.0], &[0.0], &axis, &s)?;
    println!(
        "{:>7} {:>10} {:>10} {:>10} {:>10}",
        "error", "F_S(d)", "F_NOT(d)", "F_S(e)", "F_NOT(e)"
    );
    let cols = [
        d.column("f_s"),
        d.column("f_not"),
        e.column("f_s"),
        e.column("f_not"),
    ]
    .map(Option::unwrap);
    for (i, v) in axis.iter().enumerate() {
        println!(
            "{v:>7.3} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            cols[0][i], cols[1][i], cols[2][i], cols[3][i]
        );
    }
    Ok(())
}
