//! Parameter sweeps behind each figure, plus single gate runs.
//!
//! Every sweep is a dense grid over named axes. Rows are evaluated on a
//! rayon pool and collected in grid order, so the data files do not depend
//! on the worker count. Rows that fail are kept, with NaN outputs and a flag.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::dynamics::{
    phase_decomposition, realize_channel, realize_single_qubit, realize_two_qubit,
    PhaseDecomposition,
};
use crate::error::{Error, Result};
use crate::gates::{
    avg_gate_fidelity, channel_state_fidelity, ideal_gate, ideal_two_qubit, GateKind, GateSpec,
    DEFAULT_STATE_GRID,
};
use crate::hamiltonians::{Drive, NoiseParams, TwoQubitParams};
use crate::pulses::{adiabatic_sample, Branch, DriveParams};
use crate::satd::{
    amplitude_ratio, corrected_pulses, max_gz_over_omega, scaling_factor, Channel, SatdOptions,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `2π × 1 MHz` in rad/μs.
pub const MHZ: f64 = 2.0 * PI;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.to_string(),
            values,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    Ok,
    FrameBreakdown,
    Convergence,
    Singular,
    InvalidParameter,
    Failed,
}

impl RowFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::FrameBreakdown => "frame_breakdown",
            RowFlag::Convergence => "convergence",
            RowFlag::Singular => "singular",
            RowFlag::InvalidParameter => "invalid_parameter",
            RowFlag::Failed => "failed",
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::FrameBreakdown { .. } => RowFlag::FrameBreakdown,
            Error::Convergence { .. } => RowFlag::Convergence,
            Error::SingularGeometry { .. } => RowFlag::Singular,
            Error::InvalidParameter { .. } => RowFlag::InvalidParameter,
            _ => RowFlag::Failed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub params: Vec<f64>,
    pub outputs: Vec<f64>,
    pub flag: RowFlag,
    pub runtime_s: f64,
}

/// Settings shared by every sweep. `jobs` only affects wall time and is
/// left out of the metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    /// Rad/μs.
    pub omega0: f64,
    /// `τΩ₀` used by the gate sweeps.
    pub x: f64,
    pub tol: f64,
    #[serde(skip_serializing, default = "default_jobs")]
    pub jobs: usize,
    pub satd: SatdOptions,
    pub state_grid: usize,
    /// Rad/μs, used by controlled gates.
    pub a_hf: f64,
}

fn default_jobs() -> usize {
    1
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            omega0: 3.0 * MHZ,
            x: 2.0,
            tol: 1e-7,
            jobs: 1,
            satd: SatdOptions::default(),
            state_grid: DEFAULT_STATE_GRID,
            a_hf: 130.0 * MHZ,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub sweep_id: String,
    pub axes: Vec<Axis>,
    pub output_names: Vec<String>,
    pub records: Vec<Record>,
    pub settings: SweepSettings,
    /// Sweep-specific derived values (fits, argmins, flags).
    pub extras: Map<String, Value>,
    /// Configuration snapshot of the run that produced this result.
    pub config: Value,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        if let Some(i) = self.output_names.iter().position(|n| n == name) {
            return Some(self.records.iter().map(|r| r.outputs[i]).collect());
        }
        let i = self.axes.iter().position(|a| a.name == name)?;
        Some(self.records.iter().map(|r| r.params[i]).collect())
    }

    pub fn failed_rows(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.flag != RowFlag::Ok)
            .count()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let mut header: Vec<&str> = self.axes.iter().map(|a| a.name.as_str()).collect();
        header.extend(self.output_names.iter().map(String::as_str));
        header.push("flag");
        out.write_record(&header)?;
        for r in &self.records {
            let mut row: Vec<String> = r
                .params
                .iter()
                .chain(&r.outputs)
                .map(|v| format!("{v}"))
                .collect();
            row.push(r.flag.as_str().to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn metadata(&self) -> Value {
        let axes: Map<String, Value> = self
            .axes
            .iter()
            .map(|a| (a.name.clone(), json!(a.values)))
            .collect();
        json!({
            "sweep_id": self.sweep_id,
            "version": VERSION,
            "axes": axes,
            "outputs": self.output_names,
            "records": self.records.len(),
            "failed_records": self.failed_rows(),
            "settings": self.settings,
            "tolerances": {
                "propagator": self.settings.tol,
                "structural": crate::numkit::STRUCTURAL_TOL,
                "accumulated": crate::numkit::ACCUMULATED_TOL,
            },
            "config": self.config,
            "extras": self.extras,
        })
    }

    /// Writes `<id>.csv`, `<id>.json` and `<id>_runtime.csv` into `dir`.
    pub fn write_files(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.sweep_id));
        self.write_csv(fs::File::create(&csv_path)?)?;
        let json_path = dir.join(format!("{}.json", self.sweep_id));
        let mut text = serde_json::to_string_pretty(&self.metadata())?;
        text.push('\n');
        fs::write(&json_path, text)?;
        let rt_path = dir.join(format!("{}_runtime.csv", self.sweep_id));
        let mut rt = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&rt_path)?;
        rt.write_record(["row", "runtime_s"])?;
        for (i, r) in self.records.iter().enumerate() {
            rt.write_record([i.to_string(), format!("{}", r.runtime_s)])?;
        }
        rt.flush()?;
        Ok(vec![csv_path, json_path, rt_path])
    }
}

fn run_grid(
    axes: &[Axis],
    n_out: usize,
    jobs: usize,
    f: impl Fn(&[f64]) -> Result<Vec<f64>> + Sync,
) -> Result<Vec<Record>> {
    if let Some(a) = axes.iter().find(|a| a.values.is_empty()) {
        return Err(Error::param(a.name.clone(), "grid is empty"));
    }
    if let Some(a) = axes
        .iter()
        .find(|a| a.values.iter().any(|v| !v.is_finite()))
    {
        return Err(Error::param(a.name.clone(), "grid has non-finite values"));
    }
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let tuple = |mut idx: usize| -> Vec<f64> {
        let mut out = vec![0.0; axes.len()];
        for (slot, a) in out.iter_mut().zip(axes).rev() {
            *slot = a.values[idx % a.values.len()];
            idx /= a.values.len();
        }
        out
    };
    let eval = |idx: usize| {
        let params = tuple(idx);
        let start = Instant::now();
        let (outputs, flag) = match f(&params) {
            Ok(v) if v.len() == n_out => (v, RowFlag::Ok),
            Ok(_) => (vec![f64::NAN; n_out], RowFlag::Failed),
            Err(e) => (vec![f64::NAN; n_out], RowFlag::from_error(&e)),
        };
        Record {
            params,
            outputs,
            flag,
            runtime_s: start.elapsed().as_secs_f64(),
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..total).into_par_iter().map(eval).collect()))
}

fn result(
    id: &str,
    axes: Vec<Axis>,
    outputs: &[&str],
    records: Vec<Record>,
    s: &SweepSettings,
) -> SweepResult {
    SweepResult {
        sweep_id: id.to_string(),
        axes,
        output_names: outputs.iter().map(|n| n.to_string()).collect(),
        records,
        settings: s.clone(),
        extras: Map::new(),
        config: Value::Null,
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Contract(
            "linear fit needs two or more paired points".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Contract(
            "linear fit needs distinct abscissae".into(),
        ));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

/// Short column label for a gate.
pub fn gate_label(g: &GateSpec) -> String {
    let named = (g.gamma_g - PI / 2.0).abs() < 1e-12;
    match (g.kind, named) {
        (GateKind::Uz, true) => "s".into(),
        (GateKind::Ux, true) => "not".into(),
        (GateKind::ControlledUz, true) => "cs".into(),
        (GateKind::ControlledUx, true) => "cnot".into(),
        (GateKind::Uz, false) => "uz".into(),
        (GateKind::Ux, false) => "ux".into(),
        (GateKind::ControlledUz, false) => "cuz".into(),
        (GateKind::ControlledUx, false) => "cux".into(),
    }
}

/// Average gate fidelity of the closed-system gate against its target.
pub fn gate_fidelity(
    g: &GateSpec,
    p: &DriveParams,
    drive: &Drive,
    a_hf: f64,
    tol: f64,
) -> Result<f64> {
    if g.is_controlled() {
        let q = TwoQubitParams::new(*p, a_hf)?;
        let u = realize_two_qubit(&q, drive, tol)?.u_final;
        avg_gate_fidelity(&ideal_two_qubit(g)?, &u)
    } else {
        let u = realize_single_qubit(p, drive, tol)?.u_final;
        avg_gate_fidelity(&ideal_gate(g)?, &u)
    }
}

/// `fig2`: `R = max|z| / max|z̃|` for both channels over `(η, x)`.
pub fn sweep_amplitude_ratio(
    g: &GateSpec,
    eta_grid: &[f64],
    x_grid: &[f64],
    s: &SweepSettings,
) -> Result<SweepResult> {
    check_range("eta", eta_grid, 0.0, 10.0)?;
    check_range("x", x_grid, 0.0, 100.0)?;
    let axes = vec![
        Axis::new("eta", eta_grid.to_vec()),
        Axis::new("x", x_grid.to_vec()),
    ];
    let records = run_grid(&axes, 2, s.jobs, |v| {
        let p = g.drive(s.omega0, v[0], v[1], 0.0)?;
        Ok(vec![
            amplitude_ratio(&p, Channel::Rabi, &s.satd)?,
            amplitude_ratio(&p, Channel::Detuning, &s.satd)?,
        ])
    })?;
    Ok(result(
        "fig2_amplitude_ratio",
        axes,
        &["r_rabi", "r_detuning"],
        records,
        s,
    ))
}

fn check_range(key: &str, grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    match grid.iter().find(|v| !(**v > lo && **v <= hi)) {
        Some(v) => Err(Error::param(key, format!("value {v} outside ({lo}, {hi}]"))),
        None => Ok(()),
    }
}

/// `fig3`: peak of `|g_z/Ω|` over `(η, x)`, with the per-`x` argmin in
/// the extras.
pub fn sweep_gz_diagnostics(
    g: &GateSpec,
    eta_grid: &[f64],
    x_values: &[f64],
    s: &SweepSettings,
) -> Result<SweepResult> {
    check_range("eta", eta_grid, 0.0, 10.0)?;
    check_range("x", x_values, 0.0, 100.0)?;
    let axes = vec![
        Axis::new("eta", eta_grid.to_vec()),
        Axis::new("x", x_values.to_vec()),
    ];
    let records = run_grid(&axes, 2, s.jobs, |v| {
        let peak = max_gz_over_omega(&g.drive(s.omega0, v[0], v[1], 0.0)?)?;
        Ok(vec![peak, peak * v[1] * v[1]])
    })?;
    let mut r = result(
        "fig3_gz_peak",
        axes,
        &["max_gz_over_omega", "peak_times_x2"],
        records,
        s,
    );
    let mut argmins = Map::new();
    for &x in x_values {
        let best = r
            .records
            .iter()
            .filter(|rec| rec.params[1] == x && rec.flag == RowFlag::Ok)
            .min_by(|a, b| a.outputs[0].total_cmp(&b.outputs[0]))
            .map(|rec| rec.params[0]);
        argmins.insert(format!("{x}"), json!(best));
    }
    r.extras
        .insert("argmin_eta_by_x".into(), Value::Object(argmins));
    Ok(r)
}

/// `fig3` time series: `E_DS` with and without `g_z`, and `g_z + Ω₀`, over one gate.
pub fn gz_time_series(
    g: &GateSpec,
    eta: f64,
    x: f64,
    points: usize,
    s: &SweepSettings,
) -> Result<SweepResult> {
    let p = g.drive(s.omega0, eta, x, 0.0)?;
    let ts = linspace(0.0, p.total_time(), points.max(3));
    let with = s.satd;
    let without = SatdOptions {
        gz: crate::satd::GzMode::Off,
        ..s.satd
    };
    let axes = vec![Axis::new("t_us", ts)];
    let records = run_grid(&axes, 5, s.jobs, |v| {
        let a = corrected_pulses(&p, v[0], &with)?;
        let b = corrected_pulses(&p, v[0], &without)?;
        Ok(vec![
            a.e_ds,
            b.e_ds,
            a.g_z + p.omega0(),
            a.g_z,
            scaling_factor(&p, v[0])?,
        ])
    })?;
    let mut r = result(
        "fig3_energy_series",
        axes,
        &[
            "e_ds_gz",
            "e_ds_no_gz",
            "gz_plus_omega0",
            "gz",
            "scaling_factor",
        ],
        records,
        s,
    );
    let defect = |col: usize| {
        let v: Vec<f64> = r.records.iter().map(|rec| rec.outputs[col]).collect();
        let n = v.len();
        (0..n)
            .map(|i| (v[i] - v[n - 1 - i]).abs())
            .fold(0.0, f64::max)
            / p.omega0()
    };
    let (d_gz, d_off) = (defect(0), defect(1));
    r.extras.insert("eta".into(), json!(eta));
    r.extras.insert("x".into(), json!(x));
    r.extras
        .insert("symmetry_defect_gz_over_omega0".into(), json!(d_gz));
    r.extras
        .insert("symmetry_defect_no_gz_over_omega0".into(), json!(d_off));
    Ok(r)
}

/// `fig4` and `fig5`: gate fidelity against static errors `(δ, ε)` for each gate.
pub fn sweep_systematic_errors(
    sweep_id: &str,
    gates: &[GateSpec],
    eta_values: &[f64],
    delta_grid: &[f64],
    eps_grid: &[f64],
    s: &SweepSettings,
) -> Result<SweepResult> {
    check_range("eta", eta_values, 0.0, 10.0)?;
    let axes = vec![
        Axis::new("eta", eta_values.to_vec()),
        Axis::new("delta", delta_grid.to_vec()),
        Axis::new("eps", eps_grid.to_vec()),
    ];
    let names: Vec<String> = gates
        .iter()
        .map(|g| format!("f_{}", gate_label(g)))
        .collect();
    let records = run_grid(&axes, gates.len(), s.jobs, |v| {
        let noise = NoiseParams::systematic(v[1], v[2])?;
        let drive = Drive::corrected(s.satd).with_noise(noise);
        gates
            .iter()
            .map(|g| {
                gate_fidelity(
                    g,
                    &g.drive(s.omega0, v[0], s.x, 0.0)?,
                    &drive,
                    s.a_hf,
                    s.tol,
                )
            })
            .collect()
    })?;
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(result(sweep_id, axes, &names, records, s))
}

/// `fig6`: state-averaged fidelity against the dephasing rate, with a
/// linear fit per gate in the extras.
pub fn sweep_lindblad(
    gates: &[GateSpec],
    kappa2_grid: &[f64],
    base: &NoiseParams,
    s: &SweepSettings,
) -> Result<SweepResult> {
    if let Some(g) = gates.iter().find(|g| g.is_controlled()) {
        return Err(Error::param(
            "gate",
            format!(
                "{} is a two-qubit gate; decoherence is modelled for single qubits",
                gate_label(g)
            ),
        ));
    }
    let axes = vec![Axis::new("kappa2", kappa2_grid.to_vec())];
    let names: Vec<String> = gates
        .iter()
        .map(|g| format!("f_{}", gate_label(g)))
        .collect();
    let records = run_grid(&axes, gates.len(), s.jobs, |v| {
        let noise = NoiseParams::new(base.delta_err, base.eps_err, base.kappa1, v[0])?;
        let drive = Drive::corrected(s.satd).with_noise(noise);
        gates
            .iter()
            .map(|g| {
                let ch = realize_channel(&g.drive(s.omega0, 2.0, s.x, 0.0)?, &drive, s.tol)?;
                channel_state_fidelity(g, &ch, s.state_grid)
            })
            .collect()
    })?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut r = result("fig6_lindblad", axes, &refs, records, s);
    let mut fits = Map::new();
    for name in &names {
        let y = r.column(name).expect("column exists");
        if y.iter().all(|v| v.is_finite()) && kappa2_grid.len() >= 2 {
            fits.insert(name.clone(), json!(linear_fit(kappa2_grid, &y)?));
        }
    }
    r.extras.insert("fits".into(), Value::Object(fits));
    r.extras.insert("noise".into(), json!(base));
    r.extras.insert("eta".into(), json!(2.0));
    Ok(r)
}

/// η used by the fixed-η sweeps (`fig5` to `fig7`).
pub const OPERATING_ETA: f64 = 2.0;

/// `fig7`: controlled-gate infidelity against the hyperfine coupling.
pub fn sweep_hyperfine(
    g: &GateSpec,
    a_hf_mhz: &[f64],
    noise: &NoiseParams,
    s: &SweepSettings,
) -> Result<SweepResult> {
    if !g.is_controlled() {
        return Err(Error::param(
            "gate",
            "the hyperfine sweep needs a controlled gate",
        ));
    }
    check_range("a_hf_mhz", a_hf_mhz, 0.0, f64::MAX)?;
    let axes = vec![Axis::new("a_hf_mhz", a_hf_mhz.to_vec())];
    let drive = Drive::corrected(s.satd).with_noise(*noise);
    let p = g.drive(s.omega0, OPERATING_ETA, s.x, 0.0)?;
    let records = run_grid(&axes, 2, s.jobs, |v| {
        let f = gate_fidelity(g, &p, &drive, v[0] * MHZ, s.tol)?;
        Ok(vec![f, 1.0 - f])
    })?;
    let mut r = result(
        &format!("fig7_hyperfine_{}", gate_label(g)),
        axes,
        &["fidelity", "infidelity"],
        records,
        s,
    );
    let single = gate_fidelity(&g.target(), &p, &drive, s.a_hf, s.tol)?;
    r.extras
        .insert("single_qubit_infidelity".into(), json!(1.0 - single));
    r.extras.insert("noise".into(), json!(noise));
    r.extras.insert("eta".into(), json!(OPERATING_ETA));
    Ok(r)
}

/// `figA1`: infidelity against the phase-smoothing width.
pub fn sweep_phase_smoothing(
    g: &GateSpec,
    sigma_ns: &[f64],
    eta_values: &[f64],
    error_point: f64,
    s: &SweepSettings,
) -> Result<SweepResult> {
    check_range("eta", eta_values, 0.0, 10.0)?;
    let axes = vec![
        Axis::new("eta", eta_values.to_vec()),
        Axis::new("sigma_ns", sigma_ns.to_vec()),
    ];
    let no_rate = SatdOptions {
        phase_rate_terms: false,
        ..s.satd
    };
    let noisy = NoiseParams::systematic(error_point, error_point)?;
    let records = run_grid(&axes, 3, s.jobs, |v| {
        let p = g.drive(s.omega0, v[0], s.x, v[1] * 1e-3)?;
        let a = gate_fidelity(g, &p, &Drive::corrected(s.satd), s.a_hf, s.tol)?;
        let b = gate_fidelity(g, &p, &Drive::corrected(no_rate), s.a_hf, s.tol)?;
        let c = gate_fidelity(
            g,
            &p,
            &Drive::corrected(s.satd).with_noise(noisy),
            s.a_hf,
            s.tol,
        )?;
        Ok(vec![1.0 - a, 1.0 - b, 1.0 - c])
    })?;
    let mut r = result(
        "figA1_phase_smoothing",
        axes,
        &[
            "infidelity",
            "infidelity_no_phase_rate",
            "infidelity_with_errors",
        ],
        records,
        s,
    );
    r.extras.insert("error_point".into(), json!(error_point));
    Ok(r)
}

/// `figA2`: original and corrected pulses on a uniform time grid. With
/// `satd = None` the corrected columns repeat the bare pulses.
pub fn emit_pulse_comparison(
    p: &DriveParams,
    satd: Option<SatdOptions>,
    points: usize,
    s: &SweepSettings,
) -> Result<SweepResult> {
    let ts = linspace(0.0, p.total_time(), points.max(2));
    let axes = vec![Axis::new("t_us", ts)];
    let names = [
        "delta",
        "omega_r",
        "phi",
        "theta",
        "delta_tilde",
        "omega_r_tilde",
        "phi_tilde",
        "theta_tilde",
        "g_x",
        "g_z",
        "mu",
        "e_ds",
    ];
    let records = run_grid(&axes, names.len(), s.jobs, |v| {
        let a = adiabatic_sample(p, v[0])?;
        let tracked = |raw: f64| match a.branch {
            Branch::Upper => raw,
            Branch::Lower => PI - raw,
        };
        let (dt, wt, ft, gx, gz, mu, e) = match &satd {
            Some(opts) => {
                let c = corrected_pulses(p, v[0], opts)?;
                (
                    c.delta_tilde,
                    c.omega_r_tilde,
                    c.phi_tilde,
                    c.g_x,
                    c.g_z,
                    c.mu,
                    c.e_ds,
                )
            }
            None => (a.delta, a.omega_r, a.phi, 0.0, 0.0, 0.0, a.omega),
        };
        Ok(vec![
            a.delta,
            a.omega_r,
            a.phi,
            a.state_theta(),
            dt,
            wt,
            ft,
            tracked(wt.atan2(dt)),
            gx,
            gz,
            mu,
            e,
        ])
    })?;
    let mut r = result("figA2_pulses", axes, &names, records, s);
    let w0 = r
        .records
        .first()
        .map(|rec| rec.outputs[5])
        .unwrap_or(f64::NAN);
    let th_end = r
        .records
        .last()
        .map(|rec| rec.outputs[7])
        .unwrap_or(f64::NAN);
    let dev = r
        .records
        .iter()
        .map(|rec| (rec.outputs[5] - rec.outputs[1]).abs())
        .fold(0.0, f64::max)
        / p.omega0();
    r.extras.insert("drive".into(), json!(p));
    r.extras.insert("eta".into(), json!(p.eta()));
    r.extras.insert("x".into(), json!(p.x()));
    r.extras.insert("satd".into(), json!(satd));
    r.extras.insert("omega_r_tilde_at_start".into(), json!(w0));
    r.extras
        .insert("open_trajectory".into(), json!(w0 > 1e-9 * p.omega0()));
    r.extras.insert("theta_tilde_at_end".into(), json!(th_end));
    r.extras
        .insert("max_rabi_deviation_over_omega0".into(), json!(dev));
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    FigA1,
    FigA2,
}

impl Figure {
    pub const ALL: [Figure; 8] = [
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::FigA1,
        Figure::FigA2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::FigA1 => "figA1",
            Figure::FigA2 => "figA2",
        }
    }

    pub fn parse(name: &str) -> Option<Figure> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }
}

/// Grids and fixed operating points for every figure sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FigureGrids {
    pub fig2_eta: Vec<f64>,
    pub fig2_x: Vec<f64>,
    pub fig3_eta: Vec<f64>,
    pub fig3_x: Vec<f64>,
    pub fig3_series_eta: f64,
    pub fig3_series_x: f64,
    pub series_points: usize,
    pub fig4_eta: Vec<f64>,
    pub fig4_axis: Vec<f64>,
    pub fig5_eta: f64,
    pub fig5_axis: Vec<f64>,
    pub fig6_kappa2: Vec<f64>,
    pub fig6_kappa1: f64,
    pub fig6_errors: f64,
    pub fig7_ahf_mhz: Vec<f64>,
    pub fig7_errors: f64,
    #[serde(rename = "figA1_sigma_ns")]
    pub fig_a1_sigma_ns: Vec<f64>,
    #[serde(rename = "figA1_eta")]
    pub fig_a1_eta: Vec<f64>,
    #[serde(rename = "figA1_errors")]
    pub fig_a1_errors: f64,
    #[serde(rename = "figA2_eta")]
    pub fig_a2_eta: f64,
    #[serde(rename = "figA2_x")]
    pub fig_a2_x: f64,
}

impl Default for FigureGrids {
    fn default() -> Self {
        Self {
            fig2_eta: linspace(0.1, 4.0, 60),
            fig2_x: linspace(0.5, 6.0, 60),
            fig3_eta: (1..=50).map(|i| i as f64 / 10.0).collect(),
            fig3_x: vec![2.0, 4.0],
            fig3_series_eta: 1.0,
            fig3_series_x: 2.0,
            series_points: 2001,
            fig4_eta: vec![0.5, 1.0, 2.0, 4.0],
            fig4_axis: linspace(-0.15, 0.15, 51),
            fig5_eta: OPERATING_ETA,
            fig5_axis: linspace(-0.15, 0.15, 51),
            fig6_kappa2: linspace(1e-3, 1e-2, 50),
            fig6_kappa1: 5e-4,
            fig6_errors: 0.05,
            fig7_ahf_mhz: logspace(10.0, 500.0, 50),
            fig7_errors: 0.0,
            fig_a1_sigma_ns: linspace(0.0, 20.0, 51),
            fig_a1_eta: vec![0.5, 1.0, 2.0, 4.0],
            fig_a1_errors: 0.05,
            fig_a2_eta: 1.0,
            fig_a2_x: 2.0,
        }
    }
}

impl FigureGrids {
    /// Re-samples the main axes of `fig` at resolution `n × m` over the same
    /// ranges (`m` is ignored by one-dimensional sweeps).
    pub fn with_resolution(mut self, fig: Figure, n: usize, m: usize) -> Result<Self> {
        if n < 2 || m < 1 {
            return Err(Error::param(
                "grid",
                format!("resolution {n}x{m} is too small"),
            ));
        }
        let span = |v: &[f64]| (v[0], v[v.len() - 1]);
        match fig {
            Figure::Fig2 => {
                let (a, b) = span(&self.fig2_eta);
                let (c, d) = span(&self.fig2_x);
                self.fig2_eta = linspace(a, b, n);
                self.fig2_x = linspace(c, d, m.max(2));
            }
            Figure::Fig3 => {
                let (a, b) = span(&self.fig3_eta);
                self.fig3_eta = linspace(a, b, n);
            }
            Figure::Fig4 => {
                let (a, b) = span(&self.fig4_axis);
                self.fig4_axis = linspace(a, b, n);
            }
            Figure::Fig5 => {
                let (a, b) = span(&self.fig5_axis);
                self.fig5_axis = linspace(a, b, n.max(m));
            }
            Figure::Fig6 => {
                let (a, b) = span(&self.fig6_kappa2);
                self.fig6_kappa2 = linspace(a, b, n);
            }
            Figure::Fig7 => {
                let (a, b) = span(&self.fig7_ahf_mhz);
                self.fig7_ahf_mhz = logspace(a, b, n);
            }
            Figure::FigA1 => {
                let (a, b) = span(&self.fig_a1_sigma_ns);
                self.fig_a1_sigma_ns = linspace(a, b, n);
            }
            Figure::FigA2 => self.series_points = n,
        }
        Ok(self)
    }
}

/// Runs every sweep belonging to `fig`.
pub fn run_figure(fig: Figure, grids: &FigureGrids, s: &SweepSettings) -> Result<Vec<SweepResult>> {
    let (sg, ng) = (GateSpec::s(), GateSpec::not());
    let out = match fig {
        Figure::Fig2 => vec![sweep_amplitude_ratio(
            &sg,
            &grids.fig2_eta,
            &grids.fig2_x,
            s,
        )?],
        Figure::Fig3 => vec![
            sweep_gz_diagnostics(&sg, &grids.fig3_eta, &grids.fig3_x, s)?,
            gz_time_series(
                &sg,
                grids.fig3_series_eta,
                grids.fig3_series_x,
                grids.series_points,
                s,
            )?,
        ],
        Figure::Fig4 => vec![
            sweep_systematic_errors(
                "fig4_delta_cut",
                &[sg, ng],
                &grids.fig4_eta,
                &grids.fig4_axis,
                &[0.0],
                s,
            )?,
            sweep_systematic_errors(
                "fig4_eps_cut",
                &[sg, ng],
                &grids.fig4_eta,
                &[0.0],
                &grids.fig4_axis,
                s,
            )?,
        ],
        Figure::Fig5 => vec![sweep_systematic_errors(
            "fig5_error_map",
            &[sg, ng, GateSpec::cs(), GateSpec::cnot()],
            &[grids.fig5_eta],
            &grids.fig5_axis,
            &grids.fig5_axis,
            s,
        )?],
        Figure::Fig6 => {
            let base =
                NoiseParams::new(grids.fig6_errors, grids.fig6_errors, grids.fig6_kappa1, 0.0)?;
            vec![sweep_lindblad(&[sg, ng], &grids.fig6_kappa2, &base, s)?]
        }
        Figure::Fig7 => {
            let noise = NoiseParams::systematic(grids.fig7_errors, grids.fig7_errors)?;
            vec![sweep_hyperfine(
                &GateSpec::cs(),
                &grids.fig7_ahf_mhz,
                &noise,
                s,
            )?]
        }
        Figure::FigA1 => vec![sweep_phase_smoothing(
            &sg,
            &grids.fig_a1_sigma_ns,
            &grids.fig_a1_eta,
            grids.fig_a1_errors,
            s,
        )?],
        Figure::FigA2 => {
            let p = sg.drive(s.omega0, grids.fig_a2_eta, grids.fig_a2_x, 0.0)?;
            vec![emit_pulse_comparison(
                &p,
                Some(s.satd),
                grids.series_points,
                s,
            )?]
        }
    };
    Ok(out)
}

/// Inputs of a single gate run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateRun {
    pub gate: GateSpec,
    pub omega0: f64,
    pub eta: f64,
    pub x: f64,
    pub sigma: f64,
    /// `None` drives with the bare pulses.
    pub satd: Option<SatdOptions>,
    pub noise: NoiseParams,
    pub a_hf: f64,
    pub tol: f64,
    pub state_grid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateReport {
    pub gate: String,
    pub eta: f64,
    pub x: f64,
    pub fidelity: f64,
    pub infidelity: f64,
    /// State-averaged fidelity under decoherence, when any rate is nonzero.
    pub state_avg_fidelity: Option<f64>,
    pub phases: Option<PhaseDecomposition>,
    pub step_count: usize,
    pub est_error: f64,
}

pub fn run_gate(run: &GateRun) -> Result<GateReport> {
    let g = &run.gate;
    let p = g.drive(run.omega0, run.eta, run.x, run.sigma)?;
    let drive = Drive {
        satd: run.satd,
        noise: NoiseParams {
            kappa1: 0.0,
            kappa2: 0.0,
            ..run.noise
        },
    };
    let (u, ideal, steps, err) = if g.is_controlled() {
        let r = realize_two_qubit(&TwoQubitParams::new(p, run.a_hf)?, &drive, run.tol)?;
        (r.u_final, ideal_two_qubit(g)?, r.step_count, r.est_error)
    } else {
        let r = realize_single_qubit(&p, &drive, run.tol)?;
        (r.u_final, ideal_gate(g)?, r.step_count, r.est_error)
    };
    let fidelity = avg_gate_fidelity(&ideal, &u)?;
    let state_avg_fidelity = if run.noise.is_closed() {
        None
    } else if g.is_controlled() {
        return Err(Error::param(
            "kappa1/kappa2",
            "decoherence is modelled for single-qubit gates only",
        ));
    } else {
        let ch = realize_channel(
            &p,
            &Drive {
                noise: run.noise,
                ..drive
            },
            run.tol,
        )?;
        Some(channel_state_fidelity(g, &ch, run.state_grid)?)
    };
    let phases = match (&run.satd, run.sigma) {
        (Some(opts), 0.0) => Some(phase_decomposition(&p, opts)?),
        _ => None,
    };
    Ok(GateReport {
        gate: gate_label(g),
        eta: run.eta,
        x: run.x,
        fidelity,
        infidelity: 1.0 - fidelity,
        state_avg_fidelity,
        phases,
        step_count: steps,
        est_error: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SweepSettings {
        SweepSettings {
            tol: 1e-6,
            jobs: 2,
            state_grid: 101,
            ..SweepSettings::default()
        }
    }

    #[test]
    fn grid_order_is_row_major() {
        let axes = vec![
            Axis::new("a", vec![1.0, 2.0]),
            Axis::new("b", vec![10.0, 20.0, 30.0]),
        ];
        let rows = run_grid(&axes, 1, 3, |v| Ok(vec![v[0] * 100.0 + v[1]])).unwrap();
        let got: Vec<f64> = rows.iter().map(|r| r.outputs[0]).collect();
        assert_eq!(got, vec![110.0, 120.0, 130.0, 210.0, 220.0, 230.0]);
    }

    #[test]
    fn failing_rows_are_flagged_not_dropped() {
        let axes = vec![Axis::new("a", vec![1.0, -1.0, 2.0])];
        let rows = run_grid(&axes, 1, 2, |v| {
            if v[0] < 0.0 {
                Err(Error::FrameBreakdown { t: 0.0 })
            } else {
                Ok(vec![v[0]])
            }
        })
        .unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].flag, RowFlag::FrameBreakdown);
        assert!(rows[1].outputs[0].is_nan());
        assert_eq!(rows[2].outputs[0], 2.0);
    }

    #[test]
    fn linear_fit_recovers_a_line() {
        let x = linspace(0.0, 1.0, 11);
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 0.5 * v).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.intercept - 3.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_is_deterministic_across_worker_counts() {
        let g = GateSpec::s();
        let mut a = quick();
        a.jobs = 1;
        let mut b = quick();
        b.jobs = 4;
        let render = |s: &SweepSettings| {
            let r = sweep_amplitude_ratio(&g, &[0.5, 1.0, 2.0], &[1.0, 3.0], s).unwrap();
            let mut buf = Vec::new();
            r.write_csv(&mut buf).unwrap();
            (
                String::from_utf8(buf).unwrap(),
                serde_json::to_string(&r.metadata()).unwrap(),
            )
        };
        assert_eq!(render(&a), render(&b));
    }

    #[test]
    fn csv_layout() {
        let r = sweep_gz_diagnostics(&GateSpec::s(), &[1.0, 2.0], &[2.0], &quick()).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "eta,x,max_gz_over_omega,peak_times_x2,flag"
        );
        assert_eq!(text.lines().count(), 3);
        assert!(!text.contains('\r'));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        let peak: f64 = first[2].parse().unwrap();
        assert_eq!(peak, r.records[0].outputs[0]);
    }

    #[test]
    fn out_of_range_grid_is_rejected() {
        let s = quick();
        assert!(matches!(
            sweep_amplitude_ratio(&GateSpec::s(), &[0.0], &[1.0], &s),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(sweep_amplitude_ratio(&GateSpec::s(), &[1.0], &[101.0], &s).is_err());
    }

    #[test]
    fn pulse_comparison_signatures() {
        let p = GateSpec::s().drive(3.0 * MHZ, 1.0, 2.0, 0.0).unwrap();
        let r = emit_pulse_comparison(&p, Some(SatdOptions::default()), 401, &quick()).unwrap();
        assert_eq!(r.extras["open_trajectory"], json!(true));
        assert!(r.extras["theta_tilde_at_end"].as_f64().unwrap().abs() < 1e-9);
        let flat = GateSpec::not().drive(3.0 * MHZ, 1.0, 100.0, 0.0).unwrap();
        let r = emit_pulse_comparison(&flat, Some(SatdOptions::default()), 2001, &quick()).unwrap();
        assert!(r.extras["max_rabi_deviation_over_omega0"].as_f64().unwrap() < 1e-3);
    }

    #[test]
    fn energy_series_is_symmetric_with_gz() {
        let r = gz_time_series(&GateSpec::s(), 1.0, 2.0, 801, &quick()).unwrap();
        assert!(r.extras["symmetry_defect_gz_over_omega0"].as_f64().unwrap() < 1e-9);
        assert!(
            r.extras["symmetry_defect_no_gz_over_omega0"]
                .as_f64()
                .unwrap()
                > 1e-3
        );
    }

    #[test]
    fn gate_run_reports_phases() {
        let run = GateRun {
            gate: GateSpec::s(),
            omega0: 3.0 * MHZ,
            eta: 1.0,
            x: 2.0,
            sigma: 0.0,
            satd: Some(SatdOptions::default()),
            noise: NoiseParams::default(),
            a_hf: 130.0 * MHZ,
            tol: 1e-8,
            state_grid: 101,
        };
        let rep = run_gate(&run).unwrap();
        assert!(rep.infidelity < 1e-6);
        assert!(rep.phases.as_ref().unwrap().gamma_d.abs() < 1e-8);
        let off = run_gate(&GateRun {
            satd: Some(SatdOptions::without_gz()),
            ..run.clone()
        })
        .unwrap();
        assert!(off.phases.unwrap().gamma_d.abs() > 1e-3);
    }

    #[test]
    fn figure_names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(Figure::parse(f.name()), Some(f));
        }
        assert_eq!(Figure::parse("fig9"), None);
    }
}
