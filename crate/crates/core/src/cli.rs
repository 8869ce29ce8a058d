//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage and configuration errors, 3 for
//! numerical failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_grid, parse_range, GateAxis, GateName, RunConfig};
use crate::error::{Error, Result};
use crate::experiments::{emit_pulse_comparison, run_figure, run_gate, Figure, SweepResult};

const UNITS: &str = "Units: frequencies are f/2π in MHz (--omega0-mhz, --ahf-mhz), \
sigma in ns, decay rates kappa1/kappa2 in 1/μs, times in output tables in μs. \
delta and eps are fractional errors (δ·Ω₀ detuning shift, (1+ε) Rabi scale). \
eta = Δ₀/Ω₀ and x = τΩ₀ are dimensionless.";

#[derive(Parser, Debug)]
#[command(name = "satd", version, about = "Geometric qubit gates with dressed-state corrections", after_help = UNITS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate original and corrected pulses for one gate.
    #[command(after_help = UNITS)]
    Pulses {
        #[command(flatten)]
        common: Common,
        /// Number of time samples.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Propagate one gate and report its fidelity and phases.
    #[command(after_help = UNITS)]
    Gate {
        #[command(flatten)]
        common: Common,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a figure sweep and write CSV plus JSON metadata.
    #[command(after_help = UNITS)]
    Sweep {
        /// One of fig2, fig3, fig4, fig5, fig6, fig7, figA1, figA2.
        name: String,
        #[command(flatten)]
        common: Common,
        /// Main grid resolution, `NxM` or `N`.
        #[arg(long)]
        grid: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GateArg {
    S,
    Not,
    Cs,
    Cnot,
    Custom,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AxisArg {
    Z,
    X,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    gate: Option<GateArg>,
    /// Rotation axis of a custom gate.
    #[arg(long, value_enum)]
    axis: Option<AxisArg>,
    /// Make a custom gate controlled by the nuclear spin.
    #[arg(long)]
    controlled: bool,
    /// Geometric phase of a custom gate (rad).
    #[arg(long, allow_negative_numbers = true)]
    gamma_g: Option<f64>,
    /// Second meridian φ₂ of a custom gate (rad); γ_g = π − φ₂.
    #[arg(long, allow_negative_numbers = true)]
    phi2: Option<f64>,
    /// Δ₀/Ω₀.
    #[arg(long)]
    eta: Option<f64>,
    /// τΩ₀.
    #[arg(long)]
    x: Option<f64>,
    /// Ω₀/2π in MHz.
    #[arg(long)]
    omega0_mhz: Option<f64>,
    /// Phase smoothing width in ns; `figA1` also accepts `a:b:step` or a list.
    #[arg(long)]
    sigma_ns: Option<String>,
    /// Fractional detuning error.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Fractional Rabi-amplitude error.
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Relaxation rate in 1/μs.
    #[arg(long)]
    kappa1: Option<f64>,
    /// Dephasing rate in 1/μs.
    #[arg(long)]
    kappa2: Option<f64>,
    /// Hyperfine coupling A_hf/2π in MHz.
    #[arg(long)]
    ahf_mhz: Option<f64>,
    /// Drop the g_z term.
    #[arg(long)]
    no_gz: bool,
    /// Use the corrected pulses (default).
    #[arg(long, conflicts_with = "no_satd")]
    satd: bool,
    /// Use the bare pulses.
    #[arg(long)]
    no_satd: bool,
    /// Transitionless driving instead of the dressed-state scheme.
    #[arg(long)]
    tqd: bool,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Propagator tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

impl Common {
    fn resolve(&self, sweep: bool) -> Result<(RunConfig, Option<Vec<f64>>)> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(g) = self.gate {
            cfg.gate.name = match g {
                GateArg::S => GateName::S,
                GateArg::Not => GateName::Not,
                GateArg::Cs => GateName::Cs,
                GateArg::Cnot => GateName::Cnot,
                GateArg::Custom => GateName::Custom,
            };
        }
        if let Some(a) = self.axis {
            cfg.gate.axis = match a {
                AxisArg::Z => GateAxis::Z,
                AxisArg::X => GateAxis::X,
            };
        }
        cfg.gate.controlled |= self.controlled;
        if self.gamma_g.is_some() {
            cfg.gate.gamma_g = self.gamma_g;
        }
        if self.phi2.is_some() {
            cfg.gate.phi2 = self.phi2;
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.drive.eta, self.eta);
        set(&mut cfg.drive.x, self.x);
        set(&mut cfg.drive.omega0_mhz, self.omega0_mhz);
        set(&mut cfg.two_qubit.ahf_mhz, self.ahf_mhz);
        set(&mut cfg.numerics.tol, self.tol);
        let noise_flags = [self.delta, self.eps, self.kappa1, self.kappa2];
        if sweep && noise_flags.iter().any(Option::is_some) {
            return Err(Error::param(
                "delta/eps/kappa1/kappa2",
                "sweeps take their error and decay values from [grids] in the config file",
            ));
        }
        set(&mut cfg.noise.delta, self.delta);
        set(&mut cfg.noise.eps, self.eps);
        set(&mut cfg.noise.kappa1, self.kappa1);
        set(&mut cfg.noise.kappa2, self.kappa2);
        if let Some(j) = self.jobs {
            cfg.numerics.jobs = j;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if self.no_gz {
            cfg.satd.gz = false;
        }
        if self.satd {
            cfg.satd.enabled = true;
        }
        if self.no_satd {
            cfg.satd.enabled = false;
        }
        if self.tqd {
            cfg.satd.tqd = true;
        }
        let mut sigma_grid = None;
        if let Some(text) = &self.sigma_ns {
            let values = parse_range("sigma-ns", text)?;
            match values.as_slice() {
                [v] => cfg.drive.sigma_ns = *v,
                _ if sweep => sigma_grid = Some(values),
                _ => return Err(Error::param("sigma-ns", "a single value is expected here")),
            }
        }
        cfg.validate()?;
        Ok((cfg, sigma_grid))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_config() {
                2
            } else {
                3
            }
        }
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Pulses { common, points } => {
            let (mut cfg, _) = common.resolve(false)?;
            if let Some(n) = points {
                cfg.numerics.points = n;
                cfg.validate()?;
            }
            let run = cfg.gate_run()?;
            let p = run.gate.drive(run.omega0, run.eta, run.x, run.sigma)?;
            let mut settings =
                cfg.sweep_settings()
                    .unwrap_or_else(|_| crate::experiments::SweepSettings {
                        jobs: cfg.numerics.jobs,
                        ..Default::default()
                    });
            settings.jobs = cfg.numerics.jobs;
            let mut r = emit_pulse_comparison(&p, run.satd, cfg.numerics.points, &settings)?;
            r.sweep_id = "pulses".into();
            r.config = cfg.snapshot();
            write_result(&r, &cfg, out, err)
        }
        Command::Gate { common, json } => {
            let (cfg, _) = common.resolve(false)?;
            let report = run_gate(&cfg.gate_run()?)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(out, "gate            {}", report.gate)?;
                writeln!(out, "fidelity        {:.12}", report.fidelity)?;
                writeln!(out, "infidelity      {:.6e}", report.infidelity)?;
                if let Some(f) = report.state_avg_fidelity {
                    writeln!(out, "state-avg F     {f:.12}")?;
                }
                if let Some(ph) = &report.phases {
                    writeln!(out, "gamma_g         {:.12}", ph.gamma_g)?;
                    writeln!(out, "gamma_d         {:.6e}", ph.gamma_d)?;
                }
                writeln!(out, "steps           {}", report.step_count)?;
                writeln!(out, "est. error      {:.3e}", report.est_error)?;
            }
            if common.out.is_some() {
                std::fs::create_dir_all(&cfg.out)?;
                let path = cfg.out.join(format!("gate_{}.json", report.gate));
                let doc = serde_json::json!({ "report": report, "config": cfg.snapshot() });
                std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
            }
            Ok(())
        }
        Command::Sweep { name, common, grid } => {
            let fig = Figure::parse(&name).ok_or_else(|| {
                let names: Vec<&str> = Figure::ALL.iter().map(|f| f.name()).collect();
                Error::Config(format!(
                    "unknown sweep {name:?}; valid sweeps: {}",
                    names.join(", ")
                ))
            })?;
            let (mut cfg, sigma_grid) = common.resolve(true)?;
            if let Some(values) = sigma_grid {
                if fig != Figure::FigA1 {
                    return Err(Error::param("sigma-ns", "a range only applies to figA1"));
                }
                cfg.grids.fig_a1_sigma_ns = values;
            }
            if let Some(text) = grid {
                let (n, m) = parse_grid(&text)?;
                cfg.grids = cfg.grids.clone().with_resolution(fig, n, m)?;
            }
            let settings = cfg.sweep_settings()?;
            for mut r in run_figure(fig, &cfg.grids, &settings)? {
                r.config = cfg.snapshot();
                write_result(&r, &cfg, out, err)?;
            }
            Ok(())
        }
    }
}

fn write_result(
    r: &SweepResult,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    for path in r.write_files(&cfg.out)? {
        writeln!(out, "{}", path.display())?;
    }
    let failed = r.failed_rows();
    if failed > 0 {
        writeln!(
            err,
            "warning: {failed} of {} rows in {} were flagged",
            r.records.len(),
            r.sweep_id
        )?;
    }
    Ok(())
}
