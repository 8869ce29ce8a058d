//! Run configuration: a TOML document whose values command-line flags can
//! override. Frequencies are given as `f/2π` in MHz, times in μs except
//! `sigma_ns`, rates in μs⁻¹.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{FigureGrids, GateRun, SweepSettings, MHZ};
use crate::gates::{GateKind, GateSpec, DEFAULT_STATE_GRID};
use crate::hamiltonians::NoiseParams;
use crate::satd::{GzMode, SatdOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateName {
    S,
    Not,
    Cs,
    Cnot,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateAxis {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateSection {
    pub name: GateName,
    /// Rotation axis for `custom`.
    pub axis: GateAxis,
    pub controlled: bool,
    pub gamma_g: Option<f64>,
    pub phi2: Option<f64>,
}

impl Default for GateSection {
    fn default() -> Self {
        Self {
            name: GateName::S,
            axis: GateAxis::Z,
            controlled: false,
            gamma_g: None,
            phi2: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveSection {
    pub omega0_mhz: f64,
    pub eta: f64,
    pub x: f64,
    pub sigma_ns: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        Self {
            omega0_mhz: 3.0,
            eta: 1.0,
            x: 2.0,
            sigma_ns: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SatdSection {
    pub enabled: bool,
    pub gz: bool,
    pub tqd: bool,
    pub phase_rate_terms: bool,
}

impl Default for SatdSection {
    fn default() -> Self {
        Self {
            enabled: true,
            gz: true,
            tqd: false,
            phase_rate_terms: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    pub delta: f64,
    pub eps: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoQubitSection {
    pub ahf_mhz: f64,
}

impl Default for TwoQubitSection {
    fn default() -> Self {
        Self { ahf_mhz: 130.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsSection {
    pub tol: f64,
    pub state_grid: usize,
    pub jobs: usize,
    /// Samples per pulse table.
    pub points: usize,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            state_grid: DEFAULT_STATE_GRID,
            jobs: 1,
            points: 2001,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub out: PathBuf,
    pub gate: GateSection,
    pub drive: DriveSection,
    pub satd: SatdSection,
    pub noise: NoiseSection,
    pub two_qubit: TwoQubitSection,
    pub numerics: NumericsSection,
    pub grids: FigureGrids,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out: PathBuf::from("out"),
            gate: GateSection::default(),
            drive: DriveSection::default(),
            satd: SatdSection::default(),
            noise: NoiseSection::default(),
            two_qubit: TwoQubitSection::default(),
            numerics: NumericsSection::default(),
            grids: FigureGrids::default(),
        }
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(
            key,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        positive("drive.omega0_mhz", self.drive.omega0_mhz)?;
        positive("drive.eta", self.drive.eta)?;
        positive("drive.x", self.drive.x)?;
        if !(self.drive.sigma_ns.is_finite() && self.drive.sigma_ns >= 0.0) {
            return Err(Error::param("drive.sigma_ns", "must be finite and >= 0"));
        }
        positive("two_qubit.ahf_mhz", self.two_qubit.ahf_mhz)?;
        positive("numerics.tol", self.numerics.tol)?;
        if self.numerics.jobs == 0 {
            return Err(Error::param("numerics.jobs", "must be at least 1"));
        }
        let g = self.numerics.state_grid;
        if g < 3 || g.is_multiple_of(2) {
            return Err(Error::param("numerics.state_grid", "must be odd and >= 3"));
        }
        if self.numerics.points < 2 {
            return Err(Error::param("numerics.points", "must be at least 2"));
        }
        self.noise_params()?;
        self.gate_spec()?;
        if self.satd.tqd && !self.satd.enabled {
            return Err(Error::param("satd.tqd", "needs satd.enabled = true"));
        }
        Ok(())
    }

    pub fn gate_spec(&self) -> Result<GateSpec> {
        let g = &self.gate;
        let gamma = match (g.gamma_g, g.phi2) {
            (Some(a), Some(p)) if (a - (PI - p)).abs() > 1e-12 => {
                return Err(Error::param(
                    "gate.phi2",
                    "inconsistent with gate.gamma_g (γ_g = π − φ₂)",
                ))
            }
            (Some(a), _) => Some(a),
            (None, Some(p)) => Some(PI - p),
            (None, None) => None,
        };
        let named = |spec: GateSpec| match gamma {
            Some(_) => Err(Error::param(
                "gate.gamma_g",
                "only applies to the custom gate",
            )),
            None => Ok(spec),
        };
        match g.name {
            GateName::S => named(GateSpec::s()),
            GateName::Not => named(GateSpec::not()),
            GateName::Cs => named(GateSpec::cs()),
            GateName::Cnot => named(GateSpec::cnot()),
            GateName::Custom => {
                let gamma = gamma.ok_or_else(|| {
                    Error::param("gate.gamma_g", "custom gate needs gamma_g or phi2")
                })?;
                if !gamma.is_finite() {
                    return Err(Error::param("gate.gamma_g", "must be finite"));
                }
                let kind = match (g.axis, g.controlled) {
                    (GateAxis::Z, false) => GateKind::Uz,
                    (GateAxis::X, false) => GateKind::Ux,
                    (GateAxis::Z, true) => GateKind::ControlledUz,
                    (GateAxis::X, true) => GateKind::ControlledUx,
                };
                GateSpec::new(kind, gamma)
            }
        }
    }

    pub fn noise_params(&self) -> Result<NoiseParams> {
        let n = &self.noise;
        NoiseParams::new(n.delta, n.eps, n.kappa1, n.kappa2).map_err(|e| match e {
            Error::InvalidParameter { key, reason } => Error::param(format!("noise.{key}"), reason),
            other => other,
        })
    }

    /// `None` when the corrections are disabled.
    pub fn satd_options(&self) -> Option<SatdOptions> {
        if !self.satd.enabled {
            return None;
        }
        let base = if self.satd.tqd {
            SatdOptions::transitionless()
        } else {
            SatdOptions::default()
        };
        Some(SatdOptions {
            gz: if self.satd.gz && !self.satd.tqd {
                GzMode::Design
            } else {
                GzMode::Off
            },
            phase_rate_terms: self.satd.phase_rate_terms,
            ..base
        })
    }

    pub fn omega0(&self) -> f64 {
        self.drive.omega0_mhz * MHZ
    }

    pub fn gate_run(&self) -> Result<GateRun> {
        Ok(GateRun {
            gate: self.gate_spec()?,
            omega0: self.omega0(),
            eta: self.drive.eta,
            x: self.drive.x,
            sigma: self.drive.sigma_ns * 1e-3,
            satd: self.satd_options(),
            noise: self.noise_params()?,
            a_hf: self.two_qubit.ahf_mhz * MHZ,
            tol: self.numerics.tol,
            state_grid: self.numerics.state_grid,
        })
    }

    pub fn sweep_settings(&self) -> Result<SweepSettings> {
        let satd = self
            .satd_options()
            .ok_or_else(|| Error::param("satd.enabled", "sweeps run with the corrected drive"))?;
        Ok(SweepSettings {
            omega0: self.omega0(),
            x: self.drive.x,
            tol: self.numerics.tol,
            jobs: self.numerics.jobs,
            satd,
            state_grid: self.numerics.state_grid,
            a_hf: self.two_qubit.ahf_mhz * MHZ,
        })
    }

    /// Snapshot embedded in output metadata. `out` and `numerics.jobs` are
    /// dropped so the files do not depend on where or how fast they were made.
    pub fn snapshot(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serialises");
        if let Some(m) = v.as_object_mut() {
            m.remove("out");
        }
        if let Some(n) = v.get_mut("numerics").and_then(|n| n.as_object_mut()) {
            n.remove("jobs");
        }
        v
    }
}

/// Parses `a:b:step` (inclusive) or a comma list.
pub fn parse_range(key: &str, text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::param(key, format!("cannot parse {s:?} as a number")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step <= 0.0 || b < a {
                return Err(Error::param(key, "range needs a <= b and step > 0"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(Error::param(key, "range has too many points"));
            }
            Ok((0..=n).map(|i| a + i as f64 * step).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(Error::param(
            key,
            "expected a value, a comma list or a:b:step",
        )),
    }
}

/// Parses `NxM` or `N`.
pub fn parse_grid(text: &str) -> Result<(usize, usize)> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::param("grid", format!("cannot parse {s:?}; expected NxM")))
    };
    match text.split_once(['x', 'X']) {
        Some((n, m)) => Ok((num(n)?, num(m)?)),
        None => num(text).map(|n| (n, n)),
    }
}
