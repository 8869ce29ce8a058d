//! Hamiltonian builders (ħ = 1, energies in rad/μs).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, C64};
use crate::pulses::{adiabatic_sample, sample_in_segment, DriveParams};
use crate::satd::{controls_in_segment, corrected_pulses, SatdOptions};

pub use crate::satd::adiabatic_frame;

/// Static systematic errors and Markovian decoherence rates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Qubit-frequency shift in units of `Ω₀`.
    pub delta_err: f64,
    /// Fractional Rabi-amplitude deviation.
    pub eps_err: f64,
    /// Decay rate (1/μs).
    pub kappa1: f64,
    /// Dephasing rate (1/μs).
    pub kappa2: f64,
}

impl NoiseParams {
    pub fn new(delta_err: f64, eps_err: f64, kappa1: f64, kappa2: f64) -> Result<Self> {
        let n = Self {
            delta_err,
            eps_err,
            kappa1,
            kappa2,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn systematic(delta_err: f64, eps_err: f64) -> Result<Self> {
        Self::new(delta_err, eps_err, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [("delta", self.delta_err), ("eps", self.eps_err)] {
            if !v.is_finite() {
                return Err(Error::param(key, "must be finite"));
            }
        }
        if self.eps_err <= -1.0 {
            return Err(Error::param("eps", "must exceed -1"));
        }
        for (key, v) in [("kappa1", self.kappa1), ("kappa2", self.kappa2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(
                    key,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.kappa1 == 0.0 && self.kappa2 == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitParams {
    pub drive: DriveParams,
    /// Hyperfine coupling (rad/μs).
    pub a_hf: f64,
}

impl TwoQubitParams {
    pub fn new(drive: DriveParams, a_hf: f64) -> Result<Self> {
        if !(a_hf.is_finite() && a_hf > 0.0) {
            return Err(Error::param(
                "a_hf",
                format!("must be finite and > 0, got {a_hf}"),
            ));
        }
        Ok(Self { drive, a_hf })
    }
}

/// Which pulses drive the qubit and which static errors perturb them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drive {
    /// `None` drives with the bare schedules.
    pub satd: Option<SatdOptions>,
    pub noise: NoiseParams,
}

impl Drive {
    pub fn bare() -> Self {
        Self {
            satd: None,
            noise: NoiseParams::default(),
        }
    }

    pub fn corrected(opts: SatdOptions) -> Self {
        Self {
            satd: Some(opts),
            noise: NoiseParams::default(),
        }
    }

    pub fn with_noise(self, noise: NoiseParams) -> Self {
        Self { noise, ..self }
    }
}

/// `½ [[Δ, Ω_R e^{−iφ}], [Ω_R e^{iφ}, −Δ]]`.
pub fn drive_matrix(delta: f64, omega_r: f64, phi: f64) -> ComplexMatrix {
    let off = C64::from_polar(0.5 * omega_r, -phi);
    ComplexMatrix::new2(
        C64::new(0.5 * delta, 0.0),
        off,
        off.conj(),
        C64::new(-0.5 * delta, 0.0),
    )
}

pub fn h0(p: &DriveParams, t: f64) -> Result<ComplexMatrix> {
    let a = adiabatic_sample(p, t)?;
    Ok(drive_matrix(a.delta, a.omega_r, a.phi))
}

pub fn h_satd(p: &DriveParams, t: f64, opts: &SatdOptions) -> Result<ComplexMatrix> {
    let c = corrected_pulses(p, t, opts)?;
    Ok(drive_matrix(c.delta_tilde, c.omega_r_tilde, c.phi_tilde))
}

/// Corrected drive with a static detuning error `δΩ₀` and Rabi scaling `1 + ε`.
pub fn h_se(p: &DriveParams, n: &NoiseParams, t: f64, opts: &SatdOptions) -> Result<ComplexMatrix> {
    single_qubit(p, &Drive::corrected(*opts).with_noise(*n), t)
}

/// Single-qubit Hamiltonian for an arbitrary [`Drive`].
pub fn single_qubit(p: &DriveParams, drive: &Drive, t: f64) -> Result<ComplexMatrix> {
    let (k, s) = p.segment(t)?;
    single_qubit_at(p, drive, k, s)
}

/// As [`single_qubit`], evaluated on quarter `k` at local fraction `s`.
pub fn single_qubit_at(p: &DriveParams, drive: &Drive, k: usize, s: f64) -> Result<ComplexMatrix> {
    let (d, w, f) = match &drive.satd {
        Some(opts) => {
            let c = controls_in_segment(p, k, s, opts)?;
            (c.delta_tilde, c.omega_r_tilde, c.phi_tilde)
        }
        None => {
            let a = sample_in_segment(p, k, s)?;
            (a.delta, a.omega_r, a.phi)
        }
    };
    let n = &drive.noise;
    Ok(drive_matrix(
        d + n.delta_err * p.omega0(),
        (1.0 + n.eps_err) * w,
        f,
    ))
}

/// Two-qubit Hamiltonian in the basis `{0↓, 1↓, 0↑, 1↑}`: the same drive on
/// both nuclear blocks, with the `1↑` level shifted by `A_hf`.
pub fn h_tq(q: &TwoQubitParams, drive: &Drive, t: f64) -> Result<ComplexMatrix> {
    let (k, s) = q.drive.segment(t)?;
    h_tq_at(q, drive, k, s)
}

pub fn h_tq_at(q: &TwoQubitParams, drive: &Drive, k: usize, s: f64) -> Result<ComplexMatrix> {
    let h1 = single_qubit_at(&q.drive, drive, k, s)?;
    let mut h2 = h1;
    h2[(1, 1)] += C64::new(q.a_hf, 0.0);
    ComplexMatrix::block_diag(&h1, &h2)
}
