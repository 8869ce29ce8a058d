//! Dressed-state corrections, the `g_z` phase-cancelling design and the
//! corrected pulses.
//!
//! In the adiabatic frame the corrected Hamiltonian is
//! `(Ω + g_z + φ̇(1 − cos θ)) S_z + (θ̇ cos φ − φ̇ sin θ sin φ)(−S_y)` plus the
//! control `g_x S_x`. Writing `Z` and `N` for the two coefficients, the
//! rotation `V = exp(iμ S_x)` with `μ = atan2(N, Z)` removes the off-diagonal
//! part provided `g_x = −μ̇ + θ̇ sin φ + φ̇ sin θ cos φ`, leaving
//! `E_DS S_z` with `E_DS = √(N² + Z²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, C64};
use crate::pulses::{adiabatic_sample, sample_in_segment, DriveParams, PulseSample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GzMode {
    /// `g_z = ∓α θ̇²/Ω`, negative on the `φ₁` quarters.
    Design,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Full dressed-state construction.
    Dressed,
    /// `V = 1`: plain counterdiabatic term, no `g_z`.
    Transitionless,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatdOptions {
    pub gz: GzMode,
    /// Keep the `φ̇` terms in `μ`, `g_x`; only matters when the phase is smoothed.
    pub phase_rate_terms: bool,
    pub scheme: Scheme,
}

impl Default for SatdOptions {
    fn default() -> Self {
        Self {
            gz: GzMode::Design,
            phase_rate_terms: true,
            scheme: Scheme::Dressed,
        }
    }
}

impl SatdOptions {
    pub fn without_gz() -> Self {
        Self {
            gz: GzMode::Off,
            ..Self::default()
        }
    }

    pub fn transitionless() -> Self {
        Self {
            gz: GzMode::Off,
            phase_rate_terms: true,
            scheme: Scheme::Transitionless,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SatdControls {
    pub t: f64,
    pub mu: f64,
    pub mu_dot: f64,
    pub g_x: f64,
    /// Nonzero only in the transitionless scheme.
    pub g_y: f64,
    pub g_z: f64,
    pub delta_tilde: f64,
    pub omega_r_tilde: f64,
    pub phi_tilde: f64,
    pub e_ds: f64,
    pub pulse: PulseSample,
}

/// `α = sin²(φ₂)/4`.
pub fn alpha(p: &DriveParams) -> f64 {
    p.phi2().sin().powi(2) / 4.0
}

fn gz_sign(p: &DriveParams, k: usize) -> f64 {
    if p.path().is_phi2_segment(k) {
        1.0
    } else {
        -1.0
    }
}

/// `(g_z, ġ_z)` for a sample.
fn gz_pair(p: &DriveParams, a: &PulseSample, mode: GzMode) -> (f64, f64) {
    if mode == GzMode::Off {
        return (0.0, 0.0);
    }
    let c = gz_sign(p, a.segment) * alpha(p);
    let g = c * a.theta_dot * a.theta_dot / a.omega;
    let gd = c
        * (2.0 * a.theta_dot * a.theta_ddot / a.omega
            - a.theta_dot * a.theta_dot * a.omega_dot / (a.omega * a.omega));
    (g, gd)
}

/// The designed `g_z(t)`.
pub fn gz_design(p: &DriveParams, t: f64) -> Result<f64> {
    let a = adiabatic_sample(p, t)?;
    Ok(gz_pair(p, &a, GzMode::Design).0)
}

/// `P = 1 + α (θ̇/Ω)²`.
pub fn scaling_factor(p: &DriveParams, t: f64) -> Result<f64> {
    let a = adiabatic_sample(p, t)?;
    Ok(1.0 + alpha(p) * (a.theta_dot / a.omega).powi(2))
}

struct Frame {
    n: f64,
    z: f64,
    n_dot: f64,
    z_dot: f64,
    g_z: f64,
    phi_dot: f64,
}

fn frame(p: &DriveParams, a: &PulseSample, opts: &SatdOptions) -> Frame {
    let (g, gd) = match opts.scheme {
        Scheme::Dressed => gz_pair(p, a, opts.gz),
        Scheme::Transitionless => (0.0, 0.0),
    };
    let (fd, fdd) = if opts.phase_rate_terms {
        (a.phi_dot, a.phi_ddot)
    } else {
        (0.0, 0.0)
    };
    let (st, ct) = a.theta.sin_cos();
    let (sf, cf) = a.phi.sin_cos();
    let (thd, thdd) = (a.theta_dot, a.theta_ddot);
    let n = thd * cf - fd * st * sf;
    let n_dot =
        thdd * cf - thd * fd * sf - (fdd * st * sf + fd * thd * ct * sf + fd * fd * st * cf);
    let z = a.omega + g + fd * (1.0 - ct);
    let z_dot = a.omega_dot + gd + fdd * (1.0 - ct) + fd * st * thd;
    Frame {
        n,
        z,
        n_dot,
        z_dot,
        g_z: g,
        phi_dot: fd,
    }
}

/// `(μ, μ̇)` at time `t`.
pub fn mu_of_t(p: &DriveParams, t: f64, opts: &SatdOptions) -> Result<(f64, f64)> {
    let c = corrected_pulses(p, t, opts)?;
    Ok((c.mu, c.mu_dot))
}

/// `g_x(t)`.
pub fn gx_of_t(p: &DriveParams, t: f64, opts: &SatdOptions) -> Result<f64> {
    Ok(corrected_pulses(p, t, opts)?.g_x)
}

pub fn corrected_pulses(p: &DriveParams, t: f64, opts: &SatdOptions) -> Result<SatdControls> {
    let a = adiabatic_sample(p, t)?;
    controls_from_sample(p, a, opts)
}

/// Controls evaluated on quarter `k` at local fraction `s`.
pub fn controls_in_segment(
    p: &DriveParams,
    k: usize,
    s: f64,
    opts: &SatdOptions,
) -> Result<SatdControls> {
    let a = sample_in_segment(p, k, s)?;
    controls_from_sample(p, a, opts)
}

fn controls_from_sample(
    p: &DriveParams,
    a: PulseSample,
    opts: &SatdOptions,
) -> Result<SatdControls> {
    let f = frame(p, &a, opts);
    let (st, ct) = a.theta.sin_cos();
    let (sf, cf) = a.phi.sin_cos();
    let out = match opts.scheme {
        Scheme::Dressed => {
            let e_ds = f.n.hypot(f.z);
            if e_ds <= 1e-12 * a.omega {
                return Err(Error::FrameBreakdown { t: a.t });
            }
            let mu = f.n.atan2(f.z);
            let mu_dot = (f.n_dot * f.z - f.n * f.z_dot) / (e_ds * e_ds);
            let g_x = -mu_dot + a.theta_dot * sf + f.phi_dot * st * cf;
            let zeff = f.g_z + a.omega;
            let delta_tilde = zeff * ct + g_x * st * cf;
            let along = zeff * st - g_x * ct * cf;
            let across = g_x * sf;
            let phi_tilde = if along == 0.0 && across == 0.0 {
                a.phi
            } else {
                a.phi + across.atan2(along)
            };
            SatdControls {
                t: a.t,
                mu,
                mu_dot,
                g_x,
                g_y: 0.0,
                g_z: f.g_z,
                delta_tilde,
                omega_r_tilde: along.hypot(across),
                phi_tilde,
                e_ds,
                pulse: a,
            }
        }
        Scheme::Transitionless => {
            let g_x = a.theta_dot * sf + f.phi_dot * st * cf;
            let g_y = -f.n;
            let w = adiabatic_frame(a.theta, a.phi);
            let hc = w * correction_matrix(g_x, g_y, 0.0) * w.adjoint();
            let h01 = C64::from_polar(0.5 * a.omega_r, -a.phi) + hc[(0, 1)];
            let delta_tilde = a.delta + 2.0 * hc[(0, 0)].re;
            let omega_r_tilde = 2.0 * h01.norm();
            let phi_tilde = if omega_r_tilde == 0.0 {
                a.phi
            } else {
                -h01.arg()
            };
            SatdControls {
                t: a.t,
                mu: 0.0,
                mu_dot: 0.0,
                g_x,
                g_y,
                g_z: 0.0,
                delta_tilde,
                omega_r_tilde,
                phi_tilde,
                e_ds: f.z,
                pulse: a,
            }
        }
    };
    Ok(out)
}

/// Columns are the adiabatic eigenvectors `ψ₊ = (cos θ/2, e^{iφ} sin θ/2)`
/// and `ψ₋ = (e^{−iφ} sin θ/2, −cos θ/2)` of the bare Hamiltonian.
pub fn adiabatic_frame(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    ComplexMatrix::new2(
        C64::new(c, 0.0),
        C64::from_polar(s, -phi),
        C64::from_polar(s, phi),
        C64::new(-c, 0.0),
    )
}

/// `g_x S_x + g_y S_y + g_z S_z` with `S = σ/2`.
pub fn correction_matrix(g_x: f64, g_y: f64, g_z: f64) -> ComplexMatrix {
    ComplexMatrix::new2(
        C64::new(0.5 * g_z, 0.0),
        C64::new(0.5 * g_x, -0.5 * g_y),
        C64::new(0.5 * g_x, 0.5 * g_y),
        C64::new(-0.5 * g_z, 0.0),
    )
}

/// The two integrands of the cancellation condition, paired by the shift
/// `t ↦ t + 2τ` that maps each `φ₁` quarter onto a `φ₂` quarter with the
/// same `|Δ|`, `Ω_R`. Returns `(f₁, f₂)` for `t ∈ [0, 2τ]`.
pub fn cancellation_integrands(p: &DriveParams, t: f64, opts: &SatdOptions) -> Result<(f64, f64)> {
    if !(0.0..=2.0 * p.tau() * (1.0 + 1e-12)).contains(&t) {
        return Err(Error::TimeOutOfRange {
            t,
            end: 2.0 * p.tau(),
        });
    }
    let (k, s) = p.segment(t)?;
    let (k, s) = if k >= 2 { (1, 1.0) } else { (k, s) };
    let here = controls_in_segment(p, k, s, opts)?.e_ds;
    let there = controls_in_segment(p, k + 2, s, opts)?.e_ds;
    if p.path().is_phi2_segment(k) {
        Ok((there, here))
    } else {
        Ok((here, there))
    }
}

/// Maximises `f(k, s)` over all four quarters: dense grid plus a
/// golden-section refinement around the best grid point of each quarter.
fn refined_max(
    points_per_quarter: usize,
    mut f: impl FnMut(usize, f64) -> Result<f64>,
) -> Result<f64> {
    let n = points_per_quarter.max(8);
    let mut best = f64::NEG_INFINITY;
    for k in 0..4 {
        let vals: Vec<f64> = (0..=n)
            .map(|i| f(k, i as f64 / n as f64))
            .collect::<Result<_>>()?;
        let (imax, &vmax) = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is nonempty");
        best = best.max(vmax);
        let lo = imax.saturating_sub(1) as f64 / n as f64;
        let hi = (imax + 1).min(n) as f64 / n as f64;
        best = best.max(golden_max(&mut |s| f(k, s), lo, hi)?);
    }
    Ok(best)
}

fn golden_max(f: &mut impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..60 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(fc.max(fd))
}

/// Grid density used by the maxima below (per quarter).
pub const MAX_GRID_PER_QUARTER: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    Rabi,
    Detuning,
}

/// `max|z| / max|z̃|` for the Rabi or detuning channel.
pub fn amplitude_ratio(p: &DriveParams, which: Channel, opts: &SatdOptions) -> Result<f64> {
    let pick = |c: &SatdControls| match which {
        Channel::Rabi => (c.pulse.omega_r.abs(), c.omega_r_tilde.abs()),
        Channel::Detuning => (c.pulse.delta.abs(), c.delta_tilde.abs()),
    };
    let original = refined_max(MAX_GRID_PER_QUARTER, |k, s| {
        Ok(pick(&controls_in_segment(p, k, s, opts)?).0)
    })?;
    let corrected = refined_max(MAX_GRID_PER_QUARTER, |k, s| {
        Ok(pick(&controls_in_segment(p, k, s, opts)?).1)
    })?;
    if !(corrected > 0.0) {
        return Err(Error::SingularGeometry {
            t: 0.0,
            reason: "corrected pulse vanishes identically".into(),
        });
    }
    Ok(original / corrected)
}

/// `max_t |g_z/Ω|` for the designed `g_z`.
pub fn max_gz_over_omega(p: &DriveParams) -> Result<f64> {
    let a = alpha(p);
    refined_max(MAX_GRID_PER_QUARTER, |k, s| {
        let smp = sample_in_segment(p, k, s)?;
        Ok(a * (smp.theta_dot / smp.omega).powi(2))
    })
}

/// Upper bound from the closed form `4απ²/x² · h(η, t)`, used as a sanity
/// reference: `max θ̇/Ω` scales as `π/x`.
pub fn gz_peak_scale(p: &DriveParams) -> f64 {
    4.0 * alpha(p) * PI * PI / (p.x() * p.x())
}
