//! Orange-slice drive schedules and the adiabatic quantities derived from them.
//!
//! The closed path is split into four quarters of duration `tau`. Within a
//! quarter with local fraction `s ∈ [0, 1]` the schedules are
//!
//! ```text
//! Δ(t)   = Δ₀ (cos πs + d_k)
//! Ω_R(t) = Ω₀ (1 + w_k cos πs)
//! ```
//!
//! with per-quarter signs `d_k`, `w_k` selected by [`PathKind`]. On the
//! quarters driven with phase `φ₂` the detuning sign is reversed, so the
//! Hamiltonian there is the negative of the one that would continue the
//! meridian. The tracked state then sits on the lower eigenvector, and the
//! dynamical phase picked up on the `φ₂` meridian has the opposite sign from
//! the one picked up on the `φ₁` meridian. That sign reversal is what lets
//! the `g_z` design cancel the total dynamical phase.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathKind {
    /// Path through both poles starting at the north pole (`χ = 0`).
    ZPath,
    /// Path starting on the equator (`χ = π/2`).
    XPath,
}

impl PathKind {
    fn detuning_signs(self) -> [f64; 4] {
        match self {
            PathKind::ZPath => [1.0, -1.0, 1.0, -1.0],
            PathKind::XPath => [-1.0, 1.0, -1.0, 1.0],
        }
    }

    fn rabi_signs(self) -> [f64; 4] {
        match self {
            PathKind::ZPath => [-1.0, 1.0, -1.0, 1.0],
            PathKind::XPath => [1.0, -1.0, 1.0, -1.0],
        }
    }

    /// True for the quarters driven with phase `φ₂`.
    pub fn is_phi2_segment(self, k: usize) -> bool {
        match self {
            PathKind::ZPath => k >= 2,
            PathKind::XPath => k == 1 || k == 2,
        }
    }

    /// Times of the phase jumps in units of `tau`.
    pub fn jump_quarters(self) -> &'static [(f64, f64)] {
        // (position, direction): +1 for φ₁ → φ₂, −1 for φ₂ → φ₁
        match self {
            PathKind::ZPath => &[(2.0, 1.0)],
            PathKind::XPath => &[(1.0, 1.0), (3.0, -1.0)],
        }
    }

    pub fn chi(self) -> f64 {
        match self {
            PathKind::ZPath => 0.0,
            PathKind::XPath => FRAC_PI_2,
        }
    }
}

/// Which adiabatic eigenvector of `H₀` the gate state follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Upper,
    Lower,
}

/// All constants defining one gate run. Frequencies are angular (rad/μs),
/// times in μs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    omega0: f64,
    delta0: f64,
    tau: f64,
    phi1: f64,
    phi2: f64,
    path: PathKind,
    sigma: f64,
}

impl DriveParams {
    /// Builds parameters from the dimensionless pair `η = Δ₀/Ω₀`, `x = τΩ₀`.
    pub fn new(
        omega0: f64,
        eta: f64,
        x: f64,
        path: PathKind,
        phi2: f64,
        sigma: f64,
    ) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::param(
                "omega0",
                format!("must be finite and > 0, got {omega0}"),
            ));
        }
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::param(
                "x",
                format!("must be finite and > 0, got {x}"),
            ));
        }
        Self::from_physical(omega0, eta * omega0, x / omega0, path, 0.0, phi2, sigma).map_err(|e| {
            match e {
                Error::InvalidParameter { key, reason } if key == "delta0" => {
                    Error::param("eta", reason.replace("delta0", "eta"))
                }
                other => other,
            }
        })
    }

    pub fn from_physical(
        omega0: f64,
        delta0: f64,
        tau: f64,
        path: PathKind,
        phi1: f64,
        phi2: f64,
        sigma: f64,
    ) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::param(
                "omega0",
                format!("must be finite and > 0, got {omega0}"),
            ));
        }
        // Δ₀ = 0 makes Ω vanish at the start of the ZPath, so it is rejected.
        if !(delta0.is_finite() && delta0 > 0.0) {
            return Err(Error::param(
                "delta0",
                format!("must be finite and > 0, got {delta0}"),
            ));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::param(
                "tau",
                format!("must be finite and > 0, got {tau}"),
            ));
        }
        if !phi1.is_finite() {
            return Err(Error::param("phi1", "must be finite"));
        }
        if !phi2.is_finite() {
            return Err(Error::param("phi2", "must be finite"));
        }
        if !(sigma.is_finite() && sigma >= 0.0 && sigma < tau / 2.0) {
            return Err(Error::param(
                "sigma",
                format!(
                    "must satisfy 0 <= sigma < tau/2 = {}, got {sigma}",
                    tau / 2.0
                ),
            ));
        }
        Ok(Self {
            omega0,
            delta0,
            tau,
            phi1,
            phi2,
            path,
            sigma,
        })
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::from_physical(
            self.omega0,
            self.delta0,
            self.tau,
            self.path,
            self.phi1,
            self.phi2,
            sigma,
        )
    }

    pub fn with_phi1(self, phi1: f64) -> Result<Self> {
        Self::from_physical(
            self.omega0,
            self.delta0,
            self.tau,
            self.path,
            phi1,
            self.phi2,
            self.sigma,
        )
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn delta0(&self) -> f64 {
        self.delta0
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn phi1(&self) -> f64 {
        self.phi1
    }
    pub fn phi2(&self) -> f64 {
        self.phi2
    }
    pub fn path(&self) -> PathKind {
        self.path
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn eta(&self) -> f64 {
        self.delta0 / self.omega0
    }
    pub fn x(&self) -> f64 {
        self.tau * self.omega0
    }
    pub fn chi(&self) -> f64 {
        self.path.chi()
    }
    pub fn total_time(&self) -> f64 {
        4.0 * self.tau
    }
    pub fn knots(&self) -> [f64; 5] {
        [
            0.0,
            self.tau,
            2.0 * self.tau,
            3.0 * self.tau,
            4.0 * self.tau,
        ]
    }

    /// Closed-form geometric phase `π − (φ₂ − φ₁)`.
    pub fn gamma_g(&self) -> f64 {
        PI - (self.phi2 - self.phi1)
    }

    /// Local fraction of `t` within quarter `k`, clamped to `[0, 1]`.
    pub fn local_fraction(&self, k: usize, t: f64) -> f64 {
        (t / self.tau - k as f64).clamp(0.0, 1.0)
    }

    /// Locates `t` as (quarter index, local fraction). Quarters are half-open
    /// except the last, and times within rounding of a boundary snap onto it.
    pub fn segment(&self, t: f64) -> Result<(usize, f64)> {
        let end = self.total_time();
        let slack = 1e-12 * end;
        if !t.is_finite() || t < -slack || t > end + slack {
            return Err(Error::TimeOutOfRange { t, end });
        }
        let q = (t / self.tau).clamp(0.0, 4.0);
        let r = q.round();
        let q = if (q - r).abs() < 1e-12 { r } else { q };
        let k = (q.floor() as usize).min(3);
        Ok((k, q - k as f64))
    }
}

/// Instantaneous drive values and adiabatic kinematics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSample {
    pub t: f64,
    pub segment: usize,
    pub delta: f64,
    pub delta_dot: f64,
    pub delta_ddot: f64,
    pub omega_r: f64,
    pub omega_r_dot: f64,
    pub omega_r_ddot: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub phi_ddot: f64,
    /// Polar angle of the Hamiltonian vector, `atan2(Ω_R, Δ) ∈ [0, π]`.
    pub theta: f64,
    pub theta_dot: f64,
    pub theta_ddot: f64,
    pub omega: f64,
    pub omega_dot: f64,
    pub branch: Branch,
}

impl PulseSample {
    /// Polar angle of the tracked eigenstate on the Bloch sphere.
    pub fn state_theta(&self) -> f64 {
        match self.branch {
            Branch::Upper => self.theta,
            Branch::Lower => PI - self.theta,
        }
    }
}

struct Schedules {
    delta: [f64; 3],
    omega_r: [f64; 3],
}

fn schedules_local(p: &DriveParams, k: usize, s: f64) -> Schedules {
    let w = PI / p.tau;
    let (c, sn) = ((PI * s).cos(), (PI * s).sin());
    let d = p.path.detuning_signs()[k];
    let r = p.path.rabi_signs()[k];
    Schedules {
        delta: [
            p.delta0 * (c + d),
            -p.delta0 * w * sn,
            -p.delta0 * w * w * c,
        ],
        omega_r: [
            p.omega0 * (1.0 + r * c),
            -p.omega0 * r * w * sn,
            -p.omega0 * r * w * w * c,
        ],
    }
}

pub fn delta_of_t(p: &DriveParams, t: f64) -> Result<f64> {
    let (k, s) = p.segment(t)?;
    Ok(schedules_local(p, k, s).delta[0])
}

pub fn omega_r_of_t(p: &DriveParams, t: f64) -> Result<f64> {
    let (k, s) = p.segment(t)?;
    Ok(schedules_local(p, k, s).omega_r[0].max(0.0))
}

/// Microwave phase and its first two time derivatives.
pub fn phase_derivatives(p: &DriveParams, t: f64) -> Result<(f64, f64, f64)> {
    let (k, _) = p.segment(t)?;
    Ok(phase_in_segment(p, k, t))
}

fn phase_in_segment(p: &DriveParams, k: usize, t: f64) -> (f64, f64, f64) {
    if p.sigma == 0.0 {
        let phi = if p.path.is_phi2_segment(k) {
            p.phi2
        } else {
            p.phi1
        };
        return (phi, 0.0, 0.0);
    }
    let half = 0.5 * (p.phi2 - p.phi1);
    let sig = p.sigma;
    let mut out = (p.phi1, 0.0, 0.0);
    for &(q, dir) in p.path.jump_quarters() {
        let th = ((t - q * p.tau) / sig).tanh();
        let sech2 = 1.0 - th * th;
        out.0 += dir * half * (1.0 + th);
        out.1 += dir * half * sech2 / sig;
        out.2 += -2.0 * dir * half * sech2 * th / (sig * sig);
    }
    out
}

/// `(φ(t), φ̇(t))`.
pub fn phi_of_t(p: &DriveParams, t: f64) -> Result<(f64, f64)> {
    let (phi, phi_dot, _) = phase_derivatives(p, t)?;
    Ok((phi, phi_dot))
}

pub fn adiabatic_sample(p: &DriveParams, t: f64) -> Result<PulseSample> {
    let (k, s) = p.segment(t)?;
    sample_in_segment(p, k, s)
}

/// Evaluates the sample using the schedule of quarter `k` at local fraction
/// `s`, so that either side of a quarter boundary can be requested exactly.
pub fn sample_in_segment(p: &DriveParams, k: usize, s: f64) -> Result<PulseSample> {
    if k > 3 || !(0.0..=1.0).contains(&s) {
        return Err(Error::Contract(format!(
            "invalid segment position ({k}, {s})"
        )));
    }
    let t = (k as f64 + s) * p.tau;
    let sch = schedules_local(p, k, s);
    let [d, dd, ddd] = sch.delta;
    let [w, wd, wdd] = sch.omega_r;
    let omega = w.hypot(d);
    if omega == 0.0 {
        return Err(Error::SingularGeometry {
            t,
            reason: "Ω = 0, the Hamiltonian vanishes".into(),
        });
    }
    let o2 = omega * omega;
    let theta_dot = (wd * d - dd * w) / o2;
    let omega_dot = (d * dd + w * wd) / omega;
    let theta_ddot = (wdd * d - ddd * w) / o2 - 2.0 * theta_dot * omega_dot / omega;
    let (phi, phi_dot, phi_ddot) = phase_in_segment(p, k, t);
    Ok(PulseSample {
        t,
        segment: k,
        delta: d,
        delta_dot: dd,
        delta_ddot: ddd,
        omega_r: w.max(0.0),
        omega_r_dot: wd,
        omega_r_ddot: wdd,
        phi,
        phi_dot,
        phi_ddot,
        theta: w.max(0.0).atan2(d),
        theta_dot,
        theta_ddot,
        omega,
        omega_dot,
        branch: if p.path.is_phi2_segment(k) {
            Branch::Lower
        } else {
            Branch::Upper
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const OM0: f64 = 2.0 * PI * 3.0;

    fn zpath(eta: f64, x: f64) -> DriveParams {
        DriveParams::new(OM0, eta, x, PathKind::ZPath, FRAC_PI_2, 0.0).unwrap()
    }

    fn xpath(eta: f64, x: f64) -> DriveParams {
        DriveParams::new(OM0, eta, x, PathKind::XPath, FRAC_PI_2, 0.0).unwrap()
    }

    #[test]
    fn schedule_endpoint_values() {
        let p = zpath(1.3, 2.0);
        assert!((delta_of_t(&p, 0.0).unwrap() - 2.0 * p.delta0()).abs() < 1e-12);
        assert!(delta_of_t(&p, p.tau()).unwrap().abs() < 1e-12);
        assert_eq!(omega_r_of_t(&p, 0.0).unwrap(), 0.0);
        assert!((omega_r_of_t(&p, p.tau()).unwrap() - 2.0 * OM0).abs() < 1e-12);
        let q = xpath(1.3, 2.0);
        assert!(delta_of_t(&q, 0.0).unwrap().abs() < 1e-12);
        assert!((omega_r_of_t(&q, 0.0).unwrap() - 2.0 * OM0).abs() < 1e-12);
    }

    #[test]
    fn derived_fields_are_exact() {
        let p = DriveParams::new(OM0, 0.7, 3.0, PathKind::ZPath, 1.0, 0.0).unwrap();
        assert_eq!(p.eta(), p.delta0() / p.omega0());
        assert_eq!(p.x(), p.tau() * p.omega0());
        assert_eq!(p.chi(), 0.0);
        assert_eq!(xpath(1.0, 2.0).chi(), FRAC_PI_2);
    }

    #[test]
    fn invalid_parameters_name_their_key() {
        let bad = |r: Result<DriveParams>, key: &str| match r {
            Err(Error::InvalidParameter { key: k, .. }) => assert_eq!(k, key),
            other => panic!("expected invalid {key}, got {other:?}"),
        };
        bad(
            DriveParams::new(-1.0, 1.0, 2.0, PathKind::ZPath, 0.0, 0.0),
            "omega0",
        );
        bad(
            DriveParams::new(OM0, 0.0, 2.0, PathKind::ZPath, 0.0, 0.0),
            "eta",
        );
        bad(
            DriveParams::new(OM0, 1.0, 0.0, PathKind::ZPath, 0.0, 0.0),
            "x",
        );
        let tau = 2.0 / OM0;
        bad(
            DriveParams::new(OM0, 1.0, 2.0, PathKind::ZPath, 0.0, tau / 2.0),
            "sigma",
        );
        bad(
            DriveParams::new(OM0, 1.0, 2.0, PathKind::ZPath, 0.0, -1e-3),
            "sigma",
        );
    }

    #[test]
    fn time_outside_window_is_rejected() {
        let p = zpath(1.0, 2.0);
        assert!(matches!(
            delta_of_t(&p, -1e-3),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(matches!(
            adiabatic_sample(&p, 4.0 * p.tau() * 1.01),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(adiabatic_sample(&p, p.total_time()).is_ok());
    }

    #[test]
    fn adiabatic_samples_at_poles_and_equator() {
        let p = zpath(1.0, 2.0);
        let a = adiabatic_sample(&p, 0.0).unwrap();
        assert_eq!(a.theta, 0.0);
        assert!(a.theta_dot.abs() < 1e-12);
        assert!((a.omega - 2.0 * p.delta0()).abs() < 1e-12);
        let b = adiabatic_sample(&p, 2.0 * p.tau()).unwrap();
        assert!((b.state_theta() - PI).abs() < 1e-12);
        assert!(b.theta_dot.abs() < 1e-12);
        assert!((b.omega - 2.0 * p.delta0()).abs() < 1e-12);
        let q = xpath(1.0, 2.0);
        let c = adiabatic_sample(&q, 0.0).unwrap();
        assert!((c.theta - FRAC_PI_2).abs() < 1e-12);
        assert!((c.omega - 2.0 * OM0).abs() < 1e-12);
    }

    #[test]
    fn tracked_state_returns_to_start() {
        for p in [zpath(1.0, 2.0), xpath(1.0, 2.0)] {
            let end = adiabatic_sample(&p, p.total_time()).unwrap();
            assert!((end.state_theta() - p.chi()).abs() < 1e-12);
        }
    }

    #[test]
    fn rates_vanish_at_quarter_boundaries() {
        for p in [zpath(0.8, 2.0), xpath(2.5, 3.0)] {
            for k in 0..4 {
                for s in [0.0, 1.0] {
                    let a = sample_in_segment(&p, k, s).unwrap();
                    assert!(a.theta_dot.abs() < 1e-9, "θ̇ at ({k}, {s})");
                    assert!(
                        (a.omega_r * a.omega_r_dot).abs() < 1e-6,
                        "Ω_R Ω̇_R at ({k}, {s})"
                    );
                }
            }
        }
    }

    #[test]
    fn rabi_schedule_is_continuous_at_boundaries() {
        for p in [zpath(1.0, 2.0), xpath(1.0, 2.0)] {
            for k in 0..3 {
                let left = sample_in_segment(&p, k, 1.0).unwrap();
                let right = sample_in_segment(&p, k + 1, 0.0).unwrap();
                assert!((left.omega_r - right.omega_r).abs() < 1e-12);
                // Δ is continuous except where the Hamiltonian flips sign at a pole.
                let flips = p.path().is_phi2_segment(k) != p.path().is_phi2_segment(k + 1);
                if flips {
                    assert!((left.delta + right.delta).abs() < 1e-12);
                } else {
                    assert!((left.delta - right.delta).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tracked_polar_angle_is_monotone_per_leg() {
        for p in [zpath(1.0, 2.0), xpath(1.0, 2.0)] {
            let n = 10_000;
            let grid: Vec<f64> = (0..=n)
                .map(|i| {
                    adiabatic_sample(&p, p.total_time() * i as f64 / n as f64)
                        .unwrap()
                        .state_theta()
                })
                .collect();
            let turn = match p.path() {
                PathKind::ZPath => n / 2,
                PathKind::XPath => n / 4,
            };
            assert!(grid[..=turn].windows(2).all(|w| w[1] >= w[0] - 1e-12));
            let back_end = match p.path() {
                PathKind::ZPath => n,
                PathKind::XPath => 3 * n / 4,
            };
            assert!(grid[turn..=back_end]
                .windows(2)
                .all(|w| w[1] <= w[0] + 1e-12));
        }
    }

    #[test]
    fn smoothed_phase_midpoint() {
        let tau = 2.0 / OM0;
        let sigma = 0.01;
        let p = DriveParams::new(OM0, 1.0, 2.0, PathKind::ZPath, 1.2, sigma).unwrap();
        assert!(sigma < tau / 2.0);
        let (phi, phi_dot) = phi_of_t(&p, 2.0 * tau).unwrap();
        assert!((phi - 0.6).abs() < 1e-14);
        assert!((phi_dot - 1.2 / (2.0 * sigma)).abs() < 1e-10);
        let hard = zpath(1.0, 2.0);
        assert_eq!(phi_of_t(&hard, tau).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn xpath_smoothing_returns_to_phi1() {
        let p = DriveParams::new(OM0, 1.0, 2.0, PathKind::XPath, 1.0, 0.005).unwrap();
        let (a, _) = phi_of_t(&p, 0.0).unwrap();
        let (b, _) = phi_of_t(&p, 2.0 * p.tau()).unwrap();
        let (c, _) = phi_of_t(&p, p.total_time()).unwrap();
        assert!(a.abs() < 1e-6 && (b - 1.0).abs() < 1e-6 && c.abs() < 1e-6);
    }

    #[test]
    fn smoothed_phase_derivatives_match_finite_differences() {
        let p = DriveParams::new(OM0, 1.0, 2.0, PathKind::XPath, 1.0, 0.004).unwrap();
        let h = 1e-6;
        for i in 1..200 {
            let t = p.total_time() * i as f64 / 200.0;
            let (_, d1, d2) = phase_derivatives(&p, t).unwrap();
            let (fp, dp, _) = phase_derivatives(&p, t + h).unwrap();
            let (fm, dm, _) = phase_derivatives(&p, t - h).unwrap();
            assert!((d1 - (fp - fm) / (2.0 * h)).abs() < 1e-4 * (1.0 + d1.abs()));
            assert!((d2 - (dp - dm) / (2.0 * h)).abs() < 1e-4 * (1.0 + d2.abs()));
        }
    }

    proptest! {
        #[test]
        fn sample_invariants(eta in 0.1f64..5.0, x in 0.5f64..20.0, frac in 0.0f64..=1.0, xp in any::<bool>()) {
            let path = if xp { PathKind::XPath } else { PathKind::ZPath };
            let p = DriveParams::new(OM0, eta, x, path, FRAC_PI_2, 0.0).unwrap();
            let a = adiabatic_sample(&p, frac * p.total_time()).unwrap();
            prop_assert!(a.omega_r >= 0.0);
            prop_assert!((a.omega * a.omega - a.delta * a.delta - a.omega_r * a.omega_r).abs() <= 1e-10 * a.omega * a.omega);
            prop_assert!((0.0..=PI).contains(&a.theta));
            prop_assert!((a.theta - a.omega_r.atan2(a.delta)).abs() == 0.0);
        }

        #[test]
        fn theta_rates_match_finite_differences(eta in 0.3f64..4.0, x in 1.0f64..6.0, frac in 0.02f64..0.98, k in 0usize..4) {
            let p = DriveParams::new(OM0, eta, x, PathKind::ZPath, FRAC_PI_2, 0.0).unwrap();
            let h = 1e-6;
            let a = sample_in_segment(&p, k, frac).unwrap();
            let fwd = sample_in_segment(&p, k, frac + h).unwrap();
            let bwd = sample_in_segment(&p, k, frac - h).unwrap();
            let dt = 2.0 * h * p.tau();
            prop_assert!((a.theta_dot - (fwd.theta - bwd.theta) / dt).abs() < 1e-5 * (1.0 + a.theta_dot.abs()));
            prop_assert!((a.theta_ddot - (fwd.theta_dot - bwd.theta_dot) / dt).abs() < 1e-4 * (1.0 + a.theta_ddot.abs()));
            prop_assert!((a.omega_dot - (fwd.omega - bwd.omega) / dt).abs() < 1e-5 * (1.0 + a.omega_dot.abs()));
        }

        #[test]
        fn phase_converges_as_sigma_shrinks(frac in 0.05f64..0.95, xp in any::<bool>()) {
            let path = if xp { PathKind::XPath } else { PathKind::ZPath };
            let hard = DriveParams::new(OM0, 1.0, 2.0, path, 1.1, 0.0).unwrap();
            let t = frac * hard.total_time();
            let dist = hard.path().jump_quarters().iter().map(|(q, _)| (t - q * hard.tau()).abs()).fold(f64::INFINITY, f64::min);
            prop_assume!(dist > 1e-3);
            let soft = hard.with_sigma(1e-5).unwrap();
            let (a, _) = phi_of_t(&hard, t).unwrap();
            let (b, _) = phi_of_t(&soft, t).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
