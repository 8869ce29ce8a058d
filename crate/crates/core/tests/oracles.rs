//! Derived quantities checked against independent closed forms or
//! finite-difference reconstructions.

use std::f64::consts::PI;

use satd::dynamics::{phase_decomposition, propagate_lindblad, propagate_unitary};
use satd::experiments::{gate_fidelity, MHZ};
use satd::gates::{state_avg_fidelity, GateKind, GateSpec};
use satd::hamiltonians::{Drive, NoiseParams};
use satd::numkit::{sigma_x, sigma_z, DensityMatrix, StateVector, C64};
use satd::pulses::{delta_of_t, omega_r_of_t, DriveParams, PathKind};
use satd::satd::{alpha, max_gz_over_omega, SatdOptions};

const OMEGA0: f64 = 3.0 * MHZ;

#[test]
fn alpha_matches_its_closed_form() {
    for (gamma, expect) in [(PI / 2.0, 0.25), (PI / 3.0, 3.0 / 16.0), (0.0, 0.0)] {
        let p = GateSpec::new(GateKind::Uz, gamma)
            .unwrap()
            .drive(OMEGA0, 1.0, 2.0, 0.0)
            .unwrap();
        assert!((alpha(&p) - expect).abs() < 1e-15, "γ_g = {gamma}");
    }
}

#[test]
fn gz_peak_matches_finite_difference_reconstruction() {
    // g_z/Ω = α θ̇²/Ω² with θ̇ rebuilt from the sampled pulses.
    for (eta, x) in [(0.7, 2.0), (2.0, 2.0), (3.0, 4.0)] {
        let p = GateSpec::s().drive(OMEGA0, eta, x, 0.0).unwrap();
        let a = alpha(&p);
        let theta = |t: f64| {
            omega_r_of_t(&p, t)
                .unwrap()
                .atan2(delta_of_t(&p, t).unwrap())
        };
        let h = p.tau() * 1e-5;
        let mut peak = 0.0f64;
        for i in 1..4000 {
            let t = p.tau() * i as f64 / 4000.0;
            let td = (theta(t + h) - theta(t - h)) / (2.0 * h);
            let om = delta_of_t(&p, t)
                .unwrap()
                .hypot(omega_r_of_t(&p, t).unwrap());
            peak = peak.max(a * td * td / (om * om));
        }
        let got = max_gz_over_omega(&p).unwrap();
        assert!(
            (got - peak).abs() < 1e-4 * peak,
            "η = {eta}, x = {x}: {got} vs {peak}"
        );
    }
}

#[test]
fn geometric_phase_is_pi_minus_meridian_separation() {
    for phi2 in [0.3, 1.0, PI / 2.0, 2.5] {
        let p = DriveParams::new(OMEGA0, 1.0, 2.0, PathKind::ZPath, phi2, 0.0).unwrap();
        let ph = phase_decomposition(&p, &SatdOptions::default()).unwrap();
        assert!((ph.gamma_g - (PI - phi2)).abs() < 1e-15);
        assert!((ph.gamma_t - ph.gamma_g - ph.gamma_d).abs() < 1e-12);
    }
}

#[test]
fn state_average_of_a_z_rotation() {
    // Identity target, realised Rz(θ): average over cos β|0⟩ + sin β|1⟩ is
    // 1 − sin²(θ/2)/2.
    let id = GateSpec::new(GateKind::Uz, 0.0).unwrap();
    for rot in [0.3, 1.0, PI] {
        let u = propagate_unitary(|_| Ok(sigma_z().scale(C64::new(0.5, 0.0))), 0.0, rot, 1e-12)
            .unwrap()
            .u_final;
        let f = state_avg_fidelity(
            &id,
            |b| {
                let psi = StateVector::qubit(C64::new(b.cos(), 0.0), C64::new(b.sin(), 0.0));
                DensityMatrix::pure(&u.apply(&psi)?)
            },
            2001,
        )
        .unwrap();
        let expect = 1.0 - (rot / 2.0).sin().powi(2) / 2.0;
        assert!(
            (f - expect).abs() < 1e-10,
            "rotation {rot}: {f} vs {expect}"
        );
    }
}

#[test]
fn rabi_oscillation_under_constant_drive() {
    let w = 2.0 * MHZ;
    let h = sigma_x().scale(C64::new(0.5 * w, 0.0));
    let ground =
        DensityMatrix::pure(&StateVector::qubit(C64::new(1.0, 0.0), C64::new(0.0, 0.0))).unwrap();
    for t in [0.05, 0.13, 0.4] {
        let rho =
            propagate_lindblad(|_| Ok(h), &ground, &NoiseParams::default(), 0.0, t, 1e-11).unwrap();
        let p1 = rho.matrix()[(1, 1)].re;
        assert!((p1 - (w * t / 2.0).sin().powi(2)).abs() < 1e-8);
    }
}

#[test]
fn free_decay_and_dephasing_rates() {
    let (k1, k2) = (0.3, 0.7);
    let noise = NoiseParams::new(0.0, 0.0, k1, k2).unwrap();
    let h = sigma_z().scale(C64::new(0.5 * MHZ, 0.0));
    let plus = StateVector::qubit(C64::new(0.6, 0.0), C64::new(0.8, 0.0));
    let rho0 = DensityMatrix::pure(&plus).unwrap();
    let t = 1.7;
    let rho = propagate_lindblad(|_| Ok(h), &rho0, &noise, 0.0, t, 1e-11).unwrap();
    let m = rho.matrix();
    assert!((m[(1, 1)].re - 0.64 * (-2.0 * k1 * t).exp()).abs() < 1e-8);
    // Relaxation out of |1⟩ also removes coherence at rate κ₁.
    let coherence = 0.48 * (-(k1 + k2) * t).exp();
    assert!(
        (m[(0, 1)].norm() - coherence).abs() < 1e-8,
        "{} vs {coherence}",
        m[(0, 1)].norm()
    );
}

#[test]
fn strong_hyperfine_recovers_the_single_qubit_gate() {
    let drive = Drive::corrected(SatdOptions::default());
    for g in [GateSpec::cs(), GateSpec::cnot()] {
        let p = g.drive(OMEGA0, 2.0, 2.0, 0.0).unwrap();
        let f = gate_fidelity(&g, &p, &drive, 20_000.0 * MHZ, 1e-8).unwrap();
        assert!(f > 1.0 - 1e-4, "{:?}: {f}", g.kind);
    }
}
