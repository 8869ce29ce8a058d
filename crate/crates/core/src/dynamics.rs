//! Time-ordered propagation (closed and open systems), the closed-form
//! dressed-state evolution operator and the phase bookkeeping behind it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonians::{h_tq_at, single_qubit_at, Drive, NoiseParams, TwoQubitParams};
use crate::numkit::{
    expm_skew, integrate, ComplexMatrix, DensityMatrix, ACCUMULATED_TOL, C64, I, ONE, ZERO,
};
use crate::pulses::DriveParams;
use crate::satd::{controls_in_segment, SatdOptions};

pub const MAX_HALVINGS: u32 = 20;
const INITIAL_STEPS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorResult {
    pub u_final: ComplexMatrix,
    pub step_count: usize,
    /// Richardson estimate of the error in `u_final`.
    pub est_error: f64,
}

fn midpoint_product(
    h: &impl Fn(usize, f64) -> Result<ComplexMatrix>,
    knots: &[f64],
    steps: usize,
    dim: usize,
) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(dim)?;
    for (seg, w) in knots.windows(2).enumerate() {
        let dt = (w[1] - w[0]) / steps as f64;
        for i in 0..steps {
            let hm = h(seg, w[0] + (i as f64 + 0.5) * dt)?;
            if hm.dim() != dim {
                return Err(Error::DimensionMismatch(hm.dim(), dim));
            }
            u = expm_skew(&hm, dt)? * u;
        }
    }
    Ok(u)
}

/// `T exp(−i ∫ H dt)` over `[t0, t1]` by midpoint-exponential stepping with
/// step halving until successive propagators agree to `tol` (Frobenius).
pub fn propagate_unitary(
    h: impl Fn(f64) -> Result<ComplexMatrix>,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<PropagatorResult> {
    propagate_piecewise(|_, t| h(t), &[t0, t1], tol)
}

/// As [`propagate_unitary`], with step grids aligned to `knots`. `H` is
/// called as `h(interval, t)` so that it can take one-sided values at
/// discontinuities located on the knots.
pub fn propagate_piecewise(
    h: impl Fn(usize, f64) -> Result<ComplexMatrix>,
    knots: &[f64],
    tol: f64,
) -> Result<PropagatorResult> {
    check_knots(knots, tol)?;
    let dim = h(0, knots[0])?.dim();
    let mut steps = INITIAL_STEPS;
    let mut coarse = midpoint_product(&h, knots, steps, dim)?;
    let mut diff = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        steps *= 2;
        let fine = midpoint_product(&h, knots, steps, dim)?;
        diff = (fine - coarse).frobenius_norm();
        if diff < tol {
            let defect = fine.unitarity_defect();
            if defect > ACCUMULATED_TOL {
                return Err(Error::Integrator(format!(
                    "propagator lost unitarity ({defect:e})"
                )));
            }
            return Ok(PropagatorResult {
                u_final: fine,
                step_count: steps * (knots.len() - 1),
                est_error: diff / 3.0,
            });
        }
        coarse = fine;
    }
    Err(Error::Convergence {
        halvings: MAX_HALVINGS,
        last_diff: diff,
        tol,
    })
}

fn check_knots(knots: &[f64], tol: f64) -> Result<()> {
    if knots.len() < 2 || knots.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Contract("knots must be strictly increasing".into()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::param(
            "tol",
            format!("must be finite and > 0, got {tol}"),
        ));
    }
    Ok(())
}

/// Gate unitary produced by the given drive over `[0, 4τ]`.
pub fn realize_single_qubit(p: &DriveParams, drive: &Drive, tol: f64) -> Result<PropagatorResult> {
    propagate_piecewise(
        |k, t| single_qubit_at(p, drive, k, p.local_fraction(k, t)),
        &p.knots(),
        tol,
    )
}

/// Two-qubit gate unitary, expressed in the frame that removes the static
/// hyperfine phase `A_hf·T` from the `1↑` level. The Hamiltonian is
/// block-diagonal, so the two nuclear blocks are propagated separately.
pub fn realize_two_qubit(q: &TwoQubitParams, drive: &Drive, tol: f64) -> Result<PropagatorResult> {
    let p = &q.drive;
    let block = |b: usize| {
        propagate_piecewise(
            |k, t| h_tq_at(q, drive, k, p.local_fraction(k, t))?.diag_block(b),
            &p.knots(),
            tol,
        )
    };
    let (down, up) = (block(0)?, block(1)?);
    let mut frame = ComplexMatrix::identity(2)?;
    frame[(1, 1)] = C64::from_polar(1.0, q.a_hf * p.total_time());
    Ok(PropagatorResult {
        u_final: ComplexMatrix::block_diag(&down.u_final, &(frame * up.u_final))?,
        step_count: down.step_count + up.step_count,
        est_error: down.est_error.hypot(up.est_error),
    })
}

/// `[[cos γ + i cos χ sin γ, i e^{−iφ₁} sin χ sin γ], [i e^{iφ₁} sin χ sin γ, cos γ − i cos χ sin γ]]`.
pub fn orange_slice_operator(chi: f64, phi1: f64, gamma: f64) -> ComplexMatrix {
    let (sg, cg) = gamma.sin_cos();
    let (sc, cc) = chi.sin_cos();
    ComplexMatrix::new2(
        C64::new(cg, cc * sg),
        I * C64::from_polar(sc * sg, -phi1),
        I * C64::from_polar(sc * sg, phi1),
        C64::new(cg, -cc * sg),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentPhase {
    pub label: &'static str,
    pub t_start: f64,
    pub t_end: f64,
    /// `−½ ∫ E_DS dt` over the leg.
    pub dynamical: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseDecomposition {
    pub gamma_g: f64,
    pub gamma_d: f64,
    pub gamma_t: f64,
    /// `−½ ∫ E_DS dt` over the `φ₁` quarters.
    pub i_phi1: f64,
    /// `−½ ∫ E_DS dt` over the `φ₂` quarters.
    pub i_phi2: f64,
    /// Per-leg split of the dynamical contribution.
    pub segments: Vec<SegmentPhase>,
    /// Geometric weight `s = (1 + cos χ)/2` of the first leg.
    pub leg_weight: f64,
}

const PHASE_QUAD_TOL: f64 = 1e-12;

/// Geometric and dynamical phases of the dressed-state evolution.
pub fn phase_decomposition(p: &DriveParams, opts: &SatdOptions) -> Result<PhaseDecomposition> {
    if p.sigma() != 0.0 {
        return Err(Error::param(
            "sigma",
            "the phase decomposition needs a hard phase jump (sigma = 0)",
        ));
    }
    let tau = p.tau();
    let quarter = |k: usize| -> Result<f64> {
        let v = integrate(
            |s| Ok(controls_in_segment(p, k, s, opts)?.e_ds),
            0.0,
            1.0,
            PHASE_QUAD_TOL / tau,
        )?;
        Ok(-0.5 * tau * v)
    };
    let q: Vec<f64> = (0..4).map(quarter).collect::<Result<_>>()?;
    let (mut i_phi1, mut i_phi2) = (0.0, 0.0);
    for (k, v) in q.iter().enumerate() {
        if p.path().is_phi2_segment(k) {
            i_phi2 += v;
        } else {
            i_phi1 += v;
        }
    }
    let legs: &[(&'static str, usize, usize)] = match p.path() {
        crate::pulses::PathKind::ZPath => &[("descent", 0, 2), ("return", 2, 4)],
        crate::pulses::PathKind::XPath => &[("descent", 0, 1), ("return", 1, 3), ("closing", 3, 4)],
    };
    let segments = legs
        .iter()
        .map(|&(label, a, b)| SegmentPhase {
            label,
            t_start: a as f64 * tau,
            t_end: b as f64 * tau,
            dynamical: q[a..b].iter().sum(),
        })
        .collect();
    let gamma_g = p.gamma_g();
    let gamma_d = i_phi1 - i_phi2;
    Ok(PhaseDecomposition {
        gamma_g,
        gamma_d,
        gamma_t: gamma_g + gamma_d,
        i_phi1,
        i_phi2,
        segments,
        leg_weight: 0.5 * (1.0 + p.chi().cos()),
    })
}

/// Closed-form gate implemented by the dressed-state evolution.
pub fn ds_evolution_operator(p: &DriveParams, opts: &SatdOptions) -> Result<ComplexMatrix> {
    let ph = phase_decomposition(p, opts)?;
    Ok(orange_slice_operator(p.chi(), p.phi1(), ph.gamma_t))
}

/// A completely positive map on 2×2 density matrices, stored as the 4×4
/// matrix acting on row-major `vec(ρ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    pub superop: ComplexMatrix,
    pub step_count: usize,
    pub est_error: f64,
}

impl Channel {
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let v = [rho[(0, 0)], rho[(0, 1)], rho[(1, 0)], rho[(1, 1)]];
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.superop[(i, j)] * v[j]).sum();
        }
        ComplexMatrix::new2(out[0], out[1], out[2], out[3])
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(rho.dim(), 2));
        }
        let out = self.apply_matrix(rho.matrix());
        let tr = out.trace();
        if (tr - ONE).norm() > 1e-6 {
            return Err(Error::Integrator(format!("trace drifted to {tr}")));
        }
        DensityMatrix::new(out)
    }
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4).expect("4 is supported");
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    m
}

fn transpose(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::new2(a[(0, 0)], a[(1, 0)], a[(0, 1)], a[(1, 1)])
}

fn dissipator(b: &ComplexMatrix) -> ComplexMatrix {
    // M(b) = 2 bρb† − b†bρ − ρb†b
    let id = ComplexMatrix::identity(2).expect("2 is supported");
    let bd = b.adjoint();
    let bdb = bd * *b;
    kron(b, &transpose(&bd)).scale(C64::new(2.0, 0.0))
        - kron(&bdb, &id)
        - kron(&id, &transpose(&bdb))
}

/// Lindblad generator `ρ ↦ −i[H, ρ] + κ₁M(b₋) + κ₂M(b_z)` with
/// `b₋ = |0⟩⟨1|` and `b_z = |1⟩⟨1|`.
pub fn liouvillian(h: &ComplexMatrix, n: &NoiseParams) -> Result<ComplexMatrix> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch(h.dim(), 2));
    }
    let id = ComplexMatrix::identity(2)?;
    let lower = ComplexMatrix::new2(ZERO, ONE, ZERO, ZERO);
    let excited = ComplexMatrix::new2(ZERO, ZERO, ZERO, ONE);
    let coherent = (kron(h, &id) - kron(&id, &transpose(h))).scale(-I);
    Ok(coherent
        + dissipator(&lower).scale(C64::new(n.kappa1, 0.0))
        + dissipator(&excited).scale(C64::new(n.kappa2, 0.0)))
}

fn rk4_product(
    h: &impl Fn(usize, f64) -> Result<ComplexMatrix>,
    n: &NoiseParams,
    knots: &[f64],
    steps: usize,
) -> Result<ComplexMatrix> {
    let mut s = ComplexMatrix::identity(4)?;
    for (seg, w) in knots.windows(2).enumerate() {
        let gen = |t: f64| liouvillian(&h(seg, t)?, n);
        let dt = (w[1] - w[0]) / steps as f64;
        let c = |x: f64| C64::new(x, 0.0);
        for i in 0..steps {
            let t = w[0] + i as f64 * dt;
            let l1 = gen(t)?;
            let lm = gen(t + 0.5 * dt)?;
            let l4 = gen(t + dt)?;
            let k1 = l1 * s;
            let k2 = lm * (s + k1.scale(c(0.5 * dt)));
            let k3 = lm * (s + k2.scale(c(0.5 * dt)));
            let k4 = l4 * (s + k3.scale(c(dt)));
            s = s + (k1 + k2.scale(c(2.0)) + k3.scale(c(2.0)) + k4).scale(c(dt / 6.0));
        }
    }
    Ok(s)
}

/// Lindblad evolution map over `knots[0]..knots[last]` by classical RK4 with
/// step halving until successive maps agree to `tol`.
pub fn lindblad_channel(
    h: impl Fn(usize, f64) -> Result<ComplexMatrix>,
    n: &NoiseParams,
    knots: &[f64],
    tol: f64,
) -> Result<Channel> {
    check_knots(knots, tol)?;
    n.validate()?;
    let mut steps = INITIAL_STEPS;
    let mut coarse = rk4_product(&h, n, knots, steps)?;
    let mut diff = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        steps *= 2;
        let fine = rk4_product(&h, n, knots, steps)?;
        diff = (fine - coarse).frobenius_norm();
        if diff < tol {
            return Ok(Channel {
                superop: fine,
                step_count: steps * (knots.len() - 1),
                est_error: diff / 15.0,
            });
        }
        coarse = fine;
    }
    Err(Error::Convergence {
        halvings: MAX_HALVINGS,
        last_diff: diff,
        tol,
    })
}

pub fn propagate_lindblad(
    h: impl Fn(f64) -> Result<ComplexMatrix>,
    rho0: &DensityMatrix,
    n: &NoiseParams,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<DensityMatrix> {
    lindblad_channel(|_, t| h(t), n, &[t0, t1], tol)?.apply(rho0)
}

/// Open-system gate map for the given drive over `[0, 4τ]`. Systematic
/// errors come from `drive.noise`, decoherence rates from `n`.
pub fn realize_channel(p: &DriveParams, drive: &Drive, tol: f64) -> Result<Channel> {
    lindblad_channel(
        |k, t| single_qubit_at(p, drive, k, p.local_fraction(k, t)),
        &drive.noise,
        &p.knots(),
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{drive_matrix, h0, single_qubit};
    use crate::numkit::{
        frobenius_distance, phase_aligned_distance, sigma_x, sigma_z, StateVector,
    };
    use crate::pulses::{adiabatic_sample, Branch, PathKind};
    use crate::satd::adiabatic_frame;
    use std::f64::consts::{FRAC_PI_2, PI};

    const OM0: f64 = 2.0 * PI * 3.0;

    fn params(path: PathKind, eta: f64, x: f64) -> DriveParams {
        DriveParams::new(OM0, eta, x, path, FRAC_PI_2, 0.0).unwrap()
    }

    fn fid(u0: &ComplexMatrix, ur: &ComplexMatrix) -> f64 {
        let m = u0.adjoint() * *ur;
        let d = u0.dim() as f64;
        (m.trace().norm_sqr() + (m * m.adjoint()).trace().re) / (d * (d + 1.0))
    }

    #[test]
    fn constant_hamiltonian_matches_exponential() {
        let h = drive_matrix(3.0, 5.0, 0.4);
        let r = propagate_unitary(|_| Ok(h), 0.0, 0.7, 1e-10).unwrap();
        let exact = expm_skew(&h, 0.7).unwrap();
        assert!(frobenius_distance(&r.u_final, &exact).unwrap() < 1e-10);
    }

    #[test]
    fn midpoint_stepping_is_second_order() {
        // H(t) = t² σ_z commutes with itself at all times, so the exact propagator is known.
        let h = |_: usize, t: f64| Ok(sigma_z().scale(C64::new(t * t, 0.0)));
        let exact = expm_skew(&sigma_z(), 1.0 / 3.0).unwrap();
        let e1 = (midpoint_product(&h, &[0.0, 1.0], 20, 2).unwrap() - exact).frobenius_norm();
        let e2 = (midpoint_product(&h, &[0.0, 1.0], 40, 2).unwrap() - exact).frobenius_norm();
        assert!((e1 / e2 - 4.0).abs() < 0.05, "ratio {}", e1 / e2);
    }

    #[test]
    fn deep_adiabatic_following() {
        let p = params(PathKind::ZPath, 1.0, 200.0);
        let r = realize_single_qubit(&p, &Drive::bare(), 1e-6).unwrap();
        let psi = r.u_final.apply(&StateVector::qubit(ONE, ZERO)).unwrap();
        let end = adiabatic_sample(&p, p.total_time()).unwrap();
        let w = adiabatic_frame(end.theta, end.phi);
        let col = match end.branch {
            Branch::Upper => 0,
            Branch::Lower => 1,
        };
        let tracked = StateVector::qubit(w[(0, col)], w[(1, col)]);
        assert!(tracked.inner(&psi).unwrap().norm_sqr() > 1.0 - 1e-4);
    }

    #[test]
    fn dressed_operator_examples() {
        let id = ComplexMatrix::identity(2).unwrap();
        assert!(frobenius_distance(&orange_slice_operator(0.3, 0.0, 0.0), &id).unwrap() < 1e-15);
        let not = orange_slice_operator(FRAC_PI_2, 0.0, FRAC_PI_2);
        assert!(frobenius_distance(&not, &sigma_x().scale(I)).unwrap() < 1e-15);
    }

    #[test]
    fn gz_design_cancels_dynamical_phase() {
        let p = params(PathKind::ZPath, 1.0, 2.0);
        let ph = phase_decomposition(&p, &SatdOptions::default()).unwrap();
        assert!(ph.gamma_d.abs() < 1e-8);
        assert!((ph.gamma_g - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(ph.gamma_t, ph.gamma_g + ph.gamma_d);
        let off = phase_decomposition(&p, &SatdOptions::without_gz()).unwrap();
        assert!(off.gamma_d.abs() > 1e-3);
        let flat = DriveParams::new(OM0, 1.0, 2.0, PathKind::ZPath, PI, 0.0).unwrap();
        assert_eq!(flat.gamma_g(), 0.0);
    }

    #[test]
    fn segment_split_adds_up() {
        for path in [PathKind::ZPath, PathKind::XPath] {
            let ph =
                phase_decomposition(&params(path, 2.0, 2.0), &SatdOptions::without_gz()).unwrap();
            let total: f64 = ph.segments.iter().map(|s| s.dynamical).sum();
            assert!((total - (ph.i_phi1 + ph.i_phi2)).abs() < 1e-12);
        }
    }

    #[test]
    fn numerical_and_closed_form_gates_agree() {
        for path in [PathKind::ZPath, PathKind::XPath] {
            for opts in [
                SatdOptions::default(),
                SatdOptions::without_gz(),
                SatdOptions::transitionless(),
            ] {
                let p = params(path, 1.0, 2.0);
                let u = realize_single_qubit(&p, &Drive::corrected(opts), 1e-8)
                    .unwrap()
                    .u_final;
                let ds = ds_evolution_operator(&p, &opts).unwrap();
                assert!(1.0 - fid(&ds, &u) < 1e-9, "{path:?} {opts:?}");
                assert!(phase_aligned_distance(&ds, &u).unwrap() < 1e-6);
            }
        }
    }

    #[test]
    fn closed_lindblad_matches_unitary() {
        let p = params(PathKind::XPath, 2.0, 2.0);
        let drive = Drive::corrected(SatdOptions::default());
        let u = realize_single_qubit(&p, &drive, 1e-10).unwrap().u_final;
        let ch = realize_channel(&p, &drive, 1e-10).unwrap();
        let psi = StateVector::qubit(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let rho = DensityMatrix::pure(&psi).unwrap();
        let out = ch.apply(&rho).unwrap();
        let expect = u.conjugate(rho.matrix());
        assert!(frobenius_distance(out.matrix(), &expect).unwrap() < 1e-8);
    }

    #[test]
    fn amplitude_damping_rate() {
        let k1 = 0.7;
        let n = NoiseParams::new(0.0, 0.0, k1, 0.0).unwrap();
        let zero = ComplexMatrix::zeros(2).unwrap();
        let rho0 = DensityMatrix::pure(&StateVector::qubit(ZERO, ONE)).unwrap();
        for t in [0.1, 0.5, 2.0] {
            let rho = propagate_lindblad(|_| Ok(zero), &rho0, &n, 0.0, t, 1e-10).unwrap();
            assert!((rho.matrix()[(1, 1)].re - (-2.0 * k1 * t).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn dephasing_rate_against_dense_oracle() {
        let k2 = 0.9;
        let n = NoiseParams::new(0.0, 0.0, 0.0, k2).unwrap();
        let zero = ComplexMatrix::zeros(2).unwrap();
        let plus = StateVector::qubit(ONE, ONE).normalized().unwrap();
        let rho0 = DensityMatrix::pure(&plus).unwrap();
        let t = 1.3;
        let rho = propagate_lindblad(|_| Ok(zero), &rho0, &n, 0.0, t, 1e-10).unwrap();
        // dense explicit-Euler reference of ρ̇₀₁ = −κ₂ ρ₀₁
        let steps = 2_000_000;
        let dt = t / steps as f64;
        let mut c = 0.5;
        for _ in 0..steps {
            c -= k2 * c * dt;
        }
        assert!((rho.matrix()[(0, 1)].norm() - c).abs() < 1e-6);
        assert!((rho.matrix()[(0, 1)].norm() - 0.5 * (-k2 * t).exp()).abs() < 1e-9);
    }

    #[test]
    fn lindblad_output_stays_physical() {
        let p = params(PathKind::ZPath, 2.0, 2.0);
        let n = NoiseParams::new(0.05, 0.05, 5e-4, 1e-2).unwrap();
        let drive = Drive::corrected(SatdOptions::default()).with_noise(n);
        let ch = realize_channel(&p, &drive, 1e-9).unwrap();
        for th in [0.0, 0.4, 1.0, 2.5] {
            let psi = StateVector::qubit(C64::new(f64::cos(th), 0.0), C64::new(f64::sin(th), 0.0));
            let out = ch.apply(&DensityMatrix::pure(&psi).unwrap()).unwrap();
            assert!(out.matrix().hermiticity_defect() < 1e-9);
            assert!((out.matrix().trace() - ONE).norm() < 1e-9);
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let h = |t: f64| Ok(drive_matrix(1e6 * t.sin(), 0.0, 0.0));
        match propagate_unitary(h, 0.0, 1.0, 1e-300) {
            Err(Error::Convergence { halvings, .. }) => assert_eq!(halvings, MAX_HALVINGS),
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn blockwise_two_qubit_matches_full_propagation() {
        let p = params(PathKind::ZPath, 2.0, 2.0);
        let q = TwoQubitParams::new(p, 2.0 * PI * 40.0).unwrap();
        let drive = Drive::corrected(SatdOptions::default())
            .with_noise(NoiseParams::systematic(0.03, -0.02).unwrap());
        let blocks = realize_two_qubit(&q, &drive, 1e-9).unwrap().u_final;
        let full = propagate_piecewise(
            |k, t| h_tq_at(&q, &drive, k, p.local_fraction(k, t)),
            &p.knots(),
            1e-9,
        )
        .unwrap()
        .u_final;
        let mut frame = ComplexMatrix::identity(4).unwrap();
        frame[(3, 3)] = C64::from_polar(1.0, q.a_hf * p.total_time());
        assert!(frobenius_distance(&blocks, &(frame * full)).unwrap() < 1e-8);
    }

    #[test]
    fn bare_drive_uses_uncorrected_pulses() {
        let p = params(PathKind::ZPath, 1.0, 2.0);
        let t = 0.77 * p.tau();
        assert_eq!(
            single_qubit(&p, &Drive::bare(), t).unwrap(),
            h0(&p, t).unwrap()
        );
    }
}
