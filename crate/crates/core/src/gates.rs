//! Target gates and fidelity metrics.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::dynamics::{orange_slice_operator, Channel};
use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, DensityMatrix, StateVector, ACCUMULATED_TOL, C64};
use crate::pulses::{DriveParams, PathKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    Uz,
    Ux,
    ControlledUz,
    ControlledUx,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub kind: GateKind,
    pub gamma_g: f64,
}

impl GateSpec {
    pub fn new(kind: GateKind, gamma_g: f64) -> Result<Self> {
        if !gamma_g.is_finite() {
            return Err(Error::param("gamma_g", "must be finite"));
        }
        Ok(Self { kind, gamma_g })
    }

    pub fn s() -> Self {
        Self {
            kind: GateKind::Uz,
            gamma_g: FRAC_PI_2,
        }
    }

    pub fn not() -> Self {
        Self {
            kind: GateKind::Ux,
            gamma_g: FRAC_PI_2,
        }
    }

    pub fn cs() -> Self {
        Self {
            kind: GateKind::ControlledUz,
            gamma_g: FRAC_PI_2,
        }
    }

    pub fn cnot() -> Self {
        Self {
            kind: GateKind::ControlledUx,
            gamma_g: FRAC_PI_2,
        }
    }

    pub fn is_controlled(&self) -> bool {
        matches!(self.kind, GateKind::ControlledUz | GateKind::ControlledUx)
    }

    pub fn path(&self) -> PathKind {
        match self.kind {
            GateKind::Uz | GateKind::ControlledUz => PathKind::ZPath,
            GateKind::Ux | GateKind::ControlledUx => PathKind::XPath,
        }
    }

    pub fn chi(&self) -> f64 {
        self.path().chi()
    }

    /// `φ₂ = π − γ_g` with `φ₁ = 0`.
    pub fn phi2(&self) -> f64 {
        PI - self.gamma_g
    }

    /// Drive parameters realising this gate.
    pub fn drive(&self, omega0: f64, eta: f64, x: f64, sigma: f64) -> Result<DriveParams> {
        DriveParams::new(omega0, eta, x, self.path(), self.phi2(), sigma)
    }

    /// Single-qubit gate underlying a controlled gate (identity map otherwise).
    pub fn target(&self) -> GateSpec {
        let kind = match self.kind {
            GateKind::ControlledUz => GateKind::Uz,
            GateKind::ControlledUx => GateKind::Ux,
            k => k,
        };
        GateSpec { kind, ..*self }
    }
}

/// `cos γ_g I + i sin γ_g (cos χ σ_z + sin χ σ_x)`.
pub fn ideal_gate(g: &GateSpec) -> Result<ComplexMatrix> {
    if g.is_controlled() {
        return Err(Error::Contract(
            "controlled gates need ideal_two_qubit".into(),
        ));
    }
    Ok(orange_slice_operator(g.chi(), 0.0, g.gamma_g))
}

/// `block-diag(U_sq, I)` in the basis `{0↓, 1↓, 0↑, 1↑}`.
pub fn ideal_two_qubit(g: &GateSpec) -> Result<ComplexMatrix> {
    if !g.is_controlled() {
        return Err(Error::Contract(
            "ideal_two_qubit needs a controlled gate".into(),
        ));
    }
    ComplexMatrix::block_diag(&ideal_gate(&g.target())?, &ComplexMatrix::identity(2)?)
}

/// `(|Tr M|² + Tr(M M†)) / (d(d+1))` with `M = U₀† U_r`.
pub fn avg_gate_fidelity(u0: &ComplexMatrix, ur: &ComplexMatrix) -> Result<f64> {
    if u0.dim() != ur.dim() {
        return Err(Error::DimensionMismatch(u0.dim(), ur.dim()));
    }
    for (name, u) in [("target", u0), ("realised", ur)] {
        let defect = u.unitarity_defect();
        if defect > ACCUMULATED_TOL {
            return Err(Error::Contract(format!(
                "{name} operator is not unitary (‖U†U − I‖ = {defect:e})"
            )));
        }
    }
    let m = u0.adjoint() * *ur;
    let d = u0.dim() as f64;
    Ok((m.trace().norm_sqr() + (m * m.adjoint()).trace().re) / (d * (d + 1.0)))
}

pub const DEFAULT_STATE_GRID: usize = 1001;

/// Initial state `cos θ |0⟩ + sin θ |1⟩`.
pub fn real_state(theta: f64) -> StateVector {
    StateVector::qubit(C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0))
}

/// Trapezoid average over `θ ∈ [0, 2π]` of `⟨ψ_ideal(θ)| ρ(θ) |ψ_ideal(θ)⟩`,
/// where `ρ(θ)` is the realised output for input `cos θ |0⟩ + sin θ |1⟩`.
pub fn state_avg_fidelity(
    g: &GateSpec,
    rho_of_theta: impl Fn(f64) -> Result<DensityMatrix>,
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 3 || grid_size.is_multiple_of(2) {
        return Err(Error::param(
            "grid_size",
            format!("must be odd and >= 3, got {grid_size}"),
        ));
    }
    let u0 = ideal_gate(g)?;
    let m = grid_size - 1;
    let mut total = 0.0;
    for i in 0..grid_size {
        let theta = 2.0 * PI * i as f64 / m as f64;
        let w = if i == 0 || i == m { 0.5 } else { 1.0 };
        let ideal = u0.apply(&real_state(theta))?;
        total += w * rho_of_theta(theta)?.overlap(&ideal)?;
    }
    Ok(total / m as f64)
}

/// [`state_avg_fidelity`] for a channel applied to each initial state.
pub fn channel_state_fidelity(g: &GateSpec, ch: &Channel, grid_size: usize) -> Result<f64> {
    state_avg_fidelity(
        g,
        |th| ch.apply(&DensityMatrix::pure(&real_state(th))?),
        grid_size,
    )
}
