//! Small dense complex linear algebra for the 2×2 and 4×4 operators used
//! throughout the crate: Hamiltonians, propagators and density matrices.
//!
//! Everything is stack-allocated and `Copy`; values are immutable once built,
//! so they can be shared freely between sweep workers.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for structural contract checks (Hermiticity, unitarity).
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for quantities accumulated over a full evolution.
pub const ACCUMULATED_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

const MAX_DIM: usize = 4;

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; MAX_DIM * MAX_DIM],
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; MAX_DIM * MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(entries.len(), dim * dim));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("matrix entries"));
        }
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = entries[i * dim + j];
            }
        }
        Ok(m)
    }

    pub(crate) fn from_fn2(f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self {
            dim: 2,
            data: [ZERO; 16],
        };
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub(crate) fn new2(a: C64, b: C64, c: C64, d: C64) -> Self {
        let mut m = Self {
            dim: 2,
            data: [ZERO; 16],
        };
        m.data[0] = a;
        m.data[1] = b;
        m.data[MAX_DIM] = c;
        m.data[MAX_DIM + 1] = d;
        m
    }

    /// Block-diagonal 4×4 matrix `diag(upper, lower)` from two 2×2 blocks.
    pub fn block_diag(upper: &Self, lower: &Self) -> Result<Self> {
        if upper.dim != 2 || lower.dim != 2 {
            return Err(Error::DimensionMismatch(upper.dim.max(lower.dim), 2));
        }
        let mut m = Self::zeros(4)?;
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = upper[(i, j)];
                m[(i + 2, j + 2)] = lower[(i, j)];
            }
        }
        Ok(m)
    }

    /// Extracts diagonal block `b` (0 or 1) of a 4×4 matrix.
    pub fn diag_block(&self, b: usize) -> Result<Self> {
        if self.dim != 4 || b > 1 {
            return Err(Error::Contract(
                "diag_block needs a 4×4 matrix and block 0 or 1".into(),
            ));
        }
        let o = 2 * b;
        Ok(Self::from_fn2(|i, j| self[(i + o, j + o)]))
    }

    fn off_blocks_zero(&self) -> bool {
        self.dim == 4
            && (0..2).all(|i| (2..4).all(|j| self[(i, j)] == ZERO && self[(j, i)] == ZERO))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn entries(&self) -> impl Iterator<Item = &C64> + '_ {
        (0..self.dim).flat_map(move |i| self.data[i * MAX_DIM..i * MAX_DIM + self.dim].iter())
    }

    pub fn adjoint(&self) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.data.iter_mut().for_each(|z| *z *= s);
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖H − H†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = if i == j { ONE } else { ZERO };
                s += (p[(i, j)] - e).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() < tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    pub fn det(&self) -> C64 {
        match self.dim {
            2 => self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)],
            _ => {
                // Laplace expansion along the first row.
                let minor = |skip: usize| {
                    let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
                    let a = |r: usize, c: usize| self[(r, cols[c])];
                    a(1, 0) * (a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1))
                        - a(1, 1) * (a(2, 0) * a(3, 2) - a(2, 2) * a(3, 0))
                        + a(1, 2) * (a(2, 0) * a(3, 1) - a(2, 1) * a(3, 0))
                };
                (0..4)
                    .map(|c| {
                        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                        self[(0, c)] * minor(c) * sign
                    })
                    .sum()
            }
        }
    }

    /// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues
    /// and the matrix whose columns are the matching eigenvectors.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_finite() {
            return Err(Error::NonFinite("hermitian_eigen input"));
        }
        let n = self.dim;
        let m = nalgebra::DMatrix::<C64>::from_fn(n, n, |i, j| self[(i, j)]);
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut vecs = ComplexMatrix::zeros(n)?;
        let mut vals = Vec::with_capacity(n);
        for (col, &k) in order.iter().enumerate() {
            vals.push(eig.eigenvalues[k]);
            for r in 0..n {
                vecs[(r, col)] = eig.eigenvectors[(r, k)];
            }
        }
        Ok((vals, vecs))
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim != self.dim {
            return Err(Error::DimensionMismatch(self.dim, v.dim));
        }
        let mut out = [ZERO; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..self.dim).map(|j| self[(i, j)] * v.amps[j]).sum();
        }
        Ok(StateVector {
            dim: self.dim,
            amps: out,
        })
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        *self * *rho * self.adjoint()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * MAX_DIM + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * MAX_DIM + j]
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    #[inline]
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix {
            dim: n,
            data: [ZERO; 16],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * MAX_DIM + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * MAX_DIM + j] += a * rhs.data[k * MAX_DIM + j];
                }
            }
        }
        out
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        let mut out = self;
        out.data
            .iter_mut()
            .zip(rhs.data.iter())
            .for_each(|(a, b)| *a += b);
        out
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        let mut out = self;
        out.data
            .iter_mut()
            .zip(rhs.data.iter())
            .for_each(|(a, b)| *a -= b);
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::new2(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::new2(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::new2(ONE, ZERO, ZERO, -ONE)
}

/// `‖A − B‖_F`.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    Ok((*a - *b).frobenius_norm())
}

/// Frobenius distance after removing the best global phase between `a` and `b`.
pub fn phase_aligned_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let overlap = (a.adjoint() * *b).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    frobenius_distance(&a.scale(phase), b)
}

/// `exp(−i·H·dt)` for Hermitian `H`.
///
/// 2×2 matrices use the closed Pauli form; block-diagonal 4×4 matrices are
/// split into two 2×2 blocks; any other 4×4 goes through a Hermitian
/// eigendecomposition.
pub fn expm_skew(h: &ComplexMatrix, dt: f64) -> Result<ComplexMatrix> {
    if !h.is_finite() || !dt.is_finite() {
        return Err(Error::NonFinite("expm_skew input"));
    }
    let defect = h.hermiticity_defect();
    if defect > STRUCTURAL_TOL * h.frobenius_norm().max(1.0) {
        return Err(Error::Contract(format!(
            "expm_skew needs a Hermitian argument (‖H − H†‖ = {defect:e})"
        )));
    }
    match h.dim {
        2 => Ok(expm_skew2(h, dt)),
        _ if h.off_blocks_zero() => {
            let a = expm_skew2(&h.diag_block(0)?, dt);
            let b = expm_skew2(&h.diag_block(1)?, dt);
            ComplexMatrix::block_diag(&a, &b)
        }
        _ => {
            let (vals, vecs) = h.hermitian_eigen()?;
            let mut d = ComplexMatrix::zeros(4)?;
            for (k, &lam) in vals.iter().enumerate() {
                d[(k, k)] = C64::from_polar(1.0, -lam * dt);
            }
            Ok(vecs * d * vecs.adjoint())
        }
    }
}

fn expm_skew2(h: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    // H = a0·I + a·σ with real a0, a.
    let a0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let off = 0.5 * (h[(0, 1)] + h[(1, 0)].conj());
    let ax = off.re;
    let ay = -off.im;
    let az = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let norm = (ax * ax + ay * ay + az * az).sqrt();
    let phase = norm * dt;
    let (c, s) = if norm > 0.0 {
        (phase.cos(), phase.sin() / norm)
    } else {
        (1.0, dt)
    };
    let g = C64::from_polar(1.0, -a0 * dt);
    ComplexMatrix::new2(
        g * C64::new(c, -s * az),
        g * C64::new(-s * ay, -s * ax),
        g * C64::new(s * ay, -s * ax),
        g * C64::new(c, s * az),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    dim: usize,
    amps: [C64; MAX_DIM],
}

impl StateVector {
    pub fn new(amps: &[C64]) -> Result<Self> {
        check_dim(amps.len())?;
        let mut a = [ZERO; MAX_DIM];
        a[..amps.len()].copy_from_slice(amps);
        Ok(Self {
            dim: amps.len(),
            amps: a,
        })
    }

    pub fn qubit(c0: C64, c1: C64) -> Self {
        Self {
            dim: 2,
            amps: [c0, c1, ZERO, ZERO],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps[..self.dim]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() < tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Contract(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        let mut out = *self;
        out.amps.iter_mut().for_each(|z| *z /= n);
        Ok(out)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self
            .amplitudes()
            .iter()
            .zip(other.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix {
            dim: self.dim,
            data: [ZERO; 16],
        };
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        m
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<C64> {
        self.inner(&a.apply(self)?)
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("density matrix"));
        }
        let herm = m.hermiticity_defect();
        if herm > STRUCTURAL_TOL {
            return Err(Error::Contract(format!(
                "density matrix not Hermitian (defect {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > ACCUMULATED_TOL || tr.im.abs() > ACCUMULATED_TOL {
            return Err(Error::Contract(format!("density matrix trace {tr} ≠ 1")));
        }
        let (vals, _) = m.hermitian_eigen()?;
        if vals[0] < -ACCUMULATED_TOL {
            return Err(Error::Contract(format!(
                "density matrix has negative eigenvalue {:e}",
                vals[0]
            )));
        }
        Ok(Self(m))
    }

    pub fn pure(psi: &StateVector) -> Result<Self> {
        Self::new(psi.normalized()?.projector())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// `⟨ψ|ρ|ψ⟩`, real by Hermiticity.
    pub fn overlap(&self, psi: &StateVector) -> Result<f64> {
        Ok(psi.expectation(&self.0)?.re)
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * G7_WEIGHTS[3];
    for k in 0..7 {
        let dx = h * GK_NODES[k];
        let pair = f(c - dx)? + f(c + dx)?;
        kronrod += GK_WEIGHTS[k] * pair;
        if k % 2 == 1 {
            gauss += G7_WEIGHTS[k / 2] * pair;
        }
    }
    Ok((kronrod * h, ((kronrod - gauss) * h).abs()))
}

/// Adaptive Gauss–Kronrod quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a, b, tol, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, local_tol, depth)) = stack.pop() {
        let (val, err) = gk15(&mut f, lo, hi)?;
        if err <= local_tol || depth >= 40 || (hi - lo).abs() < 1e-15 * (b - a).abs() {
            if err > local_tol && err > 1e3 * tol {
                return Err(Error::Integrator(format!(
                    "quadrature stalled on [{lo}, {hi}] with error {err:e}"
                )));
            }
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, 0.5 * local_tol, depth + 1));
            stack.push((lo, mid, 0.5 * local_tol, depth + 1));
        }
    }
    Ok(total)
}
