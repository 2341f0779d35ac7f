use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::basis::ChargeBasis;
use crate::linalg::{check_dim, inner, matrix_element, LinearOperator};
use crate::Result;

/// Phase operator `φ̂₄` of the coupling junction in the charge basis.
///
/// In the charge representation
/// `⟨n|φ̂|m⟩ = -i(-1)^(m-n)/(m-n)` for `m ≠ n` and `0` on the diagonal,
/// acting on the `n₄` index with `n₁, n₂` held fixed. This is the sawtooth
/// phase on the window `(-π, π]`. [`with_center`](Self::with_center) moves
/// the window to `(c-π, c+π]`, which multiplies the off-diagonal entries by
/// `e^{i(m-n)c}` and puts `c` on the diagonal.
#[derive(Debug, Clone)]
pub struct PhaseOperator {
    basis: ChargeBasis,
    center: f64,
    block: Vec<C64>,
}

impl PhaseOperator {
    pub fn new(basis: ChargeBasis) -> Self {
        Self::with_center(basis, 0.0)
    }

    pub fn with_center(basis: ChargeBasis, center: f64) -> Self {
        let side = basis.side();
        let mut block = vec![C64::new(0.0, 0.0); side * side];
        for n in 0..side {
            for m in 0..side {
                block[n * side + m] = Self::element(m as i64 - n as i64, center);
            }
        }
        PhaseOperator { basis, center, block }
    }

    /// Window centered on the circular mean `arg⟨ψ|e^{iφ̂₄}|ψ⟩` of `state`,
    /// which keeps the branch cut away from where `state` has weight.
    pub fn centered_on(basis: ChargeBasis, state: &[C64]) -> Result<Self> {
        check_dim(basis.dim(), state.len())?;
        let side = basis.side();
        let mut mean = C64::new(0.0, 0.0);
        for block in state.chunks(side) {
            // e^{iφ}|n⟩ = |n+1⟩
            for j in 0..side - 1 {
                mean += block[j + 1].conj() * block[j];
            }
        }
        let center = if mean.norm() > 0.0 { mean.arg() } else { 0.0 };
        Ok(Self::with_center(basis, center))
    }

    /// `⟨n|φ̂|m⟩` for `k = m - n`.
    pub fn element(k: i64, center: f64) -> C64 {
        if k == 0 {
            return C64::new(center, 0.0);
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let base = C64::new(0.0, -sign / k as f64);
        base * C64::from_polar(1.0, k as f64 * center)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn basis(&self) -> ChargeBasis {
        self.basis
    }
}

impl LinearOperator for PhaseOperator {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let side = self.basis.side();
        for (xb, yb) in x.chunks(side).zip(y.chunks_mut(side)) {
            for (n, out) in yb.iter_mut().enumerate() {
                let row = &self.block[n * side..(n + 1) * side];
                *out = row.iter().zip(xb).map(|(a, b)| a * b).sum();
            }
        }
    }
}

/// `⟨from|φ̂₄|to⟩` for two states given in the flattened charge basis.
pub fn phase_operator_element(op: &PhaseOperator, from: &[C64], to: &[C64]) -> Result<C64> {
    matrix_element(op, from, to)
}

/// Expansion `A = a₀·1 + aₓσₓ + a_yσ_y + a_zσ_z` of an operator restricted to
/// span{|0⟩, |1⟩}, with `σ_z = diag(1, -1)` in that ordering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliComponents {
    pub identity: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Coefficients `Tr(σ A)/2` of `op` projected on two orthonormal states.
pub fn pauli_decompose<A: LinearOperator + ?Sized>(op: &A, state0: &[C64], state1: &[C64]) -> Result<PauliComponents> {
    check_dim(op.dim(), state0.len())?;
    check_dim(op.dim(), state1.len())?;
    let a0 = op.apply_vec(state0);
    let a1 = op.apply_vec(state1);
    let a00 = inner(state0, &a0);
    let a11 = inner(state1, &a1);
    let a01 = inner(state0, &a1);
    let a10 = inner(state1, &a0);
    let i = C64::new(0.0, 1.0);
    Ok(PauliComponents {
        identity: 0.5 * (a00 + a11).re,
        x: 0.5 * (a01 + a10).re,
        y: 0.5 * (i * (a01 - a10)).re,
        z: 0.5 * (a00 - a11).re,
    })
}
