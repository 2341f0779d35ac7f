use std::f64::consts::TAU;

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;

use super::basis::{ChargeBasis, ChargeBasisIndex};
use super::spec::{CircuitSpec, FluxPoint};
use crate::linalg::CsrMatrix;
use crate::{Error, Result};

/// One Josephson energy `-E·cos(w·φ + θ)`, where `w` picks integer
/// combinations of `(φ₁, φ₂, φ₄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JosephsonTerm {
    pub energy_ghz: f64,
    pub winding: [i32; 3],
    pub phase: f64,
}

impl JosephsonTerm {
    pub fn new(energy_ghz: f64, winding: [i32; 3], phase: f64) -> Self {
        JosephsonTerm {
            energy_ghz,
            winding,
            phase,
        }
    }
}

/// Dimensionless capacitance matrix `K` in the `(φ₁, φ₂, φ₄)` coordinates.
pub fn kinetic_matrix(spec: &CircuitSpec) -> Matrix3<f64> {
    let CircuitSpec { r1, r2, r3, r4, r5, .. } = *spec;
    Matrix3::new(
        r1 + r3,
        r3,
        r3, //
        r3,
        r2 + r3,
        r3, //
        r3,
        r3,
        r3 + r4 + r5,
    )
}

/// Coefficients `(c₁₁, c₂₂, c₄₄, c₁₂, c₁₄, c₂₄)` of the charging energy
/// `4E_C/det K · (c₁₁n₁² + c₂₂n₂² + c₄₄n₄² + c₁₂n₁n₂ + c₁₄n₁n₄ + c₂₄n₂n₄)`
/// written out by hand, together with `det K`. Used as a cross-check on the
/// numerical inverse.
pub fn closed_form_kinetic(spec: &CircuitSpec) -> ([f64; 6], f64) {
    let CircuitSpec { r1, r2, r3, r4, r5, .. } = *spec;
    let r45 = r4 + r5;
    let det = r2 * r3 * r45 + r1 * (r3 * r45 + r2 * (r3 + r45));
    let coeffs = [
        r3 * r45 + r2 * (r3 + r45),
        r3 * r45 + r1 * (r3 + r45),
        r2 * r3 + r1 * (r2 + r3),
        -2.0 * r3 * r45,
        -2.0 * r3 * r2,
        -2.0 * r3 * r1,
    ];
    (coeffs, det)
}

/// Charging quadratic form plus a list of Josephson terms on a charge basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianModel {
    pub basis: ChargeBasis,
    /// `4E_C·K⁻¹` in GHz: the charging energy is `nᵀ M n`.
    pub charging_ghz: Matrix3<f64>,
    pub josephson: Vec<JosephsonTerm>,
}

impl HamiltonianModel {
    /// Model for `spec` at `flux`, with the inverse capacitance obtained
    /// numerically.
    pub fn from_spec(spec: &CircuitSpec, flux: FluxPoint) -> Result<Self> {
        spec.validate()?;
        flux.validate()?;
        let basis = ChargeBasis::with_cap(spec.n_trunc, spec.dim_cap)?;
        let inv = kinetic_matrix(spec)
            .try_inverse()
            .ok_or_else(|| Error::invalid("r1..r5", "singular capacitance matrix"))?;
        let ej = spec.ej_ghz;
        let josephson = vec![
            JosephsonTerm::new(ej * spec.r1, [1, 0, 0], 0.0),
            JosephsonTerm::new(ej * spec.r2, [0, 1, 0], 0.0),
            JosephsonTerm::new(ej * spec.r4, [0, 0, 1], 0.0),
            // φ₃ = -2πf_ε - φ₁ - φ₂ - φ₄
            JosephsonTerm::new(ej * spec.r3, [1, 1, 1], TAU * flux.f_eps),
            // SQUID partner of junction 4
            JosephsonTerm::new(ej * spec.r5, [0, 0, 1], -TAU * flux.f_beta),
        ];
        Ok(HamiltonianModel {
            basis,
            charging_ghz: inv * (4.0 * spec.ec_ghz),
            josephson,
        })
    }

    fn charging_energy(&self, idx: ChargeBasisIndex) -> f64 {
        let n = idx.as_array().map(f64::from);
        let m = &self.charging_ghz;
        let mut e = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                e += n[i] * m[(i, j)] * n[j];
            }
        }
        e
    }

    /// Assembles the sparse matrix. Each off-diagonal entry is written
    /// together with its conjugate partner, so the result is exactly
    /// Hermitian.
    pub fn assemble(&self) -> CsrMatrix {
        let basis = self.basis;
        let mut trip = Vec::with_capacity(basis.dim() * (1 + 2 * self.josephson.len()));
        for (flat, idx) in basis.iter().enumerate() {
            trip.push((flat, flat, C64::new(self.charging_energy(idx), 0.0)));
            for term in &self.josephson {
                if term.energy_ghz == 0.0 {
                    continue;
                }
                let [w1, w2, w4] = term.winding;
                let shifted = ChargeBasisIndex::new(idx.n1 + w1, idx.n2 + w2, idx.n4 + w4);
                // e^{i w·φ}|n⟩ = |n + w⟩
                if let Some(to) = basis.flatten(shifted) {
                    let amp = C64::from_polar(-0.5 * term.energy_ghz, term.phase);
                    trip.push((to, flat, amp));
                    trip.push((flat, to, amp.conj()));
                }
            }
        }
        CsrMatrix::from_triplets(basis.dim(), trip)
    }
}

/// Sparse Hamiltonian (GHz) together with the basis and flux it was built on.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub matrix: CsrMatrix,
    pub basis: ChargeBasis,
    pub flux: FluxPoint,
}

pub fn build_hamiltonian(spec: &CircuitSpec, flux: FluxPoint) -> Result<Hamiltonian> {
    let model = HamiltonianModel::from_spec(spec, flux)?;
    Ok(Hamiltonian {
        matrix: model.assemble(),
        basis: model.basis,
        flux,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> CircuitSpec {
        CircuitSpec::tunable().with_n_trunc(3)
    }

    #[test]
    fn numeric_inverse_matches_closed_form() {
        for spec in [
            CircuitSpec::tunable(),
            CircuitSpec::tunable_swapped(),
            CircuitSpec::fixed(1.8),
        ] {
            let inv = kinetic_matrix(&spec).try_inverse().unwrap();
            let (c, det) = closed_form_kinetic(&spec);
            assert!((kinetic_matrix(&spec).determinant() - det).abs() < 1e-12);
            let expect = [
                (0, 0, c[0]),
                (1, 1, c[1]),
                (2, 2, c[2]),
                (0, 1, c[3] / 2.0),
                (0, 2, c[4] / 2.0),
                (1, 2, c[5] / 2.0),
            ];
            for (i, j, v) in expect {
                assert!((inv[(i, j)] - v / det).abs() < 1e-12, "({i},{j})");
                assert!((inv[(j, i)] - v / det).abs() < 1e-12, "({j},{i})");
            }
        }
    }

    #[test]
    fn exactly_hermitian() {
        for flux in [
            FluxPoint::new(0.5, 0.0),
            FluxPoint::new(0.37, 0.123),
            FluxPoint::new(-3.1, 0.77),
        ] {
            let h = build_hamiltonian(&small(), flux).unwrap();
            assert_eq!(h.matrix.hermiticity_defect(), 0.0);
        }
    }

    #[test]
    fn cosine_couples_neighbouring_charges_with_half_amplitude() {
        let spec = small();
        let h = build_hamiltonian(&spec, FluxPoint::new(0.0, 0.0)).unwrap();
        let b = h.basis;
        let a = b.flatten(ChargeBasisIndex::new(0, 0, 0)).unwrap();
        let up1 = b.flatten(ChargeBasisIndex::new(1, 0, 0)).unwrap();
        let down2 = b.flatten(ChargeBasisIndex::new(0, -1, 0)).unwrap();
        assert_eq!(h.matrix.get(up1, a), C64::new(-0.5 * spec.ej_ghz * spec.r1, 0.0));
        assert_eq!(h.matrix.get(down2, a), C64::new(-0.5 * spec.ej_ghz * spec.r2, 0.0));
        // r4 and r5 merge at f_beta = 0
        let up4 = b.flatten(ChargeBasisIndex::new(0, 0, 1)).unwrap();
        let v = h.matrix.get(up4, a);
        assert!((v.re + 0.5 * spec.ej_ghz * (spec.r4 + spec.r5)).abs() < 1e-12);
        assert_eq!(h.matrix.get(a, a), C64::new(0.0, 0.0));
    }

    #[test]
    fn flux_enters_as_phase_factor() {
        let spec = small();
        let f = 0.2;
        let h = build_hamiltonian(&spec, FluxPoint::new(f, 0.0)).unwrap();
        let b = h.basis;
        let a = b.flatten(ChargeBasisIndex::new(0, 0, 0)).unwrap();
        let all = b.flatten(ChargeBasisIndex::new(1, 1, 1)).unwrap();
        let v = h.matrix.get(all, a);
        let expect = C64::from_polar(-0.5 * spec.ej_ghz * spec.r3, TAU * f);
        assert!((v - expect).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_finite_flux_and_oversized_basis() {
        let spec = small();
        assert!(matches!(
            build_hamiltonian(&spec, FluxPoint::new(f64::NAN, 0.0)),
            Err(Error::NonFiniteFlux { .. })
        ));
        let big = CircuitSpec::tunable().with_n_trunc(11);
        assert!(matches!(
            build_hamiltonian(&big, FluxPoint::new(0.5, 0.0)),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn hermitian_at_any_flux(f_eps in -2.0..2.0f64, f_beta in -2.0..2.0f64) {
            let h = build_hamiltonian(&small(), FluxPoint::new(f_eps, f_beta)).unwrap();
            prop_assert_eq!(h.matrix.hermiticity_defect(), 0.0);
        }
    }
}
