use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_hamiltonian, Hamiltonian};
use super::phase::{pauli_decompose, phase_operator_element, PauliComponents, PhaseOperator};
use super::spec::{CircuitSpec, FluxPoint};
use super::symmetry::symmetry_point_for_beta;
use crate::linalg::{lowest_eigenpairs, LanczosOptions};
use crate::parallel::Exec;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Number of lowest levels to compute (at least 2).
    pub levels: usize,
    pub lanczos: LanczosOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            levels: 3,
            lanczos: LanczosOptions::default(),
        }
    }
}

/// Low-energy spectrum and coupling operator at one flux point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitSolution {
    pub flux: FluxPoint,
    /// Lowest eigenvalues in GHz, ascending.
    pub energies_ghz: Vec<f64>,
    /// `E₁ - E₀`
    pub gap0_ghz: f64,
    /// `⟨0|φ̂₄|1⟩` in the fixed gauge (real and non-negative).
    pub phi_beta_elem: C64,
    /// Components of `φ̂₄` on the qubit subspace.
    pub pauli: PauliComponents,
    /// Center of the phase window used for `φ̂₄`.
    pub phase_center: f64,
    pub residuals: Vec<f64>,
    /// Gauge-fixed ground and first excited states.
    #[serde(skip)]
    pub states: Vec<Vec<C64>>,
}

impl QubitSolution {
    pub fn abs_phi_beta(&self) -> f64 {
        self.phi_beta_elem.norm()
    }
}

/// Multiplies `v` by the unit phase that makes its largest component real
/// and positive.
fn fix_largest_component(v: &mut [C64]) {
    let (_, pivot) = v
        .iter()
        .enumerate()
        .fold((0.0, C64::new(0.0, 0.0)), |(best, p), (_, z)| {
            if z.norm() > best {
                (z.norm(), *z)
            } else {
                (best, p)
            }
        });
    if pivot.norm() > 0.0 {
        let phase = (pivot / pivot.norm()).conj();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

/// Lowest `opts.levels` eigenpairs of `h`, with the two lowest states
/// gauge-fixed: the ground state's largest charge amplitude is real and
/// positive, and the excited state is rotated so that `⟨0|φ̂₄|1⟩ ≥ 0`.
pub fn diagonalize(h: &Hamiltonian, opts: &SolverOptions) -> Result<QubitSolution> {
    if opts.levels < 2 {
        return Err(Error::invalid("levels", "need at least two levels"));
    }
    let pairs = lowest_eigenpairs(&h.matrix, opts.levels, &opts.lanczos)?;
    let mut states: Vec<Vec<C64>> = pairs.vectors.into_iter().take(2).collect();
    fix_largest_component(&mut states[0]);

    let op = PhaseOperator::centered_on(h.basis, &states[0])?;
    let elem = phase_operator_element(&op, &states[0], &states[1])?;
    if elem.norm() > 0.0 {
        let phase = (elem / elem.norm()).conj();
        states[1].iter_mut().for_each(|z| *z *= phase);
    } else {
        fix_largest_component(&mut states[1]);
    }
    let phi_beta_elem = phase_operator_element(&op, &states[0], &states[1])?;
    let pauli = pauli_decompose(&op, &states[0], &states[1])?;

    Ok(QubitSolution {
        flux: h.flux,
        gap0_ghz: pairs.values[1] - pairs.values[0],
        energies_ghz: pairs.values,
        // exact zero imaginary part after gauge fixing up to rounding
        phi_beta_elem: C64::new(phi_beta_elem.re.max(0.0), phi_beta_elem.im),
        pauli,
        phase_center: op.center(),
        residuals: pairs.residuals,
        states,
    })
}

pub fn solve(spec: &CircuitSpec, flux: FluxPoint, opts: &SolverOptions) -> Result<QubitSolution> {
    diagonalize(&build_hamiltonian(spec, flux)?, opts)
}

/// Solution at the main-loop symmetry point belonging to a fixed `f_beta`.
pub fn solve_at_symmetry(spec: &CircuitSpec, f_beta: f64, opts: &SolverOptions) -> Result<QubitSolution> {
    solve(spec, symmetry_point_for_beta(spec, f_beta), opts)
}

/// Solves at each `f_eps` with `f_beta` slaved through the loop-area ratio.
pub fn sweep_gap(spec: &CircuitSpec, f_eps: &[f64], opts: &SolverOptions, exec: Exec) -> Result<Vec<QubitSolution>> {
    exec.map(f_eps, |&f| solve(spec, spec.flux_at(f), opts))
        .into_iter()
        .collect()
}
