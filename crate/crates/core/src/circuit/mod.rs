//! Flux-qubit circuit: device description, charge-basis Hamiltonian,
//! diagonalization and the coupling-junction phase operator.
//!
//! The circuit has five junctions. Junctions 1, 2 and 3 sit in the main
//! loop together with the coupling SQUID formed by junctions 4 and 5. Node
//! phases `φ₁, φ₂, φ₄` are the independent degrees of freedom; the main-loop
//! frustration `f_ε` is placed on junction 3 and the SQUID frustration `f_β`
//! on junction 5.

mod basis;
mod hamiltonian;
mod phase;
mod solve;
mod spec;
mod symmetry;

pub use basis::{ChargeBasis, ChargeBasisIndex};
pub use hamiltonian::{
    build_hamiltonian, closed_form_kinetic, kinetic_matrix, Hamiltonian, HamiltonianModel, JosephsonTerm,
};
pub use phase::{pauli_decompose, phase_operator_element, PauliComponents, PhaseOperator};
pub use solve::{diagonalize, solve, solve_at_symmetry, sweep_gap, QubitSolution, SolverOptions};
pub use spec::{CircuitSpec, FluxPoint, DEFAULT_DIM_CAP};
pub use symmetry::{symmetry_phasor, symmetry_point_for_beta, symmetry_points, symmetry_residual};
