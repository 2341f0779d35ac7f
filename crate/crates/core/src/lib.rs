//! Simulation and analysis of a flux qubit galvanically coupled to an open
//! transmission line.
//!
//! The forward chain runs from a circuit description to a transmission
//! spectrum:
//!
//! * [`circuit`] builds the three-node flux-qubit Hamiltonian in a truncated
//!   charge basis, diagonalizes it and projects the coupling-junction phase
//!   operator onto the qubit subspace.
//! * [`spinboson`] maps the phase matrix element to the emission rate
//!   `Γ₁/Δ`, the ohmic coupling `α`, the dynamical regime and the
//!   renormalized gap.
//! * [`scattering`] evaluates the thermally damped two-level steady state and
//!   the coherent reflection / transmission amplitudes.
//!
//! The inverse chain lives in [`fitting`]: complex Lorentzian fits of
//! transmission traces, bounds on `Γ₁` and the thermal occupation, and
//! effective temperatures. [`pipeline`] strings both chains together and
//! [`io`] handles configuration files and CSV/JSON exports.
//!
//! All energies, rates and frequencies are cyclic frequencies in GHz
//! (`ω/2π`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod constants;
mod error;
pub mod fitting;
pub mod io;
pub mod linalg;
pub mod parallel;
pub mod pipeline;
pub mod scattering;
pub mod spinboson;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use parallel::Exec;
