//! CNOT gate construction for resonantly driven two-qubit systems with a
//! tunable `XX + YY + k ZZ` coupling.
//!
//! When both Rabi drives track the coupling strength, `Ω_i(t) = Λ_i(k) g(t)`,
//! the Hamiltonian is a fixed matrix times `g(t)` and the resulting gate
//! depends only on the pulse area `∫ g dt`. An area of pi/2 produces
//! `exp(-i pi/4 XX)`, which three instantaneous local rotations turn into CNOT.
//!
//! * [`linalg`]: 2×2 / 4×4 complex operators, Pauli algebra, Hermitian exponentials.
//! * [`steering`]: tracking coefficients, Hamiltonian, steering generator, CNOT schedule.
//! * [`pulse`]: switching profiles, areas, gate-time solving and the summary table.
//! * [`propagate`]: time-ordered numerical propagation of schedules.
//! * [`equivalence`]: fidelity, Makhlin invariants, Weyl chamber coordinates.
//! * [`cli`]: the `cnot-steer` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod linalg;
pub mod propagate;
pub mod pulse;
pub mod quad;
pub mod steering;
pub mod tol;

pub use error::{Error, Result};
