//! Exact phases, dense operators and generalized Pauli operators.

pub mod operator;
pub mod phase;
pub mod qudit;

pub use operator::{equal_up_to_phase, DenseOperator, DEFAULT_TOL};
pub use phase::CyclotomicPhase;
pub use qudit::{
    clock, fourier_gate, pauli_monomial, pauli_x, pauli_z, shift, size_bound, QuditSystem,
    DEFAULT_SIZE_BOUND, SIZE_BOUND_ENV,
};
