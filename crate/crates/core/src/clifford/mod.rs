//! Pauli labels, Clifford tableaux and group closure.

pub mod closure;
pub mod pauli;
pub mod tableau;

pub use closure::{
    clifford_group_order, closure, closure_with, symplectic_group_order, CliffordGroup, PhaseMode,
    DEFAULT_CLOSURE_LIMIT,
};
pub use pauli::PauliLabel;
pub use tableau::{clifford_membership, controlled_x, reference_generators, CliffordTableau, MEMBERSHIP_TOL};
