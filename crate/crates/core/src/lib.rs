//! Verification and exploration engine for braiding of Z_d parafermions.
//!
//! The crate builds parafermion operators on qudit registers, solves the
//! constraint equations that make a parity-diagonal ansatz a braid-group
//! representation, compiles braid words into logical qudit gates and
//! certifies Clifford-group generation by tableau closure.

pub mod braid;
pub mod clifford;
pub mod constraints;
pub mod error;
pub mod linalg;
pub mod logical;
pub mod parafermion;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
