//! Arbitrary-order Trotter-Suzuki product formulas for lattice Hamiltonians,
//! with an exact dense backend for small spin-1/2 systems.

pub mod dense;
pub mod error;
pub mod experiments;
pub mod model;
pub mod schedule;
pub mod simulator;

pub use dense::{c64, error_norm, DenseOperator};
pub use error::{Error, Result};
