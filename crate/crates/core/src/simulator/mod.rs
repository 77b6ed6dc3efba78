//! Exact dense evolution: exponentials, Heisenberg images, product-schedule
//! execution and conditional expectations.

pub mod conditional;
pub mod evolution;

pub use conditional::{conditional_expectation, leakage_profile};
pub use evolution::{conjugate, expm_hermitian, heisenberg, run_schedule, EvolutionPlan, Spectrum};
