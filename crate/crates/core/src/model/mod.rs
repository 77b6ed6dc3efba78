//! Lattices, interactions and their norms.

pub mod config;
pub mod decay;
pub mod decompose;
pub mod derivation;
pub mod interaction;
pub mod lattice;
pub mod norms;
pub mod pauli;

pub use config::Model;
pub use decay::DecayFunction;
pub use decompose::{decompose_even_odd, decompose_greedy_coloring, Decomposition};
pub use derivation::{derivation, DERIVATION_THRESHOLD};
pub use interaction::{Interaction, Term};
pub use lattice::{Boundary, LatticeGraph};
pub use norms::{
    almost_local_bound, anchored_norm, interaction_norm, truncation_bound_check, AlmostLocalBound,
    TruncationBound,
};
pub use pauli::{expand_dense, Pauli, PauliString, PauliTerm};
