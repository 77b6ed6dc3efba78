//! Built-in models used by the studies and tests.

use crate::error::Result;
use crate::model::{
    decompose_even_odd, Boundary, DecayFunction, Decomposition, Interaction, LatticeGraph, Model,
    Pauli, PauliString, PauliTerm, Term,
};

/// Standard coupling and field of the transverse-field Ising fixture.
pub const TFIM_COUPLING: f64 = 1.0;
pub const TFIM_FIELD: f64 = 1.05;

/// `H = -J sum Z_x Z_{x+1} - g sum X_x` on a chain, observable `Z_{len/2}`.
/// Bonds and fields are separate terms.
pub fn tfim(len: usize, coupling: f64, field: f64, boundary: Boundary) -> Result<Model> {
    let graph = LatticeGraph::chain(len, boundary)?;
    let mut interaction = Interaction::empty();
    for &(a, b) in graph.edges() {
        interaction.push(Term::pair(-coupling, (a, Pauli::Z), (b, Pauli::Z))?);
    }
    for x in 0..len {
        interaction.push(Term::single(-field, PauliString::single(x, Pauli::X))?);
    }
    Ok(Model {
        graph,
        decay: DecayFunction::default(),
        interaction,
        observable: Some(PauliTerm::new(1.0, PauliString::single(len / 2, Pauli::Z))),
    })
}

/// The standard fixture: open chain, `J = 1`, `g = 1.05`.
pub fn standard_tfim(len: usize) -> Result<Model> {
    tfim(len, TFIM_COUPLING, TFIM_FIELD, Boundary::Open)
}

/// Folds the on-site terms into the bonds and splits them by parity.
pub fn even_odd(model: &Model) -> Result<Decomposition> {
    decompose_even_odd(&model.interaction.fold_onsite_terms()?, &model.graph)
}

/// Long-range Ising chain: `exp(-a d(x,y)^p) Z_x Z_y` on every pair plus
/// `-field X_x` on every site, observable `Z_{len/2}`; decay `b = 1`, `p`.
pub fn long_range(len: usize, a: f64, p: f64, field: f64) -> Result<Model> {
    let graph = LatticeGraph::chain(len, Boundary::Open)?;
    let mut interaction = Interaction::empty();
    for x in 0..len {
        for y in x + 1..len {
            let d = graph.distance(x, y) as f64;
            interaction.push(Term::pair(
                (-a * d.powf(p)).exp(),
                (x, Pauli::Z),
                (y, Pauli::Z),
            )?);
        }
    }
    for x in 0..len {
        interaction.push(Term::single(-field, PauliString::single(x, Pauli::X))?);
    }
    Ok(Model {
        graph,
        decay: DecayFunction::new(1.0, p)?,
        interaction,
        observable: Some(PauliTerm::new(1.0, PauliString::single(len / 2, Pauli::Z))),
    })
}

/// The long-range fixture: ten sites, `a = 2`, `p = 1/2`, field `1`.
pub fn standard_long_range() -> Result<Model> {
    long_range(10, 2.0, 0.5, 1.0)
}
