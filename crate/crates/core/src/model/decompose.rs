use super::interaction::{Interaction, Term};
use super::lattice::LatticeGraph;
use crate::error::{invalid, Result};

/// Split of an interaction into `k` layers `K_0, ..., K_{k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    layers: Vec<Interaction>,
    commuting: bool,
}

impl Decomposition {
    /// Arbitrary layers; `commuting` is set when every layer has pairwise
    /// disjoint term supports.
    pub fn new(layers: Vec<Interaction>) -> Result<Self> {
        if layers.is_empty() {
            return Err(invalid("a decomposition needs at least one layer"));
        }
        let commuting = layers.iter().all(has_disjoint_supports);
        Ok(Self { layers, commuting })
    }

    /// The trivial decomposition `k = 1`.
    pub fn single(phi: Interaction) -> Self {
        let commuting = has_disjoint_supports(&phi);
        Self {
            layers: vec![phi],
            commuting,
        }
    }

    pub fn layers(&self) -> &[Interaction] {
        &self.layers
    }

    pub fn k(&self) -> usize {
        self.layers.len()
    }

    pub fn is_commuting(&self) -> bool {
        self.commuting
    }

    /// All terms, layer by layer.
    pub fn recombined(&self) -> Interaction {
        Interaction::new(
            self.layers
                .iter()
                .flat_map(|l| l.terms().iter().cloned())
                .collect(),
        )
    }
}

fn has_disjoint_supports(layer: &Interaction) -> bool {
    let terms = layer.terms();
    terms.iter().enumerate().all(|(i, a)| {
        terms[i + 1..]
            .iter()
            .all(|b| a.support().is_disjoint(b.support()))
    })
}

/// Even/odd bond split of a chain: bonds `{2x, 2x+1}` form layer 0 and bonds
/// `{2x+1, 2x+2}` layer 1. Every term must sit on a lattice edge.
pub fn decompose_even_odd(phi: &Interaction, graph: &LatticeGraph) -> Result<Decomposition> {
    let n = graph.num_sites();
    let mut layers = vec![Interaction::empty(), Interaction::empty()];
    for t in phi.terms() {
        let sites: Vec<usize> = t.support().iter().copied().collect();
        let &[a, b] = sites.as_slice() else {
            return Err(invalid(format!(
                "even/odd split needs bond terms, got support {sites:?}"
            )));
        };
        if b >= n || graph.distance(a, b) != 1 {
            return Err(invalid(format!("support {sites:?} is not a lattice edge")));
        }
        // A wrap-around bond {0, n-1} starts at n-1.
        let left = if b == a + 1 { a } else { b };
        layers[left % 2].push(t.clone());
    }
    let d = Decomposition::new(layers)?;
    if !d.is_commuting() {
        return Err(invalid(
            "bond parity does not give disjoint layers (odd periodic chain?)",
        ));
    }
    Ok(d)
}

/// Greedy colouring of the term-overlap graph in term order: each term takes
/// the smallest layer holding no term that shares a site with it.
pub fn decompose_greedy_coloring(phi: &Interaction) -> Result<Decomposition> {
    let mut layers: Vec<Vec<Term>> = Vec::new();
    for t in phi.terms() {
        let slot = layers
            .iter()
            .position(|layer| layer.iter().all(|u| u.support().is_disjoint(t.support())));
        match slot {
            Some(i) => layers[i].push(t.clone()),
            None => layers.push(vec![t.clone()]),
        }
    }
    if layers.is_empty() {
        layers.push(Vec::new());
    }
    Decomposition::new(layers.into_iter().map(Interaction::new).collect())
}
