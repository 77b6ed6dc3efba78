use std::collections::{BTreeMap, BTreeSet};

use log::warn;

use super::lattice::LatticeGraph;
use super::pauli::{Pauli, PauliString, PauliTerm};
use crate::dense::{c64, check_cap, DenseOperator};
use crate::error::{invalid, Result};

/// One interaction term `Phi(X)`: a real combination of Pauli strings whose
/// support `X` is exactly the union of the strings' sites.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    support: BTreeSet<usize>,
    paulis: Vec<PauliTerm>,
}

impl Term {
    pub fn new(paulis: Vec<PauliTerm>) -> Result<Self> {
        if paulis.is_empty() {
            return Err(invalid("a term needs at least one Pauli string"));
        }
        if paulis.iter().any(|p| p.string.is_identity()) {
            return Err(invalid("identity strings are not interaction terms"));
        }
        if let Some(p) = paulis.iter().find(|p| !p.coeff.is_finite()) {
            return Err(invalid(format!("non-finite coefficient {}", p.coeff)));
        }
        let support = paulis.iter().flat_map(|p| p.string.support()).collect();
        Ok(Self { support, paulis })
    }

    pub fn single(coeff: f64, string: PauliString) -> Result<Self> {
        Self::new(vec![PauliTerm::new(coeff, string)])
    }

    /// `coeff * P_a P_b` on two sites.
    pub fn pair(coeff: f64, a: (usize, Pauli), b: (usize, Pauli)) -> Result<Self> {
        Self::single(coeff, PauliString::new([a, b])?)
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn paulis(&self) -> &[PauliTerm] {
        &self.paulis
    }

    /// Coefficients of equal strings combined, in first-appearance order.
    pub fn collapsed(&self) -> Vec<PauliTerm> {
        collapse(self.paulis.iter().cloned())
    }

    /// Adds the term to `mat`, a matrix on the ascending list `sites`.
    pub fn add_to(&self, mat: &mut faer::Mat<c64>, sites: &[usize]) -> Result<()> {
        for p in &self.paulis {
            p.string.add_to(mat, p.coeff, sites)?;
        }
        Ok(())
    }

    /// Dense matrix on the term's own support.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        let sites: Vec<usize> = self.support.iter().copied().collect();
        let mut op = DenseOperator::zeros(sites.clone())?;
        self.add_to(op.mat_mut(), &sites)?;
        Ok(op)
    }

    /// Spectral norm: `|c|` for a single string, a dense eigensolve on the
    /// support otherwise.
    pub fn norm(&self) -> Result<f64> {
        norm_of(&self.support, self.collapsed())
    }
}

fn collapse(paulis: impl Iterator<Item = PauliTerm>) -> Vec<PauliTerm> {
    let mut out: Vec<PauliTerm> = Vec::new();
    for p in paulis {
        match out.iter_mut().find(|q| q.string == p.string) {
            Some(q) => q.coeff += p.coeff,
            None => out.push(p),
        }
    }
    out
}

fn norm_of(support: &BTreeSet<usize>, collapsed: Vec<PauliTerm>) -> Result<f64> {
    match collapsed.as_slice() {
        [] => Ok(0.0),
        [single] => Ok(single.coeff.abs()),
        _ => {
            let sites: Vec<usize> = support.iter().copied().collect();
            let mut op = DenseOperator::zeros(sites.clone())?;
            for p in &collapsed {
                p.string.add_to(op.mat_mut(), p.coeff, &sites)?;
            }
            op.spectral_norm()
        }
    }
}

/// Finite interaction: a list of terms. Several list entries may share a
/// support; `Phi(X)` is then their sum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Interaction {
    terms: Vec<Term>,
}

impl Interaction {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn push(&mut self, term: Term) {
        self.terms.push(term);
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of all term supports.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.support.iter().copied())
            .collect()
    }

    /// `(X, ||Phi(X)||)` for every distinct support, in support order.
    pub fn support_norms(&self) -> Result<Vec<(BTreeSet<usize>, f64)>> {
        let mut grouped: BTreeMap<&BTreeSet<usize>, Vec<&Term>> = BTreeMap::new();
        for t in &self.terms {
            grouped.entry(&t.support).or_default().push(t);
        }
        grouped
            .into_iter()
            .map(|(support, terms)| {
                let collapsed = collapse(terms.iter().flat_map(|t| t.paulis.iter().cloned()));
                Ok((support.clone(), norm_of(support, collapsed)?))
            })
            .collect()
    }

    /// Largest term diameter, 0 for an empty interaction.
    pub fn max_diameter(&self, graph: &LatticeGraph) -> usize {
        self.terms
            .iter()
            .map(|t| graph.diameter_unchecked(t.support.iter().copied()))
            .max()
            .unwrap_or(0)
    }

    /// `H_Lambda = sum_{X subset Lambda} Phi(X)` as a dense operator on
    /// `region`. Terms reaching outside the region are dropped with a warning.
    pub fn assemble(&self, region: &BTreeSet<usize>) -> Result<DenseOperator> {
        check_cap(region.len())?;
        let sites: Vec<usize> = region.iter().copied().collect();
        let mut op = DenseOperator::zeros(sites.clone())?;
        let mut dropped = 0;
        for t in &self.terms {
            if t.support.is_subset(region) {
                t.add_to(op.mat_mut(), &sites)?;
            } else {
                dropped += 1;
            }
        }
        if dropped > 0 {
            warn!("assemble: dropped {dropped} term(s) not contained in region {sites:?}");
        }
        Ok(op)
    }

    /// `Phi_R`: keeps the terms with `D(X) <= range`.
    pub fn truncate(&self, graph: &LatticeGraph, range: usize) -> Self {
        self.partition_by_range(graph, range).0
    }

    /// `(Phi_R, Phi - Phi_R)`.
    pub fn partition_by_range(&self, graph: &LatticeGraph, range: usize) -> (Self, Self) {
        let (kept, dropped): (Vec<Term>, Vec<Term>) = self
            .terms
            .iter()
            .cloned()
            .partition(|t| graph.diameter_unchecked(t.support.iter().copied()) <= range);
        (Self::new(kept), Self::new(dropped))
    }

    /// Rewrites single-site terms into the two-site terms containing their
    /// site, splitting each coefficient evenly among them. The result
    /// assembles to the same Hamiltonian and contains only two-site terms.
    pub fn fold_onsite_terms(&self) -> Result<Self> {
        let mut pairs: Vec<(BTreeSet<usize>, Vec<PauliTerm>)> = Vec::new();
        let mut onsite: Vec<&Term> = Vec::new();
        for t in &self.terms {
            match t.support.len() {
                1 => onsite.push(t),
                2 => pairs.push((t.support.clone(), t.paulis.clone())),
                n => {
                    return Err(invalid(format!(
                        "cannot fold into pair terms: term on {n} sites {:?}",
                        t.support
                    )))
                }
            }
        }
        for t in onsite {
            let site = *t.support.iter().next().unwrap();
            let hosts: Vec<usize> = (0..pairs.len())
                .filter(|&i| pairs[i].0.contains(&site))
                .collect();
            if hosts.is_empty() {
                return Err(invalid(format!(
                    "site {site} has no two-site term to absorb its field"
                )));
            }
            let share = 1.0 / hosts.len() as f64;
            for i in hosts {
                pairs[i].1.extend(
                    t.paulis
                        .iter()
                        .map(|p| PauliTerm::new(p.coeff * share, p.string.clone())),
                );
            }
        }
        pairs
            .into_iter()
            .map(|(_, paulis)| Term::new(paulis))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}
