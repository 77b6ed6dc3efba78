//! The derivation `delta^Phi(Psi)`: the interaction
//! `X -> sum_{Y u Y' = X, Y n Y' != 0} i[Phi(Y), Psi(Y')]`.
//!
//! Commutators are evaluated in the Pauli algebra. For strings `P`, `Q` with
//! `PQ = i^s R`, `i[aP, bQ]` vanishes when they commute and equals
//! `2ab i^{s+1} R` otherwise, which is real since `i^s = +-i` there.

use std::collections::{BTreeMap, BTreeSet};

use super::interaction::{Interaction, Term};
use super::pauli::{PauliString, PauliTerm};
use crate::error::Result;

/// Coefficients with magnitude below this are dropped from the output.
pub const DERIVATION_THRESHOLD: f64 = 1e-14;

/// `delta^Phi(Psi)`. Output terms are grouped by `Y u Y'` and carry their
/// minimal support; groups that cancel entirely are omitted.
pub fn derivation(phi: &Interaction, psi: &Interaction) -> Result<Interaction> {
    let mut groups: BTreeMap<BTreeSet<usize>, BTreeMap<PauliString, f64>> = BTreeMap::new();
    for a in phi.terms() {
        for b in psi.terms() {
            if a.support().is_disjoint(b.support()) {
                continue;
            }
            let union: BTreeSet<usize> = a.support().union(b.support()).copied().collect();
            let group = groups.entry(union).or_default();
            for p in a.paulis() {
                for q in b.paulis() {
                    if p.string.commutes_with(&q.string) {
                        continue;
                    }
                    let (phase, product) = p.string.mul(&q.string);
                    let sign = match (phase + 1) % 4 {
                        0 => 1.0,
                        2 => -1.0,
                        _ => unreachable!("anticommuting strings give an anti-Hermitian product"),
                    };
                    *group.entry(product).or_insert(0.0) += 2.0 * p.coeff * q.coeff * sign;
                }
            }
        }
    }
    let mut out = Interaction::empty();
    for (_, strings) in groups {
        let kept: Vec<PauliTerm> = strings
            .into_iter()
            .filter(|(_, c)| c.abs() >= DERIVATION_THRESHOLD)
            .map(|(s, c)| PauliTerm::new(c, s))
            .collect();
        if !kept.is_empty() {
            out.push(Term::new(kept)?);
        }
    }
    Ok(out)
}
