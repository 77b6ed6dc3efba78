//! Weighted interaction norms.
//!
//! `||Phi||_b = sup_x sum_{X ni x} ||Phi(X)|| / xi_b(D(X))`, and the anchored
//! variant `||Phi||_{b,Z}` with `D_Z(X) = D(X) + d(X, Z)` in place of `D(X)`.
//! Per-site sums run over supports in a fixed order so results are
//! reproducible bit for bit.

use std::collections::BTreeSet;

use super::decay::DecayFunction;
use super::interaction::Interaction;
use super::lattice::LatticeGraph;
use crate::error::{invalid, Result};

fn weighted_sup(
    phi: &Interaction,
    graph: &LatticeGraph,
    weight: impl Fn(&BTreeSet<usize>) -> Result<f64>,
) -> Result<f64> {
    let mut per_site = vec![0.0; graph.num_sites()];
    for (support, norm) in phi.support_norms()? {
        if let Some(&s) = support.iter().find(|&&s| s >= graph.num_sites()) {
            return Err(invalid(format!("term site {s} outside the lattice")));
        }
        let contribution = norm / weight(&support)?;
        for &x in &support {
            per_site[x] += contribution;
        }
    }
    Ok(per_site.into_iter().fold(0.0, f64::max))
}

/// `||Phi||_b`.
pub fn interaction_norm(
    phi: &Interaction,
    graph: &LatticeGraph,
    decay: &DecayFunction,
) -> Result<f64> {
    weighted_sup(phi, graph, |x| Ok(decay.eval(graph.diameter(x)? as f64)))
}

/// `||Phi||_{b,Z}`.
pub fn anchored_norm(
    phi: &Interaction,
    graph: &LatticeGraph,
    decay: &DecayFunction,
    anchor: &BTreeSet<usize>,
) -> Result<f64> {
    if anchor.is_empty() {
        return Err(invalid("anchor set Z must be nonempty"));
    }
    weighted_sup(phi, graph, |x| {
        Ok(decay.eval(graph.anchored_diameter(x, anchor)? as f64))
    })
}

/// Both sides of `||Phi_R - Phi||_{b'} <= xi_{b-b'}(R+1) ||Phi||_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBound {
    pub range: usize,
    pub lhs: f64,
    pub rhs: f64,
}

impl TruncationBound {
    /// The inequality, allowing one part in `1e12` of rounding in the
    /// equality case.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12)
    }
}

/// Evaluates the truncation inequality for range `range` with rates
/// `decay.b()` and `b_prime < decay.b()`.
pub fn truncation_bound_check(
    phi: &Interaction,
    graph: &LatticeGraph,
    range: usize,
    decay: &DecayFunction,
    b_prime: f64,
) -> Result<TruncationBound> {
    if b_prime.is_nan() || b_prime >= decay.b() {
        return Err(invalid(format!(
            "need b' < b for the truncation bound, got b' = {b_prime}, b = {}",
            decay.b()
        )));
    }
    let weaker = decay.with_rate(b_prime)?;
    let gap = decay.with_rate(decay.b() - b_prime)?;
    let (_, dropped) = phi.partition_by_range(graph, range);
    let lhs = interaction_norm(&dropped, graph, &weaker)?;
    let rhs = gap.eval((range + 1) as f64) * interaction_norm(phi, graph, decay)?;
    Ok(TruncationBound { range, lhs, rhs })
}

/// Sides of `||G^Phi|| <= C ||Phi||_{b,Z} |Z|` with
/// `C = kappa sum_n (1+n)^{d-1} xi_b(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostLocalBound {
    pub operator_norm: f64,
    pub bound: f64,
}

/// Assembles `G^Phi` on the whole lattice and compares its spectral norm
/// with the summability bound. `kappa` and `dim` describe the lattice
/// growth (`2` and `1` for a chain).
pub fn almost_local_bound(
    phi: &Interaction,
    graph: &LatticeGraph,
    decay: &DecayFunction,
    anchor: &BTreeSet<usize>,
    kappa: f64,
    dim: u32,
) -> Result<AlmostLocalBound> {
    let g = phi.assemble(&graph.sites())?;
    let operator_norm = g.spectral_norm()?;
    let bound = decay.shell_constant(kappa, dim)
        * anchored_norm(phi, graph, decay, anchor)?
        * anchor.len() as f64;
    Ok(AlmostLocalBound {
        operator_norm,
        bound,
    })
}
