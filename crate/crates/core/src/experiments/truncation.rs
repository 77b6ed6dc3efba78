use std::io::Write;

use rayon::prelude::*;

use super::report::{format_float, write_table};
use crate::dense::{error_norm, DenseOperator};
use crate::error::Result;
use crate::model::{truncation_bound_check, DecayFunction, Interaction, LatticeGraph};
use crate::simulator::heisenberg;

/// Norm bound and dynamical error for one truncation range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRow {
    pub range: usize,
    pub norm_lhs: f64,
    pub norm_rhs: f64,
    /// `||tau_t^{Phi_R}(O) - tau_t^Phi(O)||`.
    pub dyn_error: f64,
}

impl TruncationRow {
    pub fn holds(&self) -> bool {
        crate::model::TruncationBound {
            range: self.range,
            lhs: self.norm_lhs,
            rhs: self.norm_rhs,
        }
        .holds()
    }
}

#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub rows: Vec<TruncationRow>,
}

impl TruncationReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(TruncationRow::holds)
    }

    /// Ranges whose norm inequality fails.
    pub fn violations(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| !r.holds())
            .map(|r| r.range)
            .collect()
    }

    /// Columns `R,norm_lhs,norm_rhs,dyn_error`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_table(
            w,
            &["R", "norm_lhs", "norm_rhs", "dyn_error"],
            self.rows.iter().map(|row| {
                vec![
                    row.range.to_string(),
                    format_float(row.norm_lhs),
                    format_float(row.norm_rhs),
                    format_float(row.dyn_error),
                ]
            }),
        )
    }
}

/// For each range `R`: both sides of the truncation inequality with rates
/// `decay.b()` and `b_prime`, and the error of evolving `observable` for
/// time `t` under `Phi_R` instead of `Phi`. Rows follow the order of
/// `ranges`.
pub fn truncation_study(
    phi: &Interaction,
    graph: &LatticeGraph,
    decay: &DecayFunction,
    b_prime: f64,
    ranges: &[usize],
    t: f64,
    observable: &DenseOperator,
) -> Result<TruncationReport> {
    let region = observable.sites().iter().copied().collect();
    let exact = heisenberg(&phi.assemble(&region)?, t, observable)?;
    let max_diameter = phi.max_diameter(graph);
    let rows = ranges
        .par_iter()
        .map(|&range| {
            let bound = truncation_bound_check(phi, graph, range, decay, b_prime)?;
            let dyn_error = if range >= max_diameter {
                0.0
            } else {
                let truncated = phi.truncate(graph, range).assemble(&region)?;
                error_norm(&heisenberg(&truncated, t, observable)?, &exact)?
            };
            Ok(TruncationRow {
                range,
                norm_lhs: bound.lhs,
                norm_rhs: bound.rhs,
                dyn_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncationReport { rows })
}
