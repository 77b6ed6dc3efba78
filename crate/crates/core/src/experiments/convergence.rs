//! Global (`n` steps to fixed `t`) and local (one step of size `mu`) error
//! scaling of the product formulas.

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;

use super::fit::{fit_loglog, LogLogFit, ERROR_FLOOR};
use super::report::{format_float, write_table};
use crate::dense::{error_norm, DenseOperator};
use crate::error::{invalid, Result};
use crate::model::Decomposition;
use crate::schedule::{expected_order, suzuki};
use crate::simulator::{conjugate, heisenberg, EvolutionPlan, Spectrum};

fn region_of(o: &DenseOperator) -> BTreeSet<usize> {
    o.sites().iter().copied().collect()
}

/// Error samples of `pi^(m)_{t,n}` against exact evolution and the fitted
/// order.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub model_id: String,
    pub m: usize,
    pub r: usize,
    pub k: usize,
    pub t: f64,
    /// `(n, error)`, sorted by `n`.
    pub samples: Vec<(usize, f64)>,
    pub fit: LogLogFit,
    pub alpha_expected: usize,
}

impl ConvergenceReport {
    /// `alpha_hat`, the negated slope of `ln error` against `ln n`.
    pub fn fitted_order(&self) -> f64 {
        -self.fit.slope
    }

    pub fn r_squared(&self) -> f64 {
        self.fit.r_squared
    }

    /// Columns `n,error`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_table(
            w,
            &["n", "error"],
            self.samples
                .iter()
                .map(|&(n, e)| vec![n.to_string(), format_float(e)]),
        )
    }
}

fn validate_n_list(n_list: &[usize]) -> Result<Vec<usize>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 || ns[0] == 0 {
        return Err(invalid(format!(
            "need at least 3 distinct positive step counts, got {n_list:?}"
        )));
    }
    if ns[ns.len() - 1] < 4 * ns[0] {
        return Err(invalid(format!(
            "step counts {ns:?} must span at least two octaves"
        )));
    }
    Ok(ns)
}

/// Runs `pi^(m)_{t,n}(O)` for each `n` and fits the global order. The
/// observable's sites define the region; the exact reference uses the sum
/// of all layers.
pub fn convergence_study(
    model_id: &str,
    decomposition: &Decomposition,
    observable: &DenseOperator,
    t: f64,
    m: usize,
    r: usize,
    n_list: &[usize],
) -> Result<ConvergenceReport> {
    let ns = validate_n_list(n_list)?;
    let k = decomposition.k();
    let schedule = suzuki(k, m, r)?.merge_adjacent();
    let region = region_of(observable);
    let h = decomposition.recombined().assemble(&region)?;
    let exact = heisenberg(&h, t, observable)?;
    let plan = EvolutionPlan::new(decomposition, &region)?;
    let samples = ns
        .par_iter()
        .map(|&n| {
            let approx = plan.run(&schedule, t / n as f64, n, observable)?;
            Ok((n, error_norm(&exact, &approx)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = samples.iter().map(|&(n, e)| (n as f64, e)).collect();
    let fit = fit_loglog(&points, ERROR_FLOOR)?;
    Ok(ConvergenceReport {
        model_id: model_id.to_string(),
        m,
        r,
        k,
        t,
        samples,
        fit,
        alpha_expected: expected_order(m),
    })
}

/// One-step errors `||tau_mu(O) - sigma^(m)_mu(O)||` and their fitted
/// exponent, expected to be `alpha + 1`.
#[derive(Debug, Clone)]
pub struct SingleStepReport {
    pub m: usize,
    pub r: usize,
    /// `(mu, error)` in the order given.
    pub samples: Vec<(f64, f64)>,
    pub fit: LogLogFit,
    pub exponent_expected: usize,
}

impl SingleStepReport {
    pub fn exponent(&self) -> f64 {
        self.fit.slope
    }

    /// Columns `mu,error`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_table(
            w,
            &["mu", "error"],
            self.samples
                .iter()
                .map(|&(mu, e)| vec![format_float(mu), format_float(e)]),
        )
    }
}

/// `mu, mu/2, mu/4, ...` with `count` entries.
pub fn halving_sequence(start: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start / (1u64 << i) as f64).collect()
}

pub fn single_step_order(
    decomposition: &Decomposition,
    observable: &DenseOperator,
    m: usize,
    r: usize,
    mu_list: &[f64],
) -> Result<SingleStepReport> {
    if mu_list.len() < 3 || mu_list.iter().any(|&mu| !(mu > 0.0 && mu.is_finite())) {
        return Err(invalid(format!(
            "need at least 3 positive step sizes, got {mu_list:?}"
        )));
    }
    let schedule = suzuki(decomposition.k(), m, r)?.merge_adjacent();
    let region = region_of(observable);
    let spectrum = Spectrum::new(&decomposition.recombined().assemble(&region)?)?;
    let plan = EvolutionPlan::new(decomposition, &region)?;
    let samples = mu_list
        .par_iter()
        .map(|&mu| {
            let exact = conjugate(&spectrum.unitary(mu), observable)?;
            let approx = plan.run(&schedule, mu, 1, observable)?;
            Ok((mu, error_norm(&exact, &approx)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_loglog(&samples, ERROR_FLOOR)?;
    Ok(SingleStepReport {
        m,
        r,
        samples,
        fit,
        exponent_expected: expected_order(m) + 1,
    })
}
