use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use super::report::{format_float, write_table};
use crate::dense::{error_norm, DenseOperator};
use crate::error::{invalid, Error, Result};
use crate::model::Decomposition;
use crate::schedule::{merged_factor_count, suzuki, ProductSchedule};
use crate::simulator::{heisenberg, EvolutionPlan};

/// Default upper limit on the step count searched.
pub const DEFAULT_STEP_CAP: usize = 1 << 16;

/// Smallest step count meeting an error target, with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthReport {
    pub epsilon: f64,
    pub n_min: usize,
    pub error_at_n_min: f64,
    /// Error at `n_min - 1`; `None` when `n_min = 1`.
    pub error_below: Option<f64>,
    pub factors_per_step: usize,
    pub total_depth: usize,
    /// Every step count evaluated and its error.
    pub evaluations: Vec<(usize, f64)>,
}

impl DepthReport {
    /// `err(n_min) <= epsilon < err(n_min - 1)`.
    pub fn certificate_holds(&self) -> bool {
        self.error_at_n_min <= self.epsilon && self.error_below.map_or(true, |e| e > self.epsilon)
    }

    /// Columns `epsilon,n_min,factors_per_step,total_depth`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_table(
            w,
            &["epsilon", "n_min", "factors_per_step", "total_depth"],
            [vec![
                format_float(self.epsilon),
                self.n_min.to_string(),
                self.factors_per_step.to_string(),
                self.total_depth.to_string(),
            ]],
        )
    }
}

/// Error of `pi_{t,n}(O)` against exact evolution, memoized by `n`.
pub struct StepErrorOracle<'a> {
    plan: EvolutionPlan,
    schedule: ProductSchedule,
    exact: DenseOperator,
    observable: &'a DenseOperator,
    t: f64,
    seen: BTreeMap<usize, f64>,
}

impl<'a> StepErrorOracle<'a> {
    pub fn new(
        decomposition: &Decomposition,
        observable: &'a DenseOperator,
        t: f64,
        m: usize,
        r: usize,
    ) -> Result<Self> {
        let region: BTreeSet<usize> = observable.sites().iter().copied().collect();
        let h = decomposition.recombined().assemble(&region)?;
        Ok(Self {
            plan: EvolutionPlan::new(decomposition, &region)?,
            schedule: suzuki(decomposition.k(), m, r)?.merge_adjacent(),
            exact: heisenberg(&h, t, observable)?,
            observable,
            t,
            seen: BTreeMap::new(),
        })
    }

    pub fn error(&mut self, n: usize) -> Result<f64> {
        if let Some(&e) = self.seen.get(&n) {
            return Ok(e);
        }
        let approx = self
            .plan
            .run(&self.schedule, self.t / n as f64, n, self.observable)?;
        let e = error_norm(&self.exact, &approx)?;
        self.seen.insert(n, e);
        Ok(e)
    }
}

/// Doubles `n` until the error drops to `epsilon`, then bisects down to
/// the smallest passing `n` above the last failing one.
pub fn depth_search(
    decomposition: &Decomposition,
    observable: &DenseOperator,
    t: f64,
    m: usize,
    r: usize,
    epsilon: f64,
    step_cap: usize,
) -> Result<DepthReport> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(invalid(format!(
            "error target must be positive, got {epsilon}"
        )));
    }
    let mut oracle = StepErrorOracle::new(decomposition, observable, t, m, r)?;
    let mut lo = 0;
    let mut hi = 1;
    let mut last = oracle.error(hi)?;
    while last > epsilon {
        if hi >= step_cap {
            return Err(Error::SearchCapExceeded {
                cap: step_cap,
                epsilon,
                last_error: last,
            });
        }
        lo = hi;
        hi = (hi * 2).min(step_cap);
        last = oracle.error(hi)?;
    }
    // err(lo) > epsilon >= err(hi), with lo = 0 standing for "no step".
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if oracle.error(mid)? <= epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let error_below = if hi > 1 {
        Some(oracle.error(hi - 1)?)
    } else {
        None
    };
    let factors_per_step = merged_factor_count(decomposition.k(), m, r);
    Ok(DepthReport {
        epsilon,
        n_min: hi,
        error_at_n_min: oracle.error(hi)?,
        error_below,
        factors_per_step,
        total_depth: hi * factors_per_step,
        evaluations: oracle.seen.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::fixtures::{even_odd, standard_tfim};

    #[test]
    fn loose_target_needs_one_step() {
        let model = standard_tfim(4).unwrap();
        let d = even_odd(&model).unwrap();
        let o = model.observable_on(&model.graph.sites()).unwrap();
        let mut oracle = StepErrorOracle::new(&d, &o, 1.0, 1, 3).unwrap();
        let e1 = oracle.error(1).unwrap();
        let report = depth_search(&d, &o, 1.0, 1, 3, e1, 64).unwrap();
        assert_eq!(report.n_min, 1);
        assert!(report.certificate_holds());
        assert_eq!(report.factors_per_step, 3);
        assert_eq!(report.total_depth, 3);
    }

    #[test]
    fn cap_is_reported() {
        let model = standard_tfim(4).unwrap();
        let d = even_odd(&model).unwrap();
        let o = model.observable_on(&model.graph.sites()).unwrap();
        let err = depth_search(&d, &o, 1.0, 1, 3, 1e-9, 8).unwrap_err();
        assert!(matches!(err, Error::SearchCapExceeded { cap: 8, .. }));
        assert!(depth_search(&d, &o, 1.0, 1, 3, 0.0, 8).is_err());
    }

    #[test]
    fn bisection_matches_scan() {
        let model = standard_tfim(4).unwrap();
        let d = even_odd(&model).unwrap();
        let o = model.observable_on(&model.graph.sites()).unwrap();
        let eps = 1e-3;
        let report = depth_search(&d, &o, 1.0, 1, 3, eps, 1024).unwrap();
        assert!(report.certificate_holds());
        let mut oracle = StepErrorOracle::new(&d, &o, 1.0, 1, 3).unwrap();
        let scanned = (1..).find(|&n| oracle.error(n).unwrap() <= eps).unwrap();
        assert_eq!(report.n_min, scanned);
    }
}
