//! Product-formula schedules.
//!
//! A [`ProductSchedule`] is an ordered list of `(layer, fraction)` entries.
//! Realized on a Hamiltonian `H = K_0 + ... + K_{k-1}` with base step `mu`,
//! entry `(j, f)` stands for the automorphism `O -> e^{i f mu K_j} O e^{-i f mu K_j}`.
//! Entries are applied in list order: the first entry is the innermost factor,
//! so the step unitary is `W = U_last * ... * U_first` and one step maps
//! `O -> W O W^dagger`.
//!
//! Layers are 0-based in memory and 1-based in every exported format.
//!
//! The symmetric base schedule for `k` parts is
//! `[(0, 1/2), ..., (k-1, 1/2), (k-1, 1/2), ..., (0, 1/2)]`; for `k = 2` and
//! layer 0 = `B`, layer 1 = `A` its merged form is the familiar
//! `e^{i mu B/2} e^{i mu A} e^{i mu B/2}`. Higher orders come from Suzuki's
//! recursion: with `r = 2l + 1` and
//! `s_j = 1 / ((r - 1) - (r - 1)^{1/(2j+1)})`,
//!
//! ```text
//! S^(2j+1)_mu = (S^(2j)_{s_j mu})^l  S^(2j)_{(1-(r-1)s_j) mu}  (S^(2j)_{s_j mu})^l,
//! S^(2j+2)    = S^(2j+1).
//! ```

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{invalid, Error, Result};

/// Entries whose fraction falls below this magnitude are dropped by
/// [`ProductSchedule::merge_adjacent`].
pub const MERGE_DROP_TOLERANCE: f64 = 1e-15;

/// Shape parameters of a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScheduleParams {
    /// Number of Hamiltonian parts.
    pub k: usize,
    /// Order label of `S^(m)`.
    pub m: usize,
    /// Recursion arity, odd and at least 3.
    pub r: usize,
}

impl ScheduleParams {
    pub fn new(k: usize, m: usize, r: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        validate_arity(r)?;
        Ok(Self { k, m, r })
    }

    /// Number of Suzuki recursion levels behind order label `m`.
    pub fn levels(&self) -> usize {
        recursion_levels(self.m)
    }
}

fn validate_arity(r: usize) -> Result<()> {
    if r < 3 || r % 2 == 0 {
        return Err(invalid(format!("r must be an odd integer >= 3, got {r}")));
    }
    Ok(())
}

/// Recursion levels needed for order label `m`: labels `2j+1` and `2j+2`
/// both sit `j` levels above the base.
pub fn recursion_levels(m: usize) -> usize {
    m.saturating_sub(1) / 2
}

/// Global order `alpha` of `S^(m)`: `m` for even labels, `m + 1` for odd ones.
pub fn expected_order(m: usize) -> usize {
    if m % 2 == 0 {
        m
    } else {
        m + 1
    }
}

/// One factor of a product schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    /// 0-based layer index.
    pub layer: usize,
    /// Signed time, in units of the base step.
    pub fraction: f64,
}

impl Entry {
    pub fn new(layer: usize, fraction: f64) -> Self {
        Self { layer, fraction }
    }
}

/// Ordered list of layer exponentials realizing `S^(m)_mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSchedule {
    entries: Vec<Entry>,
    params: ScheduleParams,
}

impl ProductSchedule {
    /// Builds a schedule from raw entries. Every layer must be below `params.k`.
    pub fn from_entries(entries: Vec<Entry>, params: ScheduleParams) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| e.layer >= params.k) {
            return Err(invalid(format!(
                "entry layer {} out of range for k = {}",
                e.layer + 1,
                params.k
            )));
        }
        if let Some(e) = entries.iter().find(|e| !e.fraction.is_finite()) {
            return Err(invalid(format!("non-finite fraction {}", e.fraction)));
        }
        Ok(Self { entries, params })
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn params(&self) -> ScheduleParams {
        self.params
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of fractions per layer.
    pub fn layer_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.params.k];
        for e in &self.entries {
            sums[e.layer] += e.fraction;
        }
        sums
    }

    /// Exact structural palindrome check (layers and fraction bits).
    pub fn is_palindrome(&self) -> bool {
        let n = self.entries.len();
        (0..n / 2).all(|i| {
            let (a, b) = (self.entries[i], self.entries[n - 1 - i]);
            a.layer == b.layer && a.fraction.to_bits() == b.fraction.to_bits()
        })
    }

    /// Total time in absolute value, in units of the base step.
    pub fn total_absolute_time(&self) -> f64 {
        self.entries.iter().map(|e| e.fraction.abs()).sum()
    }

    /// The schedule realizing `S_{-mu}`: entries reversed and negated.
    pub fn reverse(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .rev()
            .map(|e| Entry::new(e.layer, -e.fraction))
            .collect();
        Self {
            entries,
            params: self.params,
        }
    }

    /// `self` followed by `other`; `self` acts first on the observable.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.params.k != other.params.k {
            return Err(invalid(format!(
                "cannot compose schedules with k = {} and k = {}",
                self.params.k, other.params.k
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self {
            entries,
            params: self.params,
        })
    }

    /// Scales every fraction by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| Entry::new(e.layer, e.fraction * factor))
            .collect();
        Self {
            entries,
            params: self.params,
        }
    }

    /// Coalesces runs of equal-layer entries and drops entries whose merged
    /// fraction is below [`MERGE_DROP_TOLERANCE`]. Dropping can make further
    /// entries adjacent; those merge as well.
    pub fn merge_adjacent(&self) -> Self {
        let mut out: Vec<Entry> = Vec::with_capacity(self.entries.len());
        for &e in &self.entries {
            match out.last_mut() {
                Some(top) if top.layer == e.layer => {
                    top.fraction += e.fraction;
                    if top.fraction.abs() < MERGE_DROP_TOLERANCE {
                        out.pop();
                    }
                }
                _ if e.fraction.abs() < MERGE_DROP_TOLERANCE => {}
                _ => out.push(e),
            }
        }
        Self {
            entries: out,
            params: self.params,
        }
    }

    /// Per-layer cumulative signed time in execution order.
    pub fn path_trace(&self) -> PathTrace {
        let mut layers: Vec<Vec<TracePoint>> = (0..self.params.k)
            .map(|_| vec![TracePoint { step: 0, time: 0.0 }])
            .collect();
        for (i, e) in self.entries.iter().enumerate() {
            let trace = &mut layers[e.layer];
            let time = trace.last().map_or(0.0, |p| p.time) + e.fraction;
            trace.push(TracePoint { step: i + 1, time });
        }
        PathTrace { layers }
    }

    /// Writes the line-oriented export: a `#k=.. m=.. r=..` header, then one
    /// `layer<TAB>fraction` line per entry with 17 significant digits.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let p = self.params;
        writeln!(w, "#k={} m={} r={}", p.k, p.m, p.r)?;
        for e in &self.entries {
            writeln!(w, "{}\t{:.16e}", e.layer + 1, e.fraction)?;
        }
        Ok(())
    }

    /// Parses the format produced by [`ProductSchedule::write_to`].
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty schedule file".into()))??;
        let params = parse_header(&header)?;
        let mut entries = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::Config(format!("schedule line {}: {line:?}", lineno + 2));
            let (layer, fraction) = line.split_once('\t').ok_or_else(bad)?;
            let layer: usize = layer.trim().parse().map_err(|_| bad())?;
            let fraction: f64 = fraction.trim().parse().map_err(|_| bad())?;
            if layer == 0 {
                return Err(bad());
            }
            entries.push(Entry::new(layer - 1, fraction));
        }
        Self::from_entries(entries, params)
    }
}

impl fmt::Display for ProductSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", e.layer + 1, e.fraction)?;
        }
        write!(f, "]")
    }
}

fn parse_header(line: &str) -> Result<ScheduleParams> {
    let bad = || Error::Config(format!("bad schedule header {line:?}"));
    let body = line.strip_prefix('#').ok_or_else(bad)?;
    let (mut k, mut m, mut r) = (None, None, None);
    for field in body.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(bad)?;
        let value: usize = value.parse().map_err(|_| bad())?;
        match key {
            "k" => k = Some(value),
            "m" => m = Some(value),
            "r" => r = Some(value),
            _ => return Err(bad()),
        }
    }
    ScheduleParams::new(k.ok_or_else(bad)?, m.ok_or_else(bad)?, r.ok_or_else(bad)?)
}

/// One point of a per-layer staircase: `step` counts schedule entries
/// (0 = before the first entry).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub step: usize,
    pub time: f64,
}

/// Cumulative signed time per layer; each trace starts at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTrace {
    layers: Vec<Vec<TracePoint>>,
}

impl PathTrace {
    pub fn layers(&self) -> &[Vec<TracePoint>] {
        &self.layers
    }

    pub fn layer(&self, layer: usize) -> &[TracePoint] {
        &self.layers[layer]
    }

    /// Cumulative times of one layer, including the leading 0.
    pub fn times(&self, layer: usize) -> Vec<f64> {
        self.layers[layer].iter().map(|p| p.time).collect()
    }

    /// CSV with columns `step,layer,cumulative_time`, rows ordered by step
    /// (the initial zero of every layer first).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut rows: Vec<(usize, usize, f64)> = self
            .layers
            .iter()
            .enumerate()
            .flat_map(|(j, pts)| pts.iter().map(move |p| (p.step, j, p.time)))
            .collect();
        rows.sort_by_key(|&(step, layer, _)| (step, layer));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["step", "layer", "cumulative_time"])?;
        for (step, layer, time) in rows {
            out.write_record([
                step.to_string(),
                (layer + 1).to_string(),
                format!("{time:.16e}"),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// The `2k`-entry symmetric schedule `S^(1)`.
pub fn base_symmetric(k: usize) -> Result<ProductSchedule> {
    let params = ScheduleParams::new(k, 1, 3)?;
    let entries = (0..k)
        .chain((0..k).rev())
        .map(|j| Entry::new(j, 0.5))
        .collect();
    Ok(ProductSchedule { entries, params })
}

/// Suzuki's scaling `s_m = 1 / ((r - 1) - (r - 1)^{1/(2m+1)})`.
pub fn suzuki_coefficient(m: usize, r: usize) -> Result<f64> {
    if m == 0 {
        return Err(invalid("suzuki coefficient index m must be at least 1"));
    }
    validate_arity(r)?;
    let a = (r - 1) as f64;
    Ok(1.0 / (a - a.powf(1.0 / (2 * m + 1) as f64)))
}

/// The `r` block scalings used at recursion level `level`:
/// `(s, ..., s, 1 - (r-1)s, s, ..., s)` with `s = s_level`.
pub fn level_fractions(level: usize, r: usize) -> Result<Vec<f64>> {
    let s = suzuki_coefficient(level, r)?;
    let half = (r - 1) / 2;
    let middle = 1.0 - (r - 1) as f64 * s;
    let mut p = vec![s; r];
    p[half] = middle;
    Ok(p)
}

/// Applies Suzuki's recursion to `base` until the order label reaches
/// `m_target`. Blocks are concatenated without merging, so every factor of
/// the recursion stays visible (`2k r^levels` entries from the base).
pub fn suzuki_recurse(
    base: &ProductSchedule,
    m_target: usize,
    r: usize,
) -> Result<ProductSchedule> {
    validate_arity(r)?;
    if m_target == 0 {
        return Err(invalid("target order must be at least 1"));
    }
    let from = base.params.levels();
    let to = recursion_levels(m_target);
    if to < from {
        return Err(invalid(format!(
            "base order {} is already above target {m_target}",
            base.params.m
        )));
    }
    if to > from && base.params.levels() > 0 && base.params.r != r {
        return Err(invalid(
            "cannot continue a recursion with a different arity",
        ));
    }
    let mut current = base.entries.clone();
    for level in from + 1..=to {
        let fractions = level_fractions(level, r)?;
        let mut next = Vec::with_capacity(current.len() * r);
        for p in fractions {
            next.extend(current.iter().map(|e| Entry::new(e.layer, e.fraction * p)));
        }
        current = next;
    }
    let params = ScheduleParams::new(base.params.k, m_target, r)?;
    Ok(ProductSchedule {
        entries: current,
        params,
    })
}

/// `S^(m)` for `k` parts and arity `r`.
pub fn suzuki(k: usize, m: usize, r: usize) -> Result<ProductSchedule> {
    ScheduleParams::new(k, m, r)?;
    suzuki_recurse(&base_symmetric(k)?, m, r)
}

/// Closed-form number of factors in the merged `S^(m)`: `r^levels (2k-2) + 1`.
pub fn merged_factor_count(k: usize, m: usize, r: usize) -> usize {
    r.pow(recursion_levels(m) as u32) * (2 * k - 2) + 1
}

/// Closed-form total absolute time of `S^(m)` in units of the base step:
/// `k * prod_{j=1}^{levels} (2(r-1)s_j - 1)`.
pub fn closed_form_total_time(k: usize, m: usize, r: usize) -> Result<f64> {
    let mut total = k as f64;
    for j in 1..=recursion_levels(m) {
        total *= 2.0 * (r - 1) as f64 * suzuki_coefficient(j, r)? - 1.0;
    }
    Ok(total)
}

/// Residuals of the order conditions for one level of block scalings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderConditions {
    /// `|sum p_j - 1|`
    pub sum_residual: f64,
    /// `|sum p_j^{2m+1}|`
    pub power_residual: f64,
    /// `max |p_j - p_{r+1-j}|`
    pub palindrome_residual: f64,
}

impl OrderConditions {
    pub fn max_residual(&self) -> f64 {
        self.sum_residual
            .max(self.power_residual)
            .max(self.palindrome_residual)
    }

    pub fn satisfied(&self, tol: f64) -> bool {
        self.max_residual() < tol
    }
}

/// Checks `sum p = 1`, `sum p^{2m+1} = 0` and the palindrome on a list of
/// block scalings (expected to have odd length `r`).
pub fn check_order_conditions(fractions: &[f64], m: usize) -> OrderConditions {
    let exponent = (2 * m + 1) as i32;
    let sum: f64 = fractions.iter().sum();
    let power: f64 = fractions.iter().map(|p| p.powi(exponent)).sum();
    let n = fractions.len();
    let palindrome_residual = (0..n / 2)
        .map(|j| (fractions[j] - fractions[n - 1 - j]).abs())
        .fold(0.0, f64::max);
    OrderConditions {
        sum_residual: (sum - 1.0).abs(),
        power_residual: power.abs(),
        palindrome_residual,
    }
}
