use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use faer::{Mat, Side};

use crate::dense::{c64, DenseOperator};
use crate::error::{Error, Result};
use crate::model::Decomposition;
use crate::schedule::ProductSchedule;

/// Eigendecomposition `H = V diag(lambda) V^dagger` of a Hermitian operator,
/// reused for every duration.
#[derive(Debug, Clone)]
pub struct Spectrum {
    vectors: Mat<c64>,
    values: Vec<f64>,
    sites: Vec<usize>,
}

impl Spectrum {
    pub fn new(h: &DenseOperator) -> Result<Self> {
        h.ensure_hermitian()?;
        let evd = h
            .mat()
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Linalg(format!("{e:?}")))?;
        let values = (0..h.dim())
            .map(|i| evd.S().column_vector()[i].re)
            .collect();
        Ok(Self {
            vectors: evd.U().to_owned(),
            values,
            sites: h.sites().to_vec(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// `e^{itH}`.
    pub fn unitary(&self, t: f64) -> Mat<c64> {
        let n = self.values.len();
        let phases: Vec<c64> = self.values.iter().map(|&l| c64::cis(t * l)).collect();
        let scaled = Mat::from_fn(n, n, |i, j| self.vectors[(i, j)] * phases[j]);
        &scaled * self.vectors.adjoint()
    }
}

/// `e^{itH}` for Hermitian `H`.
pub fn expm_hermitian(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    let u = Spectrum::new(h)?.unitary(t);
    DenseOperator::new(u, h.sites().to_vec())
}

/// `U O U^dagger`.
pub fn conjugate(u: &Mat<c64>, o: &DenseOperator) -> Result<DenseOperator> {
    if u.nrows() != o.dim() {
        return Err(Error::DimensionMismatch(format!(
            "unitary of dimension {} on operator of dimension {}",
            u.nrows(),
            o.dim()
        )));
    }
    let mat = u * o.mat() * u.adjoint();
    DenseOperator::new(mat, o.sites().to_vec())
}

/// `tau_t(O) = e^{itH} O e^{-itH}`.
pub fn heisenberg(h: &DenseOperator, t: f64, o: &DenseOperator) -> Result<DenseOperator> {
    if h.sites() != o.sites() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian on {:?}, observable on {:?}",
            h.sites(),
            o.sites()
        )));
    }
    conjugate(&Spectrum::new(h)?.unitary(t), o)
}

/// Layer Hamiltonians of a decomposition on a fixed region, with their
/// spectra and a memo table of `e^{i d K_j}` keyed by `(j, d)`.
/// Layer index and duration bits.
type CacheKey = (usize, u64);

#[derive(Debug)]
pub struct EvolutionPlan {
    sites: Vec<usize>,
    spectra: Vec<Spectrum>,
    cache: Mutex<HashMap<CacheKey, Arc<Mat<c64>>>>,
}

impl EvolutionPlan {
    pub fn new(decomposition: &Decomposition, region: &BTreeSet<usize>) -> Result<Self> {
        let spectra = decomposition
            .layers()
            .iter()
            .map(|layer| Spectrum::new(&layer.assemble(region)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sites: region.iter().copied().collect(),
            spectra,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn k(&self) -> usize {
        self.spectra.len()
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn cached_unitaries(&self) -> usize {
        self.cache.lock().expect("unitary cache poisoned").len()
    }

    /// `e^{i duration K_layer}`, computed once per distinct duration.
    pub fn unitary(&self, layer: usize, duration: f64) -> Result<Arc<Mat<c64>>> {
        let spectrum = self.spectra.get(layer).ok_or_else(|| {
            Error::DimensionMismatch(format!("layer {layer} of a {}-layer plan", self.k()))
        })?;
        let key = (layer, duration.to_bits());
        if let Some(u) = self.cache.lock().expect("unitary cache poisoned").get(&key) {
            return Ok(Arc::clone(u));
        }
        // Computed outside the lock; concurrent inserts store equal values.
        let u = Arc::new(spectrum.unitary(duration));
        let mut cache = self.cache.lock().expect("unitary cache poisoned");
        Ok(Arc::clone(cache.entry(key).or_insert(u)))
    }

    /// `W = U_last ... U_first` with `U = e^{i f mu K_j}` per entry, so that
    /// one step acts as `O -> W O W^dagger` with the first entry innermost.
    pub fn step_unitary(&self, schedule: &ProductSchedule, mu: f64) -> Result<Mat<c64>> {
        if schedule.k() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "schedule has {} layers, decomposition has {}",
                schedule.k(),
                self.k()
            )));
        }
        let dim = 1usize << self.sites.len();
        let mut w = Mat::<c64>::identity(dim, dim);
        for e in schedule.entries() {
            let u = self.unitary(e.layer, e.fraction * mu)?;
            w = &*u * &w;
        }
        Ok(w)
    }

    /// `(sigma_mu)^n (O)`: the schedule applied `n` times with step `mu`.
    pub fn run(
        &self,
        schedule: &ProductSchedule,
        mu: f64,
        n: usize,
        o: &DenseOperator,
    ) -> Result<DenseOperator> {
        if o.sites() != self.sites.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "observable on {:?}, plan on {:?}",
                o.sites(),
                self.sites
            )));
        }
        let w = self.step_unitary(schedule, mu)?;
        let mut out = o.clone();
        for _ in 0..n {
            out = conjugate(&w, &out)?;
        }
        Ok(out)
    }
}

/// `pi_{t,n}(O) = (sigma_{t/n})^n (O)` on the region of `o`.
pub fn run_schedule(
    decomposition: &Decomposition,
    schedule: &ProductSchedule,
    mu: f64,
    n: usize,
    o: &DenseOperator,
) -> Result<DenseOperator> {
    let region: BTreeSet<usize> = o.sites().iter().copied().collect();
    EvolutionPlan::new(decomposition, &region)?.run(schedule, mu, n, o)
}
