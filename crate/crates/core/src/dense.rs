//! Dense operators on the Hilbert space of a finite set of spin-1/2 sites.
//!
//! Basis ordering: sites ascending, the lowest site is the most significant
//! bit of the basis index. For sites `[s_0, ..., s_{n-1}]` the bit of site
//! `s_i` is `1 << (n - 1 - i)`.

use std::sync::OnceLock;

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

pub use faer::c64;

/// Default cap on the number of sites handled densely.
pub const DEFAULT_DENSE_CAP: usize = 14;

/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "TROTTERFORGE_DENSE_CAP";

/// Tolerance on `max |A - A^dagger|`, relative to `max(1, max |A|)`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Site cap for dense operators, read once from the environment.
pub fn dense_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DENSE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_DENSE_CAP)
    })
}

pub fn check_cap(sites: usize) -> Result<()> {
    let cap = dense_cap();
    if sites > cap {
        return Err(Error::ResourceCap { sites, cap });
    }
    Ok(())
}

/// Complex matrix acting on `2^n` dimensions, tagged with its site ordering.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    mat: Mat<c64>,
    sites: Vec<usize>,
}

impl DenseOperator {
    /// Wraps a matrix. `sites` must be strictly ascending and the matrix
    /// must be `2^len(sites)` square.
    pub fn new(mat: Mat<c64>, sites: Vec<usize>) -> Result<Self> {
        if !sites.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "site list must be strictly ascending: {sites:?}"
            )));
        }
        check_cap(sites.len())?;
        let dim = 1usize << sites.len();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on {} sites (expected {dim}x{dim})",
                mat.nrows(),
                mat.ncols(),
                sites.len()
            )));
        }
        Ok(Self { mat, sites })
    }

    pub fn zeros(sites: Vec<usize>) -> Result<Self> {
        check_cap(sites.len())?;
        let dim = 1usize << sites.len();
        Self::new(Mat::zeros(dim, dim), sites)
    }

    pub fn identity(sites: Vec<usize>) -> Result<Self> {
        check_cap(sites.len())?;
        let dim = 1usize << sites.len();
        Self::new(Mat::identity(dim, dim), sites)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn mat_mut(&mut self) -> &mut Mat<c64> {
        &mut self.mat
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.mat[(row, col)]
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.sites != other.sites {
            return Err(Error::DimensionMismatch(format!(
                "operators on sites {:?} and {:?}",
                self.sites, other.sites
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            mat: &self.mat + &other.mat,
            sites: self.sites.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            mat: &self.mat - &other.mat,
            sites: self.sites.clone(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            mat: &self.mat * &other.mat,
            sites: self.sites.clone(),
        })
    }

    pub fn scale(&self, factor: c64) -> Self {
        let mat = Mat::from_fn(self.dim(), self.dim(), |i, j| self.mat[(i, j)] * factor);
        Self {
            mat,
            sites: self.sites.clone(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint().to_owned(),
            sites: self.sites.clone(),
        }
    }

    /// `i [self, other]`.
    pub fn i_commutator(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let ab = &self.mat * &other.mat;
        let ba = &other.mat * &self.mat;
        let i = c64::new(0.0, 1.0);
        let n = self.dim();
        let mat = Mat::from_fn(n, n, |r, c| (ab[(r, c)] - ba[(r, c)]) * i);
        Ok(Self {
            mat,
            sites: self.sites.clone(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut defect = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                defect = defect.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        defect
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOLERANCE * self.max_abs().max(1.0)
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian(self.hermiticity_defect()))
        }
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.ensure_hermitian()?;
        self.mat
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Linalg(format!("{e:?}")))
    }

    /// Spectral norm. Hermitian operators use their eigenvalues, anything
    /// else its largest singular value.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.is_hermitian() {
            let ev = self.hermitian_eigenvalues()?;
            Ok(ev.iter().fold(0.0, |m, x| m.max(x.abs())))
        } else {
            self.largest_singular_value()
        }
    }

    pub fn largest_singular_value(&self) -> Result<f64> {
        let sv = self
            .mat
            .singular_values()
            .map_err(|e| Error::Linalg(format!("{e:?}")))?;
        Ok(sv.first().copied().unwrap_or(0.0))
    }

    /// Row-major `(re, im)` pairs as little-endian doubles.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n * 16);
        for i in 0..n {
            for j in 0..n {
                let z = self.mat[(i, j)];
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        out
    }
}

/// Spectral norm of `a - b`.
pub fn error_norm(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    a.sub(b)?.spectral_norm()
}

/// Position of every site of `sub` inside the ascending list `sites`.
pub(crate) fn positions(
    sites: &[usize],
    sub: impl IntoIterator<Item = usize>,
) -> Result<Vec<usize>> {
    sub.into_iter()
        .map(|s| {
            sites.binary_search(&s).map_err(|_| {
                Error::InvalidParameter(format!("site {s} is not in region {sites:?}"))
            })
        })
        .collect()
}

/// Bit mask of basis-index bit for the site at `pos` among `n` sites.
pub(crate) fn bit(n: usize, pos: usize) -> usize {
    1usize << (n - 1 - pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64], sites: Vec<usize>) -> DenseOperator {
        let n = values.len();
        let mat = Mat::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(values[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        DenseOperator::new(mat, sites).unwrap()
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let a = diag(&[1.0, -3.0], vec![0]);
        assert!((a.spectral_norm().unwrap() - 3.0).abs() < 1e-14);
        let zero = DenseOperator::zeros(vec![0]).unwrap();
        assert_eq!(error_norm(&a, &a).unwrap(), 0.0);
        assert!((error_norm(&a, &zero).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_norm_uses_singular_values() {
        let mut m = Mat::<c64>::zeros(2, 2);
        m[(0, 1)] = c64::new(2.0, 0.0);
        let a = DenseOperator::new(m, vec![3]).unwrap();
        assert!(!a.is_hermitian());
        assert!((a.spectral_norm().unwrap() - 2.0).abs() < 1e-14);
        assert!(a.hermitian_eigenvalues().is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(DenseOperator::new(Mat::zeros(3, 3), vec![0, 1]).is_err());
        assert!(DenseOperator::new(Mat::zeros(4, 4), vec![1, 0]).is_err());
        let a = DenseOperator::zeros(vec![0]).unwrap();
        let b = DenseOperator::zeros(vec![1]).unwrap();
        assert!(a.sub(&b).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            DenseOperator::zeros((0..dense_cap() + 1).collect()),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn debug_dump_layout() {
        let a = diag(&[1.0, -3.0], vec![0]);
        let bytes = a.to_le_bytes();
        assert_eq!(bytes.len(), 4 * 16);
        assert_eq!(f64::from_le_bytes(bytes[0..8].try_into().unwrap()), 1.0);
        assert_eq!(f64::from_le_bytes(bytes[48..56].try_into().unwrap()), -3.0);
    }
}
