//! Pauli strings with real coefficients.

use std::collections::BTreeSet;
use std::fmt;

use faer::Mat;

use crate::dense::{bit, c64, positions, DenseOperator};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `self * other = i^phase * result`, `None` meaning identity.
    fn mul(self, other: Pauli) -> (u8, Option<Pauli>) {
        use Pauli::*;
        match (self, other) {
            (a, b) if a == b => (0, None),
            (X, Y) => (1, Some(Z)),
            (Y, X) => (3, Some(Z)),
            (Y, Z) => (1, Some(X)),
            (Z, Y) => (3, Some(X)),
            (Z, X) => (1, Some(Y)),
            (X, Z) => (3, Some(Y)),
            _ => unreachable!(),
        }
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Phase of `<b ^ flip| P |b>` for a basis bit `b`, as a power of `i`.
    fn phase(self, bit_set: bool) -> u8 {
        match (self, bit_set) {
            (Pauli::X, _) => 0,
            (Pauli::Y, false) => 1,
            (Pauli::Y, true) => 3,
            (Pauli::Z, false) => 0,
            (Pauli::Z, true) => 2,
        }
    }
}

fn i_pow(k: u8) -> c64 {
    match k % 4 {
        0 => c64::new(1.0, 0.0),
        1 => c64::new(0.0, 1.0),
        2 => c64::new(-1.0, 0.0),
        _ => c64::new(0.0, -1.0),
    }
}

/// Tensor product of single-site Paulis on distinct sites; the empty string
/// is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PauliString {
    ops: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn new(ops: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut ops: Vec<_> = ops.into_iter().collect();
        ops.sort_by_key(|&(s, _)| s);
        if ops.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid(format!("repeated site in Pauli string {ops:?}")));
        }
        Ok(Self { ops })
    }

    /// Parses letters such as `"ZZ"` against a site list; `I` letters are
    /// skipped.
    pub fn parse(sites: &[usize], letters: &str) -> Result<Self> {
        let chars: Vec<char> = letters.chars().collect();
        if chars.len() != sites.len() {
            return Err(invalid(format!(
                "Pauli label {letters:?} has {} letters for {} sites",
                chars.len(),
                sites.len()
            )));
        }
        let mut ops = Vec::new();
        for (&s, c) in sites.iter().zip(chars) {
            if c.eq_ignore_ascii_case(&'I') {
                continue;
            }
            let p = Pauli::from_char(c)
                .ok_or_else(|| invalid(format!("unknown Pauli letter {c:?} in {letters:?}")))?;
            ops.push((s, p));
        }
        Self::new(ops)
    }

    pub fn single(site: usize, p: Pauli) -> Self {
        Self {
            ops: vec![(site, p)],
        }
    }

    pub fn ops(&self) -> &[(usize, Pauli)] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.ops.iter().map(|&(s, _)| s).collect()
    }

    /// `self * other = i^phase * product`.
    pub fn mul(&self, other: &Self) -> (u8, Self) {
        let mut phase = 0u8;
        let mut ops = Vec::with_capacity(self.ops.len() + other.ops.len());
        let (mut i, mut j) = (0, 0);
        while i < self.ops.len() || j < other.ops.len() {
            match (self.ops.get(i), other.ops.get(j)) {
                (Some(&(sa, a)), Some(&(sb, b))) if sa == sb => {
                    let (ph, c) = a.mul(b);
                    phase = (phase + ph) % 4;
                    if let Some(c) = c {
                        ops.push((sa, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(sa, a)), Some(&(sb, _))) if sa < sb => {
                    ops.push((sa, a));
                    i += 1;
                }
                (Some(&(sa, a)), None) => {
                    ops.push((sa, a));
                    i += 1;
                }
                (_, Some(&op)) => {
                    ops.push(op);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        (phase, Self { ops })
    }

    /// Two strings commute iff they differ on an even number of shared sites.
    pub fn commutes_with(&self, other: &Self) -> bool {
        let mut clashes = 0;
        let (mut i, mut j) = (0, 0);
        while i < self.ops.len() && j < other.ops.len() {
            let (sa, a) = self.ops[i];
            let (sb, b) = other.ops[j];
            match sa.cmp(&sb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a != b {
                        clashes += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        clashes % 2 == 0
    }

    /// Adds `coeff * self` to `mat`, a matrix on the ascending site list
    /// `sites`.
    pub fn add_to(&self, mat: &mut Mat<c64>, coeff: f64, sites: &[usize]) -> Result<()> {
        let n = sites.len();
        let pos = positions(sites, self.ops.iter().map(|&(s, _)| s))?;
        let masks: Vec<(usize, Pauli)> = pos
            .iter()
            .zip(&self.ops)
            .map(|(&p, &(_, op))| (bit(n, p), op))
            .collect();
        let flip: usize = masks
            .iter()
            .filter(|(_, op)| op.flips())
            .map(|(m, _)| m)
            .sum();
        for col in 0..1usize << n {
            let phase = masks
                .iter()
                .fold(0u8, |acc, &(m, op)| (acc + op.phase(col & m != 0)) % 4);
            mat[(col ^ flip, col)] += i_pow(phase) * coeff;
        }
        Ok(())
    }

    pub fn to_dense(&self, sites: &[usize]) -> Result<DenseOperator> {
        let mut op = DenseOperator::zeros(sites.to_vec())?;
        self.add_to(op.mat_mut(), 1.0, sites)?;
        Ok(op)
    }

    /// `tr(self * A)` for `A` on the ascending list `sites`.
    fn trace_with(&self, a: &DenseOperator) -> Result<c64> {
        let sites = a.sites();
        let n = sites.len();
        let pos = positions(sites, self.ops.iter().map(|&(s, _)| s))?;
        let masks: Vec<(usize, Pauli)> = pos
            .iter()
            .zip(&self.ops)
            .map(|(&p, &(_, op))| (bit(n, p), op))
            .collect();
        let flip: usize = masks
            .iter()
            .filter(|(_, op)| op.flips())
            .map(|(m, _)| m)
            .sum();
        let mut tr = c64::new(0.0, 0.0);
        for col in 0..1usize << n {
            let phase = masks
                .iter()
                .fold(0u8, |acc, &(m, op)| (acc + op.phase(col & m != 0)) % 4);
            tr += i_pow(phase) * a.get(col, col ^ flip);
        }
        Ok(tr)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return write!(f, "I");
        }
        for (i, (s, p)) in self.ops.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", p.as_char(), s)?;
        }
        Ok(())
    }
}

/// `coeff * string` with a real coefficient, hence Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coeff: f64, string: PauliString) -> Self {
        Self { coeff, string }
    }
}

/// Expands a Hermitian operator in the Pauli basis of its sites, dropping
/// coefficients with magnitude below `threshold`. The identity component is
/// returned separately.
pub fn expand_dense(a: &DenseOperator, threshold: f64) -> Result<(f64, Vec<PauliTerm>)> {
    let sites = a.sites().to_vec();
    let n = sites.len();
    let norm = (1usize << n) as f64;
    let mut identity = 0.0;
    let mut terms = Vec::new();
    // Enumerate 4^n strings; digit 0 is the identity.
    for code in 0..1usize << (2 * n) {
        let ops: Vec<(usize, Pauli)> = (0..n)
            .filter_map(|i| {
                let digit = (code >> (2 * (n - 1 - i))) & 3;
                let p = match digit {
                    1 => Pauli::X,
                    2 => Pauli::Y,
                    3 => Pauli::Z,
                    _ => return None,
                };
                Some((sites[i], p))
            })
            .collect();
        let string = PauliString { ops };
        let c = string.trace_with(a)?.re / norm;
        if string.is_identity() {
            identity = c;
        } else if c.abs() >= threshold {
            terms.push(PauliTerm::new(c, string));
        }
    }
    Ok((identity, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(ops: &[(usize, Pauli)]) -> PauliString {
        PauliString::new(ops.iter().copied()).unwrap()
    }

    #[test]
    fn single_site_products() {
        use Pauli::*;
        let x = ps(&[(0, X)]);
        let y = ps(&[(0, Y)]);
        let z = ps(&[(0, Z)]);
        assert_eq!(x.mul(&y), (1, z.clone()));
        assert_eq!(y.mul(&x), (3, z.clone()));
        assert_eq!(x.mul(&z), (3, y.clone()));
        assert_eq!(z.mul(&z), (0, PauliString::default()));
        assert!(!x.commutes_with(&z));
        assert!(ps(&[(0, X), (1, X)]).commutes_with(&ps(&[(0, Z), (1, Z)])));
        assert!(ps(&[(0, Z)]).commutes_with(&ps(&[(5, X)])));
    }

    #[test]
    fn dense_matches_kronecker() {
        // Y on the most significant site of {0, 1}: rows (b0 b1).
        let y0 = ps(&[(0, Pauli::Y)]).to_dense(&[0, 1]).unwrap();
        assert_eq!(y0.get(2, 0), c64::new(0.0, 1.0));
        assert_eq!(y0.get(0, 2), c64::new(0.0, -1.0));
        assert_eq!(y0.get(3, 1), c64::new(0.0, 1.0));
        let z1 = ps(&[(1, Pauli::Z)]).to_dense(&[0, 1]).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| z1.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn dense_product_matches_symbolic_product() {
        use Pauli::*;
        let sites = [0, 1, 2];
        let a = ps(&[(0, X), (1, Y)]);
        let b = ps(&[(1, Z), (2, X)]);
        let (phase, c) = a.mul(&b);
        let lhs = a
            .to_dense(&sites)
            .unwrap()
            .matmul(&b.to_dense(&sites).unwrap())
            .unwrap();
        let rhs = c.to_dense(&sites).unwrap().scale(i_pow(phase));
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn expansion_inverts_assembly() {
        use Pauli::*;
        let sites = [2, 4];
        let mut op = DenseOperator::zeros(sites.to_vec()).unwrap();
        ps(&[(2, X), (4, Z)])
            .add_to(op.mat_mut(), 0.7, &sites)
            .unwrap();
        ps(&[(4, Y)]).add_to(op.mat_mut(), -1.25, &sites).unwrap();
        let (id, terms) = expand_dense(&op, 1e-14).unwrap();
        assert_eq!(id, 0.0);
        assert_eq!(terms.len(), 2);
        assert!(terms.contains(&PauliTerm::new(0.7, ps(&[(2, X), (4, Z)]))));
        assert!(terms.contains(&PauliTerm::new(-1.25, ps(&[(4, Y)]))));
    }

    #[test]
    fn parse_labels() {
        let s = PauliString::parse(&[3, 1], "zI").unwrap();
        assert_eq!(s, ps(&[(3, Pauli::Z)]));
        assert!(PauliString::parse(&[0], "ZZ").is_err());
        assert!(PauliString::parse(&[0, 1], "ZQ").is_err());
        assert!(PauliString::parse(&[1, 1], "ZZ").is_err());
        assert_eq!(ps(&[(0, Pauli::X), (3, Pauli::Z)]).to_string(), "X0 Z3");
    }
}
