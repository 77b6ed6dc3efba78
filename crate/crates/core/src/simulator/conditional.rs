use std::collections::BTreeSet;

use faer::Mat;

use crate::dense::{bit, c64, positions, DenseOperator};
use crate::error::{invalid, Result};
use crate::model::LatticeGraph;

/// Splits basis indices of `sites` into the sub-register `x` and its
/// complement: `full = inside[i] | outside[e]`.
fn split_register(sites: &[usize], x: &BTreeSet<usize>) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = sites.len();
    let pos = positions(sites, x.iter().copied())?;
    let rest: Vec<usize> = (0..n).filter(|p| !pos.contains(p)).collect();
    let expand = |bits: &[usize]| -> Vec<usize> {
        let m = bits.len();
        (0..1usize << m)
            .map(|code| {
                bits.iter()
                    .enumerate()
                    .filter(|&(i, _)| code & bit(m, i) != 0)
                    .map(|(_, &p)| bit(n, p))
                    .sum()
            })
            .collect()
    };
    Ok((expand(&pos), expand(&rest)))
}

/// `E_X(A) = (tr_{Lambda \ X} A / 2^{|Lambda \ X|}) (x) I`, with `Lambda` the
/// sites of `a`.
pub fn conditional_expectation(a: &DenseOperator, x: &BTreeSet<usize>) -> Result<DenseOperator> {
    if let Some(s) = x.iter().find(|s| a.sites().binary_search(s).is_err()) {
        return Err(invalid(format!("site {s} of X is not in {:?}", a.sites())));
    }
    let (inside, outside) = split_register(a.sites(), x)?;
    let dx = inside.len();
    let norm = 1.0 / outside.len() as f64;
    let mut reduced = Mat::<c64>::zeros(dx, dx);
    for &e in &outside {
        for (j, &cj) in inside.iter().enumerate() {
            for (i, &ci) in inside.iter().enumerate() {
                reduced[(i, j)] += a.get(ci | e, cj | e);
            }
        }
    }
    let mut out = DenseOperator::zeros(a.sites().to_vec())?;
    let mat = out.mat_mut();
    for &e in &outside {
        for (j, &cj) in inside.iter().enumerate() {
            for (i, &ci) in inside.iter().enumerate() {
                mat[(ci | e, cj | e)] = reduced[(i, j)] * norm;
            }
        }
    }
    Ok(out)
}

/// `||(E_{Z^(r)} - id)(A)||` for `r = 0..=diam(Lambda)`, with fattenings
/// taken in `graph` and restricted to the sites of `a`.
pub fn leakage_profile(
    a: &DenseOperator,
    z: &BTreeSet<usize>,
    graph: &LatticeGraph,
) -> Result<Vec<(usize, f64)>> {
    let region: BTreeSet<usize> = a.sites().iter().copied().collect();
    if !z.is_subset(&region) {
        return Err(invalid(format!(
            "anchor {z:?} is not inside {:?}",
            a.sites()
        )));
    }
    let diam = graph.diameter(&region)?;
    (0..=diam)
        .map(|r| {
            let fat: BTreeSet<usize> = graph.fatten(z, r)?.intersection(&region).copied().collect();
            let residual = if fat == region {
                0.0
            } else {
                conditional_expectation(a, &fat)?.sub(a)?.spectral_norm()?
            };
            Ok((r, residual))
        })
        .collect()
}
