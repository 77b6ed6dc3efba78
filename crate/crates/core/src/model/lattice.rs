use std::collections::{BTreeSet, VecDeque};

use crate::error::{invalid, Result};

/// Boundary condition of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Finite connected graph on sites `0..n` with its graph metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    dist: Vec<usize>,
    boundary: Option<Boundary>,
}

impl LatticeGraph {
    /// Builds the graph and its all-pairs distances (BFS from every site).
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::build(n, edges, None)
    }

    /// Chain of `len` sites.
    pub fn chain(len: usize, boundary: Boundary) -> Result<Self> {
        if len == 0 {
            return Err(invalid("chain length must be positive"));
        }
        let mut edges: Vec<_> = (0..len.saturating_sub(1)).map(|x| (x, x + 1)).collect();
        if boundary == Boundary::Periodic && len > 2 {
            edges.push((0, len - 1));
        }
        Self::build(len, edges, Some(boundary))
    }

    fn build(n: usize, mut edges: Vec<(usize, usize)>, boundary: Option<Boundary>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for e in &mut edges {
            if e.0 >= n || e.1 >= n || e.0 == e.1 {
                return Err(invalid(format!("bad edge {e:?} for {n} sites")));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        let mut dist = vec![usize::MAX; n * n];
        let mut queue = VecDeque::new();
        for src in 0..n {
            dist[src * n + src] = 0;
            queue.push_back(src);
            while let Some(x) = queue.pop_front() {
                let dx = dist[src * n + x];
                for &y in &adj[x] {
                    if dist[src * n + y] == usize::MAX {
                        dist[src * n + y] = dx + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        if dist.contains(&usize::MAX) {
            return Err(invalid("graph is not connected"));
        }
        Ok(Self {
            n,
            edges,
            dist,
            boundary,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn sites(&self) -> BTreeSet<usize> {
        (0..self.n).collect()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn boundary(&self) -> Option<Boundary> {
        self.boundary
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y]
    }

    fn check_nonempty(&self, set: &BTreeSet<usize>, what: &str) -> Result<()> {
        if set.is_empty() {
            return Err(invalid(format!("{what} must be nonempty")));
        }
        if let Some(&s) = set.iter().next_back().filter(|&&s| s >= self.n) {
            return Err(invalid(format!(
                "site {s} outside lattice of {} sites",
                self.n
            )));
        }
        Ok(())
    }

    /// `d(X, Z) = min d(x, z)`.
    pub fn set_distance(&self, x: &BTreeSet<usize>, z: &BTreeSet<usize>) -> Result<usize> {
        self.check_nonempty(x, "X")?;
        self.check_nonempty(z, "Z")?;
        Ok(x.iter()
            .flat_map(|&a| z.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.distance(a, b))
            .min()
            .unwrap_or(0))
    }

    /// `D(X)`: largest pairwise distance within `X`.
    pub fn diameter(&self, x: &BTreeSet<usize>) -> Result<usize> {
        self.check_nonempty(x, "X")?;
        Ok(self.diameter_unchecked(x.iter().copied()))
    }

    pub(crate) fn diameter_unchecked(&self, x: impl Iterator<Item = usize> + Clone) -> usize {
        let mut d = 0;
        for a in x.clone() {
            for b in x.clone() {
                d = d.max(self.distance(a, b));
            }
        }
        d
    }

    /// `D_Z(X) = D(X) + d(X, Z)`.
    pub fn anchored_diameter(&self, x: &BTreeSet<usize>, z: &BTreeSet<usize>) -> Result<usize> {
        Ok(self.diameter(x)? + self.set_distance(x, z)?)
    }

    /// `X^(r) = { y : d(y, X) <= r }`.
    pub fn fatten(&self, x: &BTreeSet<usize>, r: usize) -> Result<BTreeSet<usize>> {
        self.check_nonempty(x, "X")?;
        Ok((0..self.n)
            .filter(|&y| x.iter().any(|&a| self.distance(a, y) <= r))
            .collect())
    }
}
