//! Flat regular adjacency shared by every graph in the crate.

use crate::error::{invalid, Result};

/// A `k`-regular multigraph stored row by row: row `v` is the `k` neighbor slots of `v`.
pub trait RegularGraph: Sync {
    fn vertex_count(&self) -> usize;

    fn degree(&self) -> usize;

    /// All `n * k` slots, row-major.
    fn slots(&self) -> &[u32];

    fn neighbors(&self, v: usize) -> &[u32] {
        let k = self.degree();
        &self.slots()[v * k..(v + 1) * k]
    }
}

/// `u` appears in row `v` exactly as often as `v` appears in row `u`.
pub fn is_symmetric<G: RegularGraph + ?Sized>(g: &G) -> bool {
    let count = |row: &[u32], x: u32| row.iter().filter(|&&y| y == x).count();
    (0..g.vertex_count()).all(|v| {
        let row = g.neighbors(v);
        row.iter()
            .all(|&w| count(row, w) == count(g.neighbors(w as usize), v as u32))
    })
}

/// A plain regular graph, used for small oracle graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatGraph {
    n: usize,
    k: usize,
    slots: Vec<u32>,
}

impl FlatGraph {
    pub fn new(n: usize, k: usize, slots: Vec<u32>) -> Result<Self> {
        if slots.len() != n * k {
            return Err(invalid(format!("expected {} slots, got {}", n * k, slots.len())));
        }
        if slots.iter().any(|&w| w as usize >= n) {
            return Err(invalid("neighbor index out of range"));
        }
        let g = Self { n, k, slots };
        if !is_symmetric(&g) {
            return Err(invalid("adjacency is not symmetric"));
        }
        Ok(g)
    }

    /// Build from an undirected edge list; every vertex must end up with the same degree.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(invalid("edge endpoint out of range"));
            }
            rows[u as usize].push(v);
            rows[v as usize].push(u);
        }
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(invalid("edge list is not regular"));
        }
        Self::new(n, k, rows.concat())
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
            .collect();
        Self::from_edges(n, &edges).expect("complete graph is regular")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|u| (u, (u + 1) % n as u32)).collect();
        Self::from_edges(n, &edges).expect("cycle is regular")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Self::from_edges(10, &edges).expect("Petersen graph is regular")
    }
}

impl RegularGraph for FlatGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn slots(&self) -> &[u32] {
        &self.slots
    }
}
