//! Exact BFS measurements: level census, eccentricity, diameter, girth, distance, 2-coloring.
//!
//! Every Cayley graph is vertex-transitive, so single-source quantities taken
//! at vertex 0 are graph invariants. The `*_all_sources` variants exist for
//! small oracle graphs without that symmetry.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::RegularGraph;

const UNSEEN: u32 = u32::MAX;

/// `counts[r]` is the number of vertices at distance `r` from `root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelProfile {
    pub root: u32,
    pub counts: Vec<u64>,
    pub eccentricity: u32,
}

impl LevelProfile {
    pub fn reached(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Level-synchronous BFS over two flat frontiers and a byte-per-vertex visited map.
///
/// `visit(v, level)` is called once per reached vertex; returning `false` stops the search.
fn bfs<G, F>(g: &G, root: u32, mut visit: F)
where
    G: RegularGraph + ?Sized,
    F: FnMut(u32, u32) -> bool,
{
    let mut seen = vec![false; g.vertex_count()];
    let mut frontier = vec![root];
    let mut next = Vec::new();
    seen[root as usize] = true;
    let mut level = 0;
    while !frontier.is_empty() {
        for &v in &frontier {
            if !visit(v, level) {
                return;
            }
        }
        next.clear();
        for &v in &frontier {
            for &w in g.neighbors(v as usize) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    next.push(w);
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
        level += 1;
    }
}

pub fn bfs_levels<G: RegularGraph + ?Sized>(g: &G, root: u32) -> LevelProfile {
    let mut counts: Vec<u64> = Vec::new();
    bfs(g, root, |_, level| {
        if counts.len() <= level as usize {
            counts.push(0);
        }
        counts[level as usize] += 1;
        true
    });
    LevelProfile {
        root,
        eccentricity: counts.len() as u32 - 1,
        counts,
    }
}

/// Distance from `root` to every vertex, `u32::MAX` where unreachable.
pub fn bfs_distances<G: RegularGraph + ?Sized>(g: &G, root: u32) -> Vec<u32> {
    let mut dist = vec![UNSEEN; g.vertex_count()];
    bfs(g, root, |v, level| {
        dist[v as usize] = level;
        true
    });
    dist
}

pub fn eccentricity<G: RegularGraph + ?Sized>(g: &G, root: u32) -> u32 {
    bfs_levels(g, root).eccentricity
}

/// Diameter of a vertex-transitive graph: the eccentricity of vertex 0.
pub fn diameter<G: RegularGraph + ?Sized>(g: &G) -> u32 {
    eccentricity(g, 0)
}

/// Maximum eccentricity over all roots.
pub fn diameter_all_sources<G: RegularGraph + ?Sized>(g: &G) -> u32 {
    (0..g.vertex_count() as u32)
        .into_par_iter()
        .map(|v| eccentricity(g, v))
        .max()
        .unwrap_or(0)
}

pub fn distance<G: RegularGraph + ?Sized>(g: &G, u: u32, v: u32) -> Option<u32> {
    let mut found = None;
    bfs(g, u, |w, level| {
        if w == v {
            found = Some(level);
            return false;
        }
        true
    });
    found
}

/// Length of a shortest cycle through `root`, `None` if there is none.
///
/// Parallel slots between the same pair of vertices count as a 2-cycle and a
/// self-loop slot as a 1-cycle.
pub fn shortest_cycle_through<G: RegularGraph + ?Sized>(g: &G, root: u32) -> Option<u32> {
    let n = g.vertex_count();
    let mut dist = vec![UNSEEN; n];
    let mut parent = vec![UNSEEN; n];
    dist[root as usize] = 0;
    let mut frontier = vec![root];
    let mut next = Vec::new();
    let mut level = 0u32;
    while !frontier.is_empty() {
        let mut best: Option<u32> = None;
        let mut offer = |len: u32| best = Some(best.map_or(len, |b| b.min(len)));
        next.clear();
        for &u in &frontier {
            let mut back_slots = 0;
            for &w in g.neighbors(u as usize) {
                let wi = w as usize;
                if w == u {
                    offer(1);
                } else if dist[wi] == UNSEEN {
                    dist[wi] = level + 1;
                    parent[wi] = u;
                    next.push(w);
                } else if dist[wi] == level + 1 {
                    // A second edge into w: from u again, or from another vertex on this level.
                    offer(if parent[wi] == u { 2 } else { 2 * level + 2 });
                } else if dist[wi] == level {
                    offer(2 * level + 1);
                } else if w == parent[u as usize] {
                    back_slots += 1;
                    if back_slots > 1 {
                        offer(2);
                    }
                }
            }
        }
        if best.is_some() {
            return best;
        }
        std::mem::swap(&mut frontier, &mut next);
        level += 1;
    }
    None
}

/// Girth of a vertex-transitive graph: the shortest cycle through vertex 0.
pub fn girth<G: RegularGraph + ?Sized>(g: &G) -> Option<u32> {
    shortest_cycle_through(g, 0)
}

pub fn girth_all_sources<G: RegularGraph + ?Sized>(g: &G) -> Option<u32> {
    (0..g.vertex_count() as u32)
        .into_par_iter()
        .filter_map(|v| shortest_cycle_through(g, v))
        .min()
}

/// BFS parity coloring from vertex 0, if it is proper.
///
/// Unreachable vertices are colored 0 and do not affect the answer.
pub fn bipartition<G: RegularGraph + ?Sized>(g: &G) -> Option<Vec<u8>> {
    let color: Vec<u8> = bfs_distances(g, 0)
        .into_iter()
        .map(|d| if d == UNSEEN { 0 } else { (d % 2) as u8 })
        .collect();
    let proper = (0..g.vertex_count()).all(|v| g.neighbors(v).iter().all(|&w| color[w as usize] != color[v]));
    proper.then_some(color)
}

pub fn is_bipartite<G: RegularGraph + ?Sized>(g: &G) -> bool {
    bipartition(g).is_some()
}
