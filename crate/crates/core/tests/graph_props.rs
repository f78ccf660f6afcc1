#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;

use proptest::prelude::*;
use rama_core::cayley::{build_lps, build_random_cayley, CayleyGraph};
use rama_core::graph::{is_symmetric, FlatGraph, RegularGraph};
use rama_core::metrics::*;
use rama_core::ntheory::legendre;

fn x529() -> &'static CayleyGraph {
    static G: OnceLock<CayleyGraph> = OnceLock::new();
    G.get_or_init(|| build_lps(5, 29).unwrap())
}

fn z29() -> &'static CayleyGraph {
    static G: OnceLock<CayleyGraph> = OnceLock::new();
    G.get_or_init(|| build_random_cayley(29, 3).unwrap())
}

/// All-pairs distances by Floyd-Warshall.
fn floyd(g: &FlatGraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let inf = u32::MAX / 2;
    let mut d = vec![vec![inf; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for &w in g.neighbors(v) {
            d[v][w as usize] = d[v][w as usize].min(1);
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][m] + d[m][j]);
            }
        }
    }
    d
}

/// Union of random Hamiltonian cycles, one per seed; parallel edges are possible.
fn random_regular(n: usize, seeds: &[u64]) -> Option<FlatGraph> {
    let mut edges = Vec::new();
    for &s in seeds {
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut state = s | 1;
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            perm.swap(i, (state % (i as u64 + 1)) as usize);
        }
        for i in 0..n {
            edges.push((perm[i], perm[(i + 1) % n]));
        }
    }
    FlatGraph::from_edges(n, &edges).ok()
}

#[test]
fn cayley_adjacency_is_symmetric() {
    assert!(is_symmetric(x529()));
    assert!(is_symmetric(z29()));
    assert!(is_symmetric(&build_lps(5, 13).unwrap()));
}

#[test]
fn bipartite_iff_nonresidue() {
    for (p, q) in [(5u64, 13u64), (5, 29), (5, 41), (13, 17), (5, 17), (13, 29)] {
        let g = build_lps(p, q).unwrap();
        assert_eq!(is_bipartite(&g), legendre(p as i64, q).unwrap() == -1, "({p},{q})");
    }
}

#[test]
fn cayley_level_profiles() {
    for g in [x529(), z29()] {
        let levels = bfs_levels(g, 0);
        assert_eq!(levels.reached() as usize, g.n());
        let k = g.k() as u64;
        for (r, &c) in levels.counts.iter().enumerate().skip(1) {
            assert!(c <= k * (k - 1).pow(r as u32 - 1), "level {r}");
        }
        // Below the girth the ball is a tree.
        let gi = girth(g).unwrap();
        for r in 1..=((gi - 1) / 2) as usize {
            assert_eq!(levels.counts[r], k * (k - 1).pow(r as u32 - 1));
        }
    }
}

#[test]
fn diameter_sandwich_and_girth_bound() {
    for (p, q) in [(5u64, 29u64), (5, 13), (13, 17), (5, 41)] {
        let g = build_lps(p, q).unwrap();
        let n = g.n() as f64;
        let logp = |x: f64| x.ln() / (p as f64).ln();
        let d = diameter(&g) as f64;
        assert!(d >= logp(n).floor(), "({p},{q}) diameter {d}");
        assert!(d <= 2.0 * logp(n) + 2.0 * logp(2.0) + 1.0, "({p},{q}) diameter {d}");
        // Lubotzky's girth lower bound (2/3) log_p n - 2 log_p 2.
        let gi = girth(&g).unwrap() as f64;
        assert!(gi >= 2.0 / 3.0 * logp(n) - 2.0 * logp(2.0), "({p},{q}) girth {gi}");
    }
}

#[test]
fn bfs_agrees_with_floyd_warshall() {
    let mut graphs = vec![FlatGraph::petersen(), FlatGraph::complete(6), FlatGraph::cycle(9)];
    for s in 1..20u64 {
        if let Some(g) = random_regular(30, &[s, s * 977, s * 31337]) {
            graphs.push(g);
        }
    }
    for g in &graphs {
        let d = floyd(g);
        let n = g.vertex_count();
        for u in 0..n {
            let bfs = bfs_distances(g, u as u32);
            for v in 0..n {
                let want = if d[u][v] >= u32::MAX / 2 { u32::MAX } else { d[u][v] };
                assert_eq!(bfs[v], want);
            }
        }
        let ecc_max = (0..n).map(|u| d[u].iter().copied().max().unwrap()).max().unwrap();
        if ecc_max < u32::MAX / 2 {
            assert_eq!(diameter_all_sources(g), ecc_max);
        }
    }
}

#[test]
fn girth_agrees_with_brute_force() {
    // Shortest cycle = min over edges (u,w) of 1 + dist(u,w) with that edge removed.
    for s in 1..15u64 {
        let Some(g) = random_regular(24, &[s, s * 7919]) else {
            continue;
        };
        let n = g.vertex_count();
        let mut best = u32::MAX;
        for u in 0..n {
            for (slot, &w) in g.neighbors(u).iter().enumerate() {
                if (w as usize) < u {
                    continue;
                }
                if w as usize == u {
                    best = best.min(1);
                    continue;
                }
                let mut slots = g.slots().to_vec();
                // Drop one copy of {u, w} by turning both of its slots into self-loops.
                let back = g.neighbors(w as usize).iter().position(|&x| x as usize == u).unwrap();
                slots[u * g.degree() + slot] = u as u32;
                slots[w as usize * g.degree() + back] = w;
                let pruned = FlatGraph::new(n, g.degree(), slots).unwrap();
                let mut dist = vec![u32::MAX; n];
                dist[u] = 0;
                let mut queue = std::collections::VecDeque::from([u]);
                while let Some(x) = queue.pop_front() {
                    for &y in pruned.neighbors(x) {
                        if dist[y as usize] == u32::MAX {
                            dist[y as usize] = dist[x] + 1;
                            queue.push_back(y as usize);
                        }
                    }
                }
                if dist[w as usize] != u32::MAX {
                    best = best.min(dist[w as usize] + 1);
                }
            }
        }
        let want = (best != u32::MAX).then_some(best);
        assert_eq!(girth_all_sources(&g), want, "seed {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn vertex_transitive_eccentricity(v in 0u32..12180) {
        prop_assert_eq!(eccentricity(x529(), v), diameter(x529()));
        prop_assert_eq!(eccentricity(z29(), v), diameter(z29()));
    }

    #[test]
    fn distance_is_symmetric(u in 0u32..12180, v in 0u32..12180) {
        let g = x529();
        prop_assert_eq!(distance(g, u, v), distance(g, v, u));
        let d = distance(g, u, v).unwrap();
        prop_assert!(d <= diameter(g));
        prop_assert_eq!(bfs_distances(g, u)[v as usize], d);
    }

    #[test]
    fn levels_partition_vertices(root in 0u32..12180) {
        let levels = bfs_levels(x529(), root);
        prop_assert_eq!(levels.counts.clone(), vec![1, 6, 30, 150, 750, 3026, 5970, 2195, 52]);
        let dist = bfs_distances(x529(), root);
        for (r, &c) in levels.counts.iter().enumerate() {
            prop_assert_eq!(dist.iter().filter(|&&d| d as usize == r).count() as u64, c);
        }
    }
}
