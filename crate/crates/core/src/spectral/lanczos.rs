//! Thick-restart Lanczos for both ends of the nontrivial adjacency spectrum.
//!
//! The known eigenvectors (constant, and the bipartition sign vector) are
//! projected out of every new Krylov vector. The basis is fully
//! reorthogonalized twice per step, and at each restart the `KEEP` Ritz
//! vectors nearest each end of the spectrum are retained.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::RegularGraph;

const START_SEED: u64 = 0x5eed_1a4c_2057_0001;
const KEEP: usize = 12;
const CHECK_EVERY: usize = 4;
/// Budget for the stored basis, in f64 values.
const BASIS_BUDGET: usize = 20_000_000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Extremes {
    pub max: f64,
    pub min: f64,
    /// Eigenvalue error bounds for `max` and `min`.
    pub err_max: f64,
    pub err_min: f64,
    pub matvecs: usize,
}

/// `y = A x` for the adjacency operator of `g`.
pub fn adjacency_matvec<G: RegularGraph + ?Sized>(g: &G, x: &[f64], y: &mut [f64]) {
    let k = g.degree();
    let slots = g.slots();
    y.par_iter_mut().enumerate().for_each(|(v, out)| {
        *out = slots[v * k..(v + 1) * k].iter().map(|&w| x[w as usize]).sum();
    });
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    basis
        .iter()
        .map(|b| {
            let c = dot(v, b);
            axpy(-c, b, v);
            c
        })
        .collect()
}

/// Error bound for a Ritz value with residual norm `r` whose nearest other Ritz value is `gap` away.
fn eigen_error(r: f64, gap: f64) -> f64 {
    if gap > 0.0 {
        r.min(r * r / gap)
    } else {
        r
    }
}

/// Extreme eigenvalues of the adjacency operator on the orthogonal complement of `deflate`.
///
/// `deflate` must be orthonormal eigenvectors of the adjacency matrix.
pub(crate) fn extremes<G: RegularGraph + ?Sized>(
    g: &G,
    deflate: &[Vec<f64>],
    tol: f64,
    max_matvecs: usize,
) -> Result<Extremes> {
    let n = g.vertex_count();
    let dim = n.saturating_sub(deflate.len());
    if dim == 0 {
        return Err(Error::InvalidArgument("no nontrivial eigenvalues".into()));
    }
    let max_basis = dim.min((BASIS_BUDGET / n.max(1)).max(3 * KEEP)).min(160);
    let keep = KEEP.min(max_basis.saturating_sub(2) / 2);

    let mut rng = Xoshiro256PlusPlus::seed_from_u64(START_SEED);
    let mut start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    project_out(&mut start, deflate);
    normalize(&mut start);

    let mut basis: Vec<Vec<f64>> = vec![start];
    // Projected operator V^T A V, stored dense because restarts make it an arrowhead.
    let mut h = DMatrix::<f64>::zeros(max_basis, max_basis);
    let mut w = vec![0.0; n];
    let mut matvecs = 0;

    loop {
        let j = basis.len() - 1;
        adjacency_matvec(g, &basis[j], &mut w);
        matvecs += 1;
        project_out(&mut w, deflate);
        let mut coeffs = project_out(&mut w, &basis);
        for (c, extra) in coeffs.iter_mut().zip(project_out(&mut w, &basis)) {
            *c += extra;
        }
        for (i, &c) in coeffs.iter().enumerate() {
            h[(i, j)] = c;
            h[(j, i)] = c;
        }
        let beta = dot(&w, &w).sqrt();
        let size = j + 1;
        let exhausted = beta <= 1e-10 * (g.degree() as f64).max(1.0) || size == dim;

        if exhausted || size == max_basis || size % CHECK_EVERY == 0 || matvecs >= max_matvecs {
            let t = h.view((0, 0), (size, size)).into_owned();
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..size).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let (lo, hi) = (order[0], order[size - 1]);
            let resid = |i: usize| {
                if exhausted {
                    0.0
                } else {
                    beta * eig.eigenvectors[(size - 1, i)].abs()
                }
            };
            let gap = |a: usize, b: usize| {
                if size > 1 {
                    (eig.eigenvalues[a] - eig.eigenvalues[b]).abs()
                } else {
                    0.0
                }
            };
            let ext = Extremes {
                max: eig.eigenvalues[hi],
                min: eig.eigenvalues[lo],
                err_max: eigen_error(resid(hi), gap(hi, order[size.saturating_sub(2)])),
                err_min: eigen_error(resid(lo), gap(lo, order[1.min(size - 1)])),
                matvecs,
            };
            if exhausted || (ext.err_max <= tol && ext.err_min <= tol) {
                return Ok(ext);
            }
            if matvecs >= max_matvecs {
                return Err(Error::Convergence {
                    iterations: matvecs,
                    lower: ext.min,
                    upper: ext.max,
                });
            }
            if size == max_basis {
                // Keep the Ritz vectors closest to each end.
                let kept: Vec<usize> = order[..keep].iter().chain(&order[size - keep..]).copied().collect();
                let new_basis: Vec<Vec<f64>> = kept
                    .iter()
                    .map(|&i| {
                        let mut y = vec![0.0; n];
                        for (r, b) in basis.iter().enumerate() {
                            axpy(eig.eigenvectors[(r, i)], b, &mut y);
                        }
                        y
                    })
                    .collect();
                h.fill(0.0);
                for (r, &i) in kept.iter().enumerate() {
                    h[(r, r)] = eig.eigenvalues[i];
                }
                basis = new_basis;
            }
        }
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(std::mem::replace(&mut w, vec![0.0; n]));
    }
}
