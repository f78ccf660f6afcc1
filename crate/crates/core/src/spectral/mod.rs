//! Ramanujan certification and the Chebyshev sphere operator.
//!
//! `S(R) = (k-1)^(R/2) U_R(A / 2 sqrt(k-1))` is evaluated on a delta vector
//! through the integer recurrence `s_{r+1} = A s_r - (k-1) s_{r-1}`, so sphere
//! vectors are exact. Variances are computed from the vector itself rather
//! than from an eigenbasis; the two agree by Parseval.

mod lanczos;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::RegularGraph;
use crate::metrics::bipartition;

pub use lanczos::adjacency_matvec as adjacency_matvec_f64;

/// Upper bound on Lanczos matrix-vector products per certification.
pub const MAX_MATVECS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub k: usize,
    /// Largest `|lambda|` over nontrivial eigenvalues.
    pub lambda_star: f64,
    /// Extreme nontrivial eigenvalues.
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// `2 sqrt(k - 1)`.
    pub ramanujan_bound: f64,
    pub ramanujan: bool,
    pub bipartite: bool,
    pub tol: f64,
    /// Error bound achieved at `lambda_star`.
    pub error_bound: f64,
    pub iterations: usize,
}

impl SpectralSummary {
    /// `theta` with `lambda_star = 2 sqrt(k-1) cos(theta)`, when `lambda_star` is in range.
    pub fn theta(&self) -> Option<f64> {
        let c = self.lambda_star / self.ramanujan_bound;
        (c <= 1.0).then(|| c.acos())
    }
}

/// Largest nontrivial `|lambda|`, excluding `k` (and `-k` for bipartite graphs).
pub fn extreme_nontrivial_eigenvalue<G: RegularGraph + ?Sized>(g: &G, tol: f64) -> Result<SpectralSummary> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    let n = g.vertex_count();
    let k = g.degree();
    let scale = 1.0 / (n as f64).sqrt();
    let mut deflate = vec![vec![scale; n]];
    let coloring = bipartition(g);
    if let Some(color) = &coloring {
        deflate.push(color.iter().map(|&c| if c == 0 { scale } else { -scale }).collect());
    }
    let ext = lanczos::extremes(g, &deflate, tol, MAX_MATVECS)?;
    let (lambda_star, error_bound) = if ext.max.abs() >= ext.min.abs() {
        (ext.max.abs(), ext.err_max)
    } else {
        (ext.min.abs(), ext.err_min)
    };
    let bound = 2.0 * ((k as f64) - 1.0).sqrt();
    Ok(SpectralSummary {
        k,
        lambda_star,
        lambda_max: ext.max,
        lambda_min: ext.min,
        ramanujan_bound: bound,
        ramanujan: lambda_star <= bound + tol,
        bipartite: coloring.is_some(),
        tol,
        error_bound,
        iterations: ext.matvecs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Values {
    Native(Vec<i128>),
    Big(Vec<BigInt>),
}

/// An exact integer row `T(x, .)` of a polynomial in the adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereVector {
    pub root: u32,
    pub radius: u32,
    values: Values,
}

impl SphereVector {
    pub fn len(&self) -> usize {
        match &self.values {
            Values::Native(v) => v.len(),
            Values::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, y: usize) -> BigInt {
        match &self.values {
            Values::Native(v) => BigInt::from(v[y]),
            Values::Big(v) => v[y].clone(),
        }
    }

    pub fn is_zero_at(&self, y: usize) -> bool {
        match &self.values {
            Values::Native(v) => v[y] == 0,
            Values::Big(v) => v[y].is_zero(),
        }
    }

    /// Whether arbitrary precision was needed.
    pub fn is_big(&self) -> bool {
        matches!(self.values, Values::Big(_))
    }

    pub fn to_vec(&self) -> Vec<BigInt> {
        (0..self.len()).map(|y| self.get(y)).collect()
    }

    pub fn zero_count(&self) -> usize {
        (0..self.len()).filter(|&y| self.is_zero_at(y)).count()
    }

    pub fn sum(&self) -> BigInt {
        match &self.values {
            Values::Native(v) => v.iter().map(|&x| BigInt::from(x)).sum(),
            Values::Big(v) => v.iter().sum(),
        }
    }

    pub fn sum_of_squares(&self) -> BigInt {
        match &self.values {
            Values::Native(v) => v.iter().map(|&x| BigInt::from(x) * x).sum(),
            Values::Big(v) => v.iter().map(|x| x * x).sum(),
        }
    }
}

fn native_step<G: RegularGraph + ?Sized>(g: &G, cur: &[i128], prev: &[i128], shift: i128) -> Option<Vec<i128>> {
    let k = g.degree();
    let slots = g.slots();
    (0..g.vertex_count())
        .into_par_iter()
        .map(|v| {
            let mut acc: i128 = 0;
            for &w in &slots[v * k..(v + 1) * k] {
                acc = acc.checked_add(cur[w as usize])?;
            }
            acc.checked_sub(shift.checked_mul(prev[v])?)
        })
        .collect()
}

fn big_step<G: RegularGraph + ?Sized>(g: &G, cur: &[BigInt], prev: &[BigInt], shift: i64) -> Vec<BigInt> {
    let k = g.degree();
    let slots = g.slots();
    (0..g.vertex_count())
        .into_par_iter()
        .map(|v| {
            let acc: BigInt = slots[v * k..(v + 1) * k].iter().map(|&w| &cur[w as usize]).sum();
            acc - &prev[v] * shift
        })
        .collect()
}

/// Row `x` of the sequence `T_0 = I`, `T_1 = A`, `T_2 = A^2 - first_shift I`,
/// `T_{r+1} = A T_r - (k-1) T_{r-1}`, evaluated at `radius`.
fn three_term<G: RegularGraph + ?Sized>(g: &G, x: u32, radius: u32, first_shift: i64) -> Result<SphereVector> {
    let n = g.vertex_count();
    if x as usize >= n {
        return Err(invalid(format!("vertex {x} out of range for {n} vertices")));
    }
    let shift_at = |r: u32| if r == 1 { first_shift } else { g.degree() as i64 - 1 };

    let mut prev = vec![0i128; n];
    let mut cur = vec![0i128; n];
    cur[x as usize] = 1;
    let mut r = 0;
    let mut overflowed = false;
    while r < radius {
        let shift = if r == 0 { 0 } else { shift_at(r) };
        match native_step(g, &cur, &prev, shift as i128) {
            Some(next) => {
                prev = std::mem::replace(&mut cur, next);
                r += 1;
            }
            None => {
                overflowed = true;
                break;
            }
        }
    }
    if !overflowed {
        return Ok(SphereVector {
            root: x,
            radius,
            values: Values::Native(cur),
        });
    }
    let mut prev: Vec<BigInt> = prev.into_iter().map(BigInt::from).collect();
    let mut cur: Vec<BigInt> = cur.into_iter().map(BigInt::from).collect();
    while r < radius {
        let shift = if r == 0 { 0 } else { shift_at(r) };
        let next = big_step(g, &cur, &prev, shift);
        prev = std::mem::replace(&mut cur, next);
        r += 1;
    }
    Ok(SphereVector {
        root: x,
        radius,
        values: Values::Big(cur),
    })
}

/// The row `S(R)(x, .)` of the Chebyshev sphere operator.
pub fn chebyshev_sphere_vector<G: RegularGraph + ?Sized>(g: &G, x: u32, radius: u32) -> Result<SphereVector> {
    three_term(g, x, radius, g.degree() as i64 - 1)
}

/// Non-backtracking walk counts `N_R(x, .)` of length exactly `radius`.
pub fn nbw_count_vector<G: RegularGraph + ?Sized>(g: &G, x: u32, radius: u32) -> Result<SphereVector> {
    three_term(g, x, radius, g.degree() as i64)
}

/// `|M(x, R)|` with `M = {y : S(R)(x, y) = 0}` and the inequalities it must satisfy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnreachableReport {
    pub root: u32,
    pub radius: u32,
    pub n: usize,
    pub k: usize,
    /// `|{y : S(R)(x, y) = 0}|`.
    pub unreachable: usize,
    /// `|{y : N_R(x, y) = 0}|`, vertices with no non-backtracking walk of length exactly `R`.
    pub unreachable_exact_length: usize,
    /// `|M| (k-1)^R < n^2 (R+1)^2`, compared exactly.
    pub raw_bound_holds: bool,
    /// `ln(|M| (k-1)^R)`, `None` when `M` is empty, and `ln(n^2 (R+1)^2)`.
    pub raw_lhs_ln: Option<f64>,
    pub raw_rhs_ln: f64,
    /// `epsilon` with `R = (1 + epsilon) log_{k-1}(n)`.
    pub epsilon: f64,
    /// `|M| <= n^(1-epsilon) (1+R)^2`; `None` when `epsilon <= 0`.
    pub theorem_bound_holds: Option<bool>,
    pub theorem_bound: Option<f64>,
}

pub fn unreachable_count<G: RegularGraph + ?Sized>(g: &G, x: u32, radius: u32) -> Result<UnreachableReport> {
    let n = g.vertex_count();
    let k = g.degree();
    let s = chebyshev_sphere_vector(g, x, radius)?;
    let exact = nbw_count_vector(g, x, radius)?;
    let m = s.zero_count();

    let branch = BigUint::from(k - 1).pow(radius);
    let lhs = BigUint::from(m) * &branch;
    let rhs = BigUint::from(n).pow(2) * BigUint::from(radius + 1).pow(2);

    let log_base = ((k - 1) as f64).ln();
    let log_n = (n as f64).ln();
    let epsilon = if log_base > 0.0 && log_n > 0.0 {
        radius as f64 * log_base / log_n - 1.0
    } else {
        f64::NAN
    };
    let (theorem_bound_holds, theorem_bound) = if epsilon > 0.0 {
        let bound_ln = (1.0 - epsilon) * log_n + 2.0 * (1.0 + radius as f64).ln();
        let holds = m == 0 || (m as f64).ln() <= bound_ln + 1e-12;
        (Some(holds), Some(bound_ln.exp()))
    } else {
        (None, None)
    };

    Ok(UnreachableReport {
        root: x,
        radius,
        n,
        k,
        unreachable: m,
        unreachable_exact_length: exact.zero_count(),
        raw_bound_holds: lhs < rhs,
        raw_lhs_ln: (!lhs.is_zero()).then(|| big_ln(&lhs)),
        raw_rhs_ln: big_ln(&rhs),
        epsilon,
        theorem_bound_holds,
        theorem_bound,
    })
}

fn big_ln(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Variance of `S(R)(x, .)` over `y`, with the variance bound evaluated exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereVariance {
    pub root: u32,
    pub radius: u32,
    /// `sum_y (S(R)(x,y) - mean)^2`, the mean being `sum_y S(R)(x,y) / n`.
    pub variance: f64,
    pub mean: f64,
    /// `(R+1)^2 (k-1)^R`.
    pub bound: f64,
    /// `variance <= bound`, decided in exact integer arithmetic.
    pub holds: bool,
    /// The sum of squares centered at `k(k-1)^(R-1) / n` instead of the mean.
    pub tree_centered: f64,
}

pub fn sphere_variance<G: RegularGraph + ?Sized>(g: &G, x: u32, radius: u32) -> Result<SphereVariance> {
    if radius == 0 {
        return Err(invalid("variance needs radius at least 1"));
    }
    if bipartition(g).is_some() {
        return Err(Error::Unsupported(
            "variance bound needs a non-bipartite graph (-k is an eigenvalue)".into(),
        ));
    }
    let n = g.vertex_count();
    let k = g.degree() as u64;
    let s = chebyshev_sphere_vector(g, x, radius)?;
    let total = s.sum();
    let squares = s.sum_of_squares();
    let nb = BigInt::from(n);
    // n * Var = n * sum(s^2) - (sum s)^2
    let scaled_var = &nb * &squares - &total * &total;
    let branch = BigInt::from(k - 1).pow(radius);
    let bound = BigInt::from(radius + 1).pow(2) * &branch;
    let tree_mass = BigInt::from(k) * BigInt::from(k - 1).pow(radius - 1);
    let offset = &total - &tree_mass;
    let to_f = |v: &BigInt| v.to_f64().unwrap_or(f64::INFINITY);
    Ok(SphereVariance {
        root: x,
        radius,
        variance: to_f(&scaled_var) / n as f64,
        mean: to_f(&total) / n as f64,
        bound: to_f(&bound),
        holds: scaled_var <= &nb * &bound,
        tree_centered: to_f(&(scaled_var + &offset * &offset)) / n as f64,
    })
}

/// `sum_y S(R)(x, y)`, which equals `sum_{i<=R} (k-1)^i`.
pub fn sphere_mass(k: u64, radius: u32) -> BigUint {
    (0..=radius)
        .map(|i| BigUint::from(k - 1).pow(i))
        .fold(BigUint::zero(), |a, b| a + b)
}

/// `sum_y N_R(x, y)`: 1 at radius 0, else `k (k-1)^(R-1)`.
pub fn nbw_mass(k: u64, radius: u32) -> BigUint {
    if radius == 0 {
        BigUint::one()
    } else {
        BigUint::from(k) * BigUint::from(k - 1).pow(radius - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FlatGraph;

    #[test]
    fn complete_graph_spectrum() {
        let k7 = FlatGraph::complete(7);
        let s = extreme_nontrivial_eigenvalue(&k7, 1e-10).unwrap();
        assert!((s.lambda_star - 1.0).abs() < 1e-8, "{s:?}");
        assert!(s.ramanujan && !s.bipartite);
    }

    #[test]
    fn petersen_spectrum() {
        let s = extreme_nontrivial_eigenvalue(&FlatGraph::petersen(), 1e-10).unwrap();
        assert!((s.lambda_star - 2.0).abs() < 1e-8, "{s:?}");
        assert!((s.lambda_max - 1.0).abs() < 1e-8);
        assert!(s.ramanujan);
    }

    #[test]
    fn even_cycle_deflates_sign_vector() {
        // C_8: eigenvalues 2 cos(2 pi j / 8); nontrivial max |lambda| is sqrt(2).
        let s = extreme_nontrivial_eigenvalue(&FlatGraph::cycle(8), 1e-10).unwrap();
        assert!(s.bipartite);
        assert!((s.lambda_star - 2f64.sqrt()).abs() < 1e-8, "{s:?}");
    }

    #[test]
    fn bad_tolerance() {
        assert!(extreme_nontrivial_eigenvalue(&FlatGraph::petersen(), 0.0).is_err());
    }

    #[test]
    fn sphere_low_radii() {
        let p = FlatGraph::petersen();
        let s0 = chebyshev_sphere_vector(&p, 3, 0).unwrap();
        assert_eq!(s0.zero_count(), 9);
        assert!(!s0.is_zero_at(3));
        let s1 = chebyshev_sphere_vector(&p, 3, 1).unwrap();
        for y in 0..10 {
            let expect = p.neighbors(3).iter().filter(|&&w| w as usize == y).count();
            assert_eq!(s1.get(y), BigInt::from(expect));
        }
    }

    #[test]
    fn nbw_two_steps_never_return() {
        let p = FlatGraph::petersen();
        let n2 = nbw_count_vector(&p, 0, 2).unwrap();
        assert!(n2.is_zero_at(0));
        assert_eq!(n2.sum(), BigInt::from(3 * 2));
    }

    #[test]
    fn k7_variance_radius_one() {
        let v = sphere_variance(&FlatGraph::complete(7), 0, 1).unwrap();
        assert!((v.variance - 6.0 / 7.0).abs() < 1e-12);
        assert!((v.tree_centered - 6.0 / 7.0).abs() < 1e-12);
        assert_eq!(v.bound, 20.0);
        assert!(v.holds);
    }

    #[test]
    fn variance_rejects_bipartite_and_radius_zero() {
        assert!(matches!(
            sphere_variance(&FlatGraph::cycle(6), 0, 2),
            Err(Error::Unsupported(_))
        ));
        assert!(sphere_variance(&FlatGraph::complete(5), 0, 0).is_err());
    }

    #[test]
    fn unreachable_at_radius_zero() {
        let r = unreachable_count(&FlatGraph::petersen(), 0, 0).unwrap();
        assert_eq!(r.unreachable, 9);
        assert!(r.theorem_bound_holds.is_none());
    }

    #[test]
    fn big_integer_promotion_matches_mass() {
        // 5^60 overflows i128, forcing the arbitrary-precision path.
        let k7 = FlatGraph::complete(7);
        let s = nbw_count_vector(&k7, 0, 60).unwrap();
        assert!(s.is_big());
        assert_eq!(s.sum(), BigInt::from(nbw_mass(6, 60)));
        let c = chebyshev_sphere_vector(&k7, 0, 60).unwrap();
        assert_eq!(c.sum(), BigInt::from(sphere_mass(6, 60)));
    }
}
