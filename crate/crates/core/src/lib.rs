//! LPS Ramanujan graphs `X_{p,m}` and random Cayley graphs over `PSL2(Z/qZ)`.
//!
//! The crate builds the graphs, measures them exactly (levels, diameter,
//! girth, distances), certifies the Ramanujan eigenvalue bound, and evaluates
//! two families of checks: witness-vertex lower bounds on the diameter, and
//! the Chebyshev sphere-operator bound on the set of vertices not reached by
//! non-backtracking walks of a given length.

pub mod bounds;
pub mod cayley;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod ntheory;
pub mod pgl;
pub mod spectral;

pub use cayley::{build_lps, build_random_cayley, CayleyGraph, Provenance};
pub use error::{Error, Result};
pub use graph::{FlatGraph, RegularGraph};
pub use pgl::{GroupKind, ProjMatrix};
