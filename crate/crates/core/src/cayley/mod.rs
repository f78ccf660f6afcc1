//! LPS graphs `X_{p,m}` and seeded random Cayley graphs `Z^q`.

mod format;

use std::path::Path;

use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

pub use format::{FORMAT_VERSION, HEADER_LEN, MAGIC};

use crate::error::{invalid, Error, Result};
use crate::graph::RegularGraph;
use crate::ntheory::{enumerate_generator_solutions, is_prime};
use crate::pgl::{enumerate_group, GroupKind, GroupSpec, LpsEmbedding, ProjMatrix, VertexTable};

/// Resampling cap for random generator sets.
pub const MAX_RANDOM_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Provenance {
    Lps { p: u64, m: u64 },
    Random { q: u64, seed: u64 },
}

/// Immutable Cayley graph: neighbor `j` of vertex `v` is `v * s_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGraph {
    n: usize,
    k: usize,
    adjacency: Vec<u32>,
    generators: Vec<ProjMatrix>,
    provenance: Provenance,
    kind: GroupKind,
}

impl CayleyGraph {
    fn from_generators(
        spec: GroupSpec,
        generators: Vec<ProjMatrix>,
        provenance: Provenance,
    ) -> Result<(Self, VertexTable)> {
        let (table, adjacency) = enumerate_group(&spec, &generators)?;
        let g = Self {
            n: spec.order as usize,
            k: generators.len(),
            adjacency,
            generators,
            provenance,
            kind: spec.kind,
        };
        Ok((g, table))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn adjacency(&self) -> &[u32] {
        &self.adjacency
    }

    pub fn generators(&self) -> &[ProjMatrix] {
        &self.generators
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        match self.provenance {
            Provenance::Lps { m, .. } => m,
            Provenance::Random { q, .. } => q,
        }
    }

    pub fn group_spec(&self) -> GroupSpec {
        GroupSpec {
            modulus: self.modulus(),
            kind: self.kind,
            order: self.n as u64,
        }
    }

    /// Recover the matrix of every vertex by replaying the generator products.
    pub fn vertex_table(&self) -> Result<VertexTable> {
        VertexTable::from_multiplication_table(self.group_spec(), &self.generators, &self.adjacency)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        format::save(self, path.as_ref())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        format::load(path.as_ref())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(format::encoded_len(self));
        format::encode(self, &mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        format::decode(bytes)
    }

    /// The trailing checksum the binary format would carry.
    pub fn checksum(&self) -> u64 {
        format::encode(self, &mut std::io::sink()).expect("sink cannot fail")
    }
}

impl RegularGraph for CayleyGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn slots(&self) -> &[u32] {
        &self.adjacency
    }
}

/// The LPS generators for `(p, m)`, in the order of [`enumerate_generator_solutions`].
pub fn lps_generators(p: u64, m: u64) -> Result<(LpsEmbedding, Vec<ProjMatrix>)> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(invalid(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    if m < 5 || m % 2 == 0 {
        return Err(invalid(format!("modulus {m} must be odd and at least 5")));
    }
    let emb = LpsEmbedding::new(p, m)?;
    let gens = enumerate_generator_solutions(p)?
        .iter()
        .map(|s| emb.embed(s))
        .collect::<Result<Vec<_>>>()?;
    Ok((emb, gens))
}

pub fn build_lps(p: u64, m: u64) -> Result<CayleyGraph> {
    build_lps_with_table(p, m).map(|(g, _)| g)
}

/// [`build_lps`] that also hands back the vertex table built along the way.
pub fn build_lps_with_table(p: u64, m: u64) -> Result<(CayleyGraph, VertexTable)> {
    let (emb, gens) = lps_generators(p, m)?;
    let spec = GroupSpec::new(m, emb.kind)?;
    CayleyGraph::from_generators(spec, gens, Provenance::Lps { p, m })
}

/// Uniform element of `PSL2(Z/qZ)`: uniform invertible matrix, first row divided by the determinant.
fn sample_psl(rng: &mut Xoshiro256PlusPlus, q: u64) -> ProjMatrix {
    loop {
        let e: [u64; 4] = std::array::from_fn(|_| rng.random_range(0..q));
        let det = (e[0] * e[3] % q + q - e[1] * e[2] % q) % q;
        if det == 0 {
            continue;
        }
        let inv = crate::ntheory::inv_mod(det, q).expect("prime modulus");
        let raw = [e[0] * inv % q, e[1] * inv % q, e[2], e[3]].map(|v| v as i64);
        return ProjMatrix::canonical(raw, q, GroupKind::Psl).expect("determinant is 1");
    }
}

/// 6-regular Cayley graph of `PSL2(Z/qZ)` on `{s1, s1^-1, s2, s2^-1, s3, s3^-1}`.
///
/// The stream is Xoshiro256++ seeded through SplitMix64 (`seed_from_u64`).
/// Triples are redrawn until the six generators are distinct non-identity
/// elements that generate the whole group.
pub fn build_random_cayley(q: u64, seed: u64) -> Result<CayleyGraph> {
    if q < 5 || !is_prime(q) {
        return Err(invalid(format!("{q} is not an odd prime at least 5")));
    }
    let spec = GroupSpec::new(q, GroupKind::Psl)?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..MAX_RANDOM_ATTEMPTS {
        let gens: Vec<ProjMatrix> = (0..3)
            .flat_map(|_| {
                let s = sample_psl(&mut rng, q);
                [s, s.inverse()]
            })
            .collect();
        let distinct = gens
            .iter()
            .enumerate()
            .all(|(i, s)| !s.is_identity() && !gens[..i].contains(s));
        if !distinct {
            continue;
        }
        match CayleyGraph::from_generators(spec, gens, Provenance::Random { q, seed }) {
            Ok((g, _)) => return Ok(g),
            Err(Error::NotGenerating { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Resource(format!(
        "no generating triple for PSL2(Z/{q}) after {MAX_RANDOM_ATTEMPTS} draws"
    )))
}
