//! `PSL2(Z/mZ)` and `PGL2(Z/qZ)` with one stored representative per projective class.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ntheory::{factorize, inv_mod, is_prime, mul_mod, reduce, sqrt_mod, QuaternionSolution};

/// Largest group the vertex table will enumerate.
pub const MAX_ORDER: u64 = 20_000_000;

/// Moduli must fit four entries into one `u64` hash key.
const MAX_MODULUS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "PSL")]
    Psl,
    #[serde(rename = "PGL")]
    Pgl,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Psl => "PSL",
            GroupKind::Pgl => "PGL",
        })
    }
}

/// A 2x2 matrix mod `m` in canonical projective form, entries row-major.
///
/// PSL: the lexicographically smaller of `M` and `-M`, i.e. the first nonzero
/// entry is at most `(m - 1) / 2`. PGL (prime modulus): the first nonzero
/// entry is scaled to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProjMatrix {
    entries: [u32; 4],
    modulus: u32,
    kind: GroupKind,
}

impl ProjMatrix {
    /// Canonical representative of the class of `raw`.
    pub fn canonical(raw: [i64; 4], m: u64, kind: GroupKind) -> Result<Self> {
        check_modulus(m, kind)?;
        let e = raw.map(|v| reduce(v, m));
        let det = (mul_mod(e[0], e[3], m) + m - mul_mod(e[1], e[2], m)) % m;
        match kind {
            GroupKind::Psl if det != 1 % m => Err(invalid(format!("determinant {det} is not 1 mod {m}"))),
            GroupKind::Pgl if det == 0 => Err(invalid(format!("matrix is singular mod {m}"))),
            _ => Ok(Self::from_reduced(e, m, kind)),
        }
    }

    pub fn identity(m: u64, kind: GroupKind) -> Result<Self> {
        Self::canonical([1, 0, 0, 1], m, kind)
    }

    /// Canonicalize already-reduced entries of an invertible matrix.
    fn from_reduced(e: [u64; 4], m: u64, kind: GroupKind) -> Self {
        let lead = e.iter().copied().find(|&x| x != 0).unwrap_or(0);
        let scaled = match kind {
            GroupKind::Psl if lead > m - lead => e.map(|x| (m - x) % m),
            GroupKind::Psl => e,
            GroupKind::Pgl => {
                let inv = inv_mod(lead, m).expect("prime modulus");
                e.map(|x| mul_mod(x, inv, m))
            }
        };
        Self {
            entries: scaled.map(|x| x as u32),
            modulus: m as u32,
            kind,
        }
    }

    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    pub fn modulus(&self) -> u64 {
        self.modulus as u64
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn det(&self) -> u64 {
        let m = self.modulus();
        let [a, b, c, d] = self.entries.map(u64::from);
        (mul_mod(a, d, m) + m - mul_mod(b, c, m)) % m
    }

    pub fn is_identity(&self) -> bool {
        let one = 1 % self.modulus;
        self.entries == [one, 0, 0, one]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus || self.kind != other.kind {
            return Err(invalid(format!(
                "cannot multiply {} mod {} by {} mod {}",
                self.kind, self.modulus, other.kind, other.modulus
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        let [e, f, g, h] = other.entries.map(u64::from);
        // Entries are below 2^16, so each sum of two products stays below 2^33.
        let prod = [
            (a * e + b * g) % m,
            (a * f + b * h) % m,
            (c * e + d * g) % m,
            (c * f + d * h) % m,
        ];
        Self::from_reduced(prod, m, self.kind)
    }

    pub fn inverse(&self) -> Self {
        let m = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        // The adjugate is the inverse up to the scalar det, which is projectively trivial.
        Self::from_reduced([d, (m - b) % m, (m - c) % m, a], m, self.kind)
    }

    /// Injective packing used as the vertex-table key.
    pub(crate) fn key(&self) -> u64 {
        let m = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        ((a * m + b) * m + c) * m + d
    }

    pub(crate) fn from_key(key: u64, m: u64, kind: GroupKind) -> Self {
        let d = key % m;
        let c = (key / m) % m;
        let b = (key / (m * m)) % m;
        let a = key / (m * m * m);
        Self {
            entries: [a, b, c, d].map(|x| x as u32),
            modulus: m as u32,
            kind,
        }
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

fn check_modulus(m: u64, kind: GroupKind) -> Result<()> {
    if m == 0 || m >= MAX_MODULUS {
        return Err(invalid(format!("modulus {m} out of range [1, {MAX_MODULUS})")));
    }
    match kind {
        GroupKind::Psl if m % 2 == 0 => Err(invalid(format!("PSL modulus {m} must be odd"))),
        GroupKind::Pgl if !is_prime(m) || m == 2 => Err(invalid(format!("PGL modulus {m} must be an odd prime"))),
        _ => Ok(()),
    }
}

/// Order of `PSL2(Z/mZ)` (odd `m`) or `PGL2(Z/qZ)` (prime `q`).
pub fn group_order(m: u64, kind: GroupKind) -> Result<u64> {
    if m == 0 || m % 2 == 0 {
        return Err(invalid(format!("group order needs an odd modulus, got {m}")));
    }
    match kind {
        GroupKind::Pgl => {
            if !is_prime(m) {
                return Err(invalid(format!("PGL modulus {m} must be prime")));
            }
            Ok(m * m * m - m)
        }
        GroupKind::Psl if m == 1 => Ok(1),
        GroupKind::Psl => {
            // |SL2(Z/q^e)| = q^(3e-2) (q^2 - 1), multiplicative over prime powers.
            let sl: u64 = factorize(m)
                .into_iter()
                .map(|(q, e)| q.pow(3 * e - 2) * (q * q - 1))
                .product();
            Ok(sl / 2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    pub modulus: u64,
    pub kind: GroupKind,
    pub order: u64,
}

impl GroupSpec {
    pub fn new(modulus: u64, kind: GroupKind) -> Result<Self> {
        check_modulus(modulus, kind)?;
        Ok(Self {
            modulus,
            kind,
            order: group_order(modulus, kind)?,
        })
    }
}

/// Square roots of `-1` and `p` mod `m` that turn norm-`p` quaternions into group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LpsEmbedding {
    pub p: u64,
    pub modulus: u64,
    /// The chosen square root of `-1`.
    pub i: u64,
    /// Inverse of the chosen square root of `p`; `None` in the PGL case.
    pub inv_sqrt_p: Option<u64>,
    pub kind: GroupKind,
}

impl LpsEmbedding {
    pub fn new(p: u64, m: u64) -> Result<Self> {
        if m < 3 || m % 2 == 0 {
            return Err(invalid(format!("modulus {m} must be odd and at least 3")));
        }
        if m % p == 0 {
            return Err(Error::Unsupported(format!("{p} divides the modulus {m}")));
        }
        let Some(i) = sqrt_mod(-1, m)? else {
            let bad = factorize(m).into_iter().find(|&(q, _)| q % 4 == 3).map(|(q, _)| q);
            return Err(Error::Unsupported(match bad {
                Some(q) => format!("-1 is not a quadratic residue mod {m} ({q} = 3 mod 4)"),
                None => format!("-1 is not a quadratic residue mod {m}"),
            }));
        };
        let i = i.value();
        match sqrt_mod(p as i64, m)? {
            Some(r) => Ok(Self {
                p,
                modulus: m,
                i,
                inv_sqrt_p: Some(inv_mod(r.value(), m).expect("p is a unit mod m")),
                kind: GroupKind::Psl,
            }),
            None if is_prime(m) => Ok(Self {
                p,
                modulus: m,
                i,
                inv_sqrt_p: None,
                kind: GroupKind::Pgl,
            }),
            None => Err(Error::Unsupported(format!(
                "{p} is not a quadratic residue mod the composite modulus {m}"
            ))),
        }
    }

    pub fn embed(&self, s: &QuaternionSolution) -> Result<ProjMatrix> {
        if s.p != self.p {
            return Err(invalid(format!(
                "solution has norm {}, embedding expects {}",
                s.p, self.p
            )));
        }
        let m = self.modulus;
        let i = self.i as i128;
        let [x0, x1, x2, x3] = s.x.map(i128::from);
        let mut raw = [x0 + i * x1, x2 + i * x3, -x2 + i * x3, x0 - i * x1];
        if let Some(s) = self.inv_sqrt_p {
            raw = raw.map(|v| v * s as i128);
        }
        let raw = raw.map(|v| v.rem_euclid(m as i128) as i64);
        ProjMatrix::canonical(raw, m, self.kind)
    }
}

/// Image of a norm-`p` quaternion in `PSL2(Z/mZ)` or, when `p` is a non-residue mod prime `m`, `PGL2`.
pub fn lift_generator(s: &QuaternionSolution, m: u64) -> Result<ProjMatrix> {
    LpsEmbedding::new(s.p, m)?.embed(s)
}

/// Bijection between group elements and dense indices `0..order`, identity at 0.
#[derive(Debug, Clone)]
pub struct VertexTable {
    spec: GroupSpec,
    keys: Vec<u64>,
    index: FxHashMap<u64, u32>,
}

impl VertexTable {
    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index_of(&self, g: &ProjMatrix) -> Option<u32> {
        if g.modulus() != self.spec.modulus || g.kind() != self.spec.kind {
            return None;
        }
        self.index.get(&g.key()).copied()
    }

    pub fn matrix(&self, idx: u32) -> ProjMatrix {
        ProjMatrix::from_key(self.keys[idx as usize], self.spec.modulus, self.spec.kind)
    }

    /// Rebuild the table from a right-multiplication table produced by [`enumerate_group`].
    pub fn from_multiplication_table(spec: GroupSpec, generators: &[ProjMatrix], table: &[u32]) -> Result<Self> {
        let k = generators.len();
        let n = spec.order as usize;
        if table.len() != n * k {
            return Err(invalid("multiplication table has the wrong size"));
        }
        const UNSET: u64 = u64::MAX;
        let mut keys = vec![UNSET; n];
        keys[0] = ProjMatrix::identity(spec.modulus, spec.kind)?.key();
        let mut queue = vec![0u32];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head] as usize;
            head += 1;
            let g = ProjMatrix::from_key(keys[v], spec.modulus, spec.kind);
            for (j, s) in generators.iter().enumerate() {
                let w = table[v * k + j] as usize;
                let key = g.mul_unchecked(s).key();
                if keys[w] == UNSET {
                    keys[w] = key;
                    queue.push(w as u32);
                } else if keys[w] != key {
                    return Err(invalid("multiplication table is inconsistent with the generators"));
                }
            }
        }
        if queue.len() != n {
            return Err(Error::NotGenerating {
                reached: queue.len() as u64,
                expected: spec.order,
            });
        }
        let index = keys.iter().enumerate().map(|(i, &key)| (key, i as u32)).collect();
        Ok(Self { spec, keys, index })
    }
}

/// Close the identity under right multiplication by `generators`.
///
/// Indices follow discovery order, so index 0 is the identity. Returns the
/// table together with the flat right-multiplication table: entry
/// `v * k + j` is the index of `g_v * s_j`. Fails unless the orbit is the
/// whole group.
pub fn enumerate_group(spec: &GroupSpec, generators: &[ProjMatrix]) -> Result<(VertexTable, Vec<u32>)> {
    if spec.order > MAX_ORDER {
        return Err(Error::Resource(format!(
            "group of order {} exceeds the enumeration budget {MAX_ORDER}",
            spec.order
        )));
    }
    for s in generators {
        if s.modulus() != spec.modulus || s.kind() != spec.kind {
            return Err(invalid(format!(
                "generator {s} does not belong to {} mod {}",
                spec.kind, spec.modulus
            )));
        }
    }
    let n = spec.order as usize;
    let k = generators.len();
    let mut keys = Vec::with_capacity(n);
    let mut index: FxHashMap<u64, u32> = FxHashMap::with_capacity_and_hasher(n, Default::default());
    let mut table = Vec::with_capacity(n * k);

    let id = ProjMatrix::identity(spec.modulus, spec.kind)?;
    keys.push(id.key());
    index.insert(id.key(), 0);
    let mut head = 0;
    while head < keys.len() {
        let g = ProjMatrix::from_key(keys[head], spec.modulus, spec.kind);
        head += 1;
        for s in generators {
            let key = g.mul_unchecked(s).key();
            let next = keys.len() as u32;
            let w = *index.entry(key).or_insert(next);
            if w == next {
                if keys.len() == n {
                    return Err(invalid("orbit exceeds the group order"));
                }
                keys.push(key);
            }
            table.push(w);
        }
    }
    if keys.len() != n {
        return Err(Error::NotGenerating {
            reached: keys.len() as u64,
            expected: spec.order,
        });
    }
    Ok((
        VertexTable {
            spec: *spec,
            keys,
            index,
        },
        table,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::enumerate_generator_solutions;

    fn psl(raw: [i64; 4], m: u64) -> ProjMatrix {
        ProjMatrix::canonical(raw, m, GroupKind::Psl).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(psl([26, 0, 0, 19], 29).entries(), [3, 0, 0, 10]);
        assert_eq!(psl([0, 1, 28, 0], 29).entries(), [0, 1, 28, 0]);
        assert!(psl([1, 0, 0, 1], 29).is_identity());
        let id = ProjMatrix::canonical([1, 0, 0, 1], 13, GroupKind::Pgl).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn canonical_rejects_bad_input() {
        assert!(ProjMatrix::canonical([1, 1, 1, 1], 13, GroupKind::Pgl).is_err());
        assert!(ProjMatrix::canonical([2, 0, 0, 2], 29, GroupKind::Psl).is_err());
        assert!(ProjMatrix::canonical([1, 0, 0, 1], 15, GroupKind::Pgl).is_err());
        assert!(ProjMatrix::canonical([1, 0, 0, 1], 28, GroupKind::Psl).is_err());
    }

    #[test]
    fn mul_examples() {
        let a = psl([10, 0, 0, 3], 29);
        let b = psl([3, 0, 0, 10], 29);
        assert!(a.mul(&b).unwrap().is_identity());
        let w = psl([0, 1, -1, 0], 29);
        assert!(w.mul(&w).unwrap().is_identity());
        let g = psl([8, 16, 13, 8], 29);
        assert!(g.mul(&g.inverse()).unwrap().is_identity());
        let other = psl([1, 0, 0, 1], 13);
        assert!(a.mul(&other).is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(29, GroupKind::Psl).unwrap(), 12180);
        assert_eq!(group_order(13, GroupKind::Pgl).unwrap(), 2184);
        assert_eq!(group_order(1, GroupKind::Psl).unwrap(), 1);
        assert_eq!(group_order(65, GroupKind::Psl).unwrap(), 60 * 2184);
        assert_eq!(group_order(25, GroupKind::Psl).unwrap(), 25 * 25 * 25 * 24 / 25 / 2);
        assert!(group_order(30, GroupKind::Psl).is_err());
        assert!(group_order(15, GroupKind::Pgl).is_err());
    }

    #[test]
    fn paper_generator_set_for_5_29() {
        let gens: Vec<ProjMatrix> = enumerate_generator_solutions(5)
            .unwrap()
            .iter()
            .map(|s| lift_generator(s, 29).unwrap())
            .collect();
        let mut got: Vec<[u32; 4]> = gens.iter().map(|g| g.entries()).collect();
        let mut want: Vec<[u32; 4]> = [
            [10, 0, 0, 3],
            [3, 0, 0, 10],
            [8, 16, 13, 8],
            [21, 16, 13, 21],
            [21, 11, 11, 21],
            [8, 11, 11, 8],
        ]
        .iter()
        .map(|&e| psl(e.map(i64::from), 29).entries())
        .collect();
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want);
        for g in &gens {
            assert_eq!(g.det(), 1);
        }
    }

    #[test]
    fn conjugate_lifts_to_inverse() {
        for s in enumerate_generator_solutions(5).unwrap() {
            let g = lift_generator(&s, 29).unwrap();
            let h = lift_generator(&s.conjugate(), 29).unwrap();
            assert!(g.mul(&h).unwrap().is_identity());
            assert_eq!(h, g.inverse());
        }
    }

    #[test]
    fn embedding_kinds() {
        assert_eq!(LpsEmbedding::new(5, 29).unwrap().kind, GroupKind::Psl);
        assert_eq!(LpsEmbedding::new(5, 13).unwrap().kind, GroupKind::Pgl);
        let err = LpsEmbedding::new(5, 21).unwrap_err().to_string();
        assert!(err.contains("-1 is not a quadratic residue mod 21"), "{err}");
        assert!(LpsEmbedding::new(5, 25).is_err());
    }

    #[test]
    fn enumerate_small_groups() {
        for (p, m) in [(5u64, 29u64), (5, 13), (13, 17)] {
            let emb = LpsEmbedding::new(p, m).unwrap();
            let gens: Vec<ProjMatrix> = enumerate_generator_solutions(p)
                .unwrap()
                .iter()
                .map(|s| emb.embed(s).unwrap())
                .collect();
            let spec = GroupSpec::new(m, emb.kind).unwrap();
            let (table, mult) = enumerate_group(&spec, &gens).unwrap();
            assert_eq!(table.len() as u64, spec.order);
            assert!(table.matrix(0).is_identity());
            let rebuilt = VertexTable::from_multiplication_table(spec, &gens, &mult).unwrap();
            for v in (0..table.len() as u32).step_by(97) {
                assert_eq!(rebuilt.matrix(v), table.matrix(v));
                assert_eq!(table.index_of(&table.matrix(v)), Some(v));
            }
        }
    }

    #[test]
    fn non_generating_set_is_reported() {
        let spec = GroupSpec::new(29, GroupKind::Psl).unwrap();
        let d = psl([10, 0, 0, 3], 29);
        let err = enumerate_group(&spec, &[d, d.inverse()]).unwrap_err();
        assert!(matches!(err, Error::NotGenerating { .. }));
    }
}
