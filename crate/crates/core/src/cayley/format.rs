//! Binary graph file, little-endian throughout:
//!
//! | offset | size   | field                                            |
//! |--------|--------|--------------------------------------------------|
//! | 0      | 4      | magic `LPSG`                                     |
//! | 4      | 2      | format version (u16)                             |
//! | 6      | 1      | kind: bit 0 set = PGL, bit 1 set = random        |
//! | 7      | 1      | reserved, 0                                      |
//! | 8      | 8      | p (u64), 0 for random graphs                     |
//! | 16     | 8      | modulus m or q (u64)                             |
//! | 24     | 8      | seed (u64), 0 for LPS graphs                     |
//! | 32     | 8      | n (u64)                                          |
//! | 40     | 2      | k (u16)                                          |
//! | 42     | 2      | reserved, 0                                      |
//! | 44     | 16 k   | generators, four u32 entries each, row-major     |
//! | ..     | 4 n k  | adjacency rows, u32                              |
//! | end-8  | 8      | XXH64 (seed 0) of every preceding byte           |

use std::fs::File;
use std::hash::Hasher;
use std::io::{BufWriter, Write};
use std::path::Path;

use twox_hash::XxHash64;

use super::{CayleyGraph, Provenance};
use crate::error::{Error, Result};
use crate::pgl::{group_order, GroupKind, ProjMatrix};

pub const MAGIC: [u8; 4] = *b"LPSG";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 44;

const KIND_PGL: u8 = 1;
const KIND_RANDOM: u8 = 2;

pub(super) fn encoded_len(g: &CayleyGraph) -> usize {
    HEADER_LEN + 16 * g.k + 4 * g.adjacency.len() + 8
}

struct HashingWriter<'a, W: Write> {
    inner: &'a mut W,
    hasher: XxHash64,
}

impl<W: Write> HashingWriter<'_, W> {
    fn put(&mut self, bytes: &[u8]) -> std::io::Result<()> {
        self.hasher.write(bytes);
        self.inner.write_all(bytes)
    }
}

/// Write the encoding of `g` and return its checksum.
pub(super) fn encode<W: Write>(g: &CayleyGraph, out: &mut W) -> std::io::Result<u64> {
    let mut w = HashingWriter {
        inner: out,
        hasher: XxHash64::with_seed(0),
    };
    let (p, m, seed, random) = match g.provenance {
        Provenance::Lps { p, m } => (p, m, 0, false),
        Provenance::Random { q, seed } => (0, q, seed, true),
    };
    let mut kind = 0u8;
    if g.kind == GroupKind::Pgl {
        kind |= KIND_PGL;
    }
    if random {
        kind |= KIND_RANDOM;
    }
    let mut header = Vec::with_capacity(HEADER_LEN + 16 * g.k);
    header.extend_from_slice(&MAGIC);
    header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    header.extend_from_slice(&[kind, 0]);
    for v in [p, m, seed, g.n as u64] {
        header.extend_from_slice(&v.to_le_bytes());
    }
    header.extend_from_slice(&(g.k as u16).to_le_bytes());
    header.extend_from_slice(&[0, 0]);
    for s in &g.generators {
        for e in s.entries() {
            header.extend_from_slice(&e.to_le_bytes());
        }
    }
    w.put(&header)?;

    let mut buf = Vec::with_capacity(1 << 16);
    for chunk in g.adjacency.chunks(1 << 14) {
        buf.clear();
        for v in chunk {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.put(&buf)?;
    }
    let sum = w.hasher.finish();
    w.inner.write_all(&sum.to_le_bytes())?;
    Ok(sum)
}

pub(super) fn save(g: &CayleyGraph, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    encode(g, &mut out)?;
    out.flush()?;
    Ok(())
}

pub(super) fn load(path: &Path) -> Result<CayleyGraph> {
    decode(&std::fs::read(path)?)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes(b[at..at + 2].try_into().unwrap())
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

pub(super) fn decode(bytes: &[u8]) -> Result<CayleyGraph> {
    if bytes.len() < 8 {
        return Err(bad("file shorter than its checksum"));
    }
    // Verify integrity first, so truncation and corruption surface as checksum errors.
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = XxHash64::oneshot(0, body);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    if body.len() < HEADER_LEN || body[..4] != MAGIC {
        return Err(bad("missing LPSG magic"));
    }
    let version = u16_at(body, 4);
    if version != FORMAT_VERSION {
        return Err(bad(format!("format version {version}, expected {FORMAT_VERSION}")));
    }
    let flags = body[6];
    if flags & !(KIND_PGL | KIND_RANDOM) != 0 {
        return Err(bad(format!("unknown kind flags {flags:#04x}")));
    }
    let kind = if flags & KIND_PGL != 0 {
        GroupKind::Pgl
    } else {
        GroupKind::Psl
    };
    let (p, m, seed, n) = (u64_at(body, 8), u64_at(body, 16), u64_at(body, 24), u64_at(body, 32));
    let k = u16_at(body, 40) as usize;
    let provenance = if flags & KIND_RANDOM != 0 {
        Provenance::Random { q: m, seed }
    } else {
        Provenance::Lps { p, m }
    };
    let expected_len = HEADER_LEN as u64 + 16 * k as u64 + 4 * n * k as u64;
    if body.len() as u64 != expected_len {
        return Err(bad(format!(
            "body is {} bytes, header implies {expected_len}",
            body.len()
        )));
    }
    if group_order(m, kind)? != n {
        return Err(bad(format!("n = {n} is not the order of {kind}2(Z/{m})")));
    }
    let mut generators = Vec::with_capacity(k);
    for j in 0..k {
        let at = HEADER_LEN + 16 * j;
        let raw: [i64; 4] = std::array::from_fn(|i| u32_at(body, at + 4 * i) as i64);
        let s = ProjMatrix::canonical(raw, m, kind)?;
        if s.entries().map(i64::from) != raw {
            return Err(bad(format!("generator {j} is not in canonical form")));
        }
        generators.push(s);
    }
    let adjacency: Vec<u32> = body[HEADER_LEN + 16 * k..]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if adjacency.iter().any(|&w| w as u64 >= n) {
        return Err(bad("neighbor index out of range"));
    }
    Ok(CayleyGraph {
        n: n as usize,
        k,
        adjacency,
        generators,
        provenance,
        kind,
    })
}
