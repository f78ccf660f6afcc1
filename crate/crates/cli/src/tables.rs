use std::collections::BTreeMap;
use std::io::Write;

use rama_core::cayley::{build_lps, build_random_cayley};
use rama_core::metrics::bfs_levels;

/// `x` truncated to two decimals, the way the published ratio columns are printed.
pub fn truncate2(x: f64) -> String {
    format!("{:.2}", (x * 100.0 + 1e-9).floor() / 100.0)
}

pub fn log_base(b: f64, x: f64) -> f64 {
    x.ln() / b.ln()
}

pub struct Table1Row {
    pub r: usize,
    pub count: u64,
}

pub fn table1(p: u64, q: u64) -> Result<Vec<Table1Row>, String> {
    let g = build_lps(p, q).map_err(|e| e.to_string())?;
    let levels = bfs_levels(&g, 0);
    Ok(levels
        .counts
        .iter()
        .enumerate()
        .map(|(r, &count)| Table1Row { r, count })
        .collect())
}

#[derive(serde::Serialize)]
pub struct Table2Row {
    pub q: u64,
    pub n: usize,
    pub diameter: u32,
    pub ratio: f64,
}

pub fn table2_row(p: u64, q: u64) -> Result<Table2Row, String> {
    let g = build_lps(p, q).map_err(|e| format!("q={q}: {e}"))?;
    let diameter = bfs_levels(&g, 0).eccentricity;
    Ok(Table2Row {
        q,
        n: g.n(),
        diameter,
        ratio: diameter as f64 / log_base(p as f64, g.n() as f64),
    })
}

#[derive(serde::Serialize)]
pub struct Table3Row {
    pub q: u64,
    pub n: usize,
    pub seeds: Vec<u64>,
    pub diameters: Vec<u32>,
    /// Mean of `diameter / log_5 n` over the seeds.
    pub ratio: f64,
}

impl Table3Row {
    /// Diameter multiset as `8x6 9x2`.
    pub fn multiset(&self) -> String {
        let mut counts = BTreeMap::new();
        for &d in &self.diameters {
            *counts.entry(d).or_insert(0) += 1;
        }
        counts
            .iter()
            .map(|(d, c)| format!("{d}x{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn table3_row(q: u64, seeds: &[u64]) -> Result<Table3Row, String> {
    let mut diameters = Vec::with_capacity(seeds.len());
    let mut n = 0;
    for &seed in seeds {
        let g = build_random_cayley(q, seed).map_err(|e| format!("q={q} seed={seed}: {e}"))?;
        let levels = bfs_levels(&g, 0);
        if levels.reached() as usize != g.n() {
            return Err(format!("q={q} seed={seed}: graph is disconnected"));
        }
        n = g.n();
        diameters.push(levels.eccentricity);
    }
    let log_n = log_base(5.0, n as f64);
    let ratio = diameters.iter().map(|&d| d as f64 / log_n).sum::<f64>() / diameters.len().max(1) as f64;
    Ok(Table3Row {
        q,
        n,
        seeds: seeds.to_vec(),
        diameters,
        ratio,
    })
}

pub fn csv_writer(out: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}
