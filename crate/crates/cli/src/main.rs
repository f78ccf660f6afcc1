//! `rama`: build LPS and random Cayley graphs, reproduce the tables, and run the checks.
//!
//! Exit codes: 0 success or check passed, 2 check failed, 1 error.

mod matrix_arg;
mod record;
mod tables;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rama_core::bounds::{verify_thm1, verify_thm1_with};
use rama_core::cayley::{build_lps, build_random_cayley, CayleyGraph};
use rama_core::metrics::{bfs_levels, distance, girth, is_bipartite};
use rama_core::spectral::{extreme_nontrivial_eigenvalue, sphere_variance, unreachable_count};
use rama_core::Error;
use serde_json::json;

use record::ExperimentRecord;

const DEFAULT_TABLE2_Q: &str = "29,41,61,89,101,109,149,181,229";

#[derive(Parser)]
#[command(
    name = "rama",
    version,
    about = "LPS Ramanujan graphs and random Cayley graphs over PSL2/PGL2(Z/mZ)"
)]
struct Cli {
    /// Worker threads for BFS and spectral loops (overrides RAMA_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write it in the binary format.
    Build(BuildArgs),
    /// Level structure of X_{p,q} from the identity, as CSV.
    Table1 {
        #[arg(short, default_value_t = 5)]
        p: u64,
        #[arg(short, default_value_t = 29)]
        q: u64,
        #[command(flatten)]
        out: TableOut,
    },
    /// Diameters of X_{p,q}, as CSV.
    Table2 {
        #[arg(short, default_value_t = 5)]
        p: u64,
        /// Comma-separated moduli.
        #[arg(short, long, default_value = DEFAULT_TABLE2_Q, value_delimiter = ',')]
        q: Vec<u64>,
        #[command(flatten)]
        out: TableOut,
    },
    /// Diameters of random 6-regular Cayley graphs of PSL2(Z/qZ), as CSV.
    Table3 {
        /// Comma-separated primes.
        #[arg(short, long, default_value = DEFAULT_TABLE2_Q, value_delimiter = ',')]
        q: Vec<u64>,
        /// Comma-separated seeds.
        #[arg(long, default_value = "1,2,3,4,5,6,7,8", value_delimiter = ',')]
        seeds: Vec<u64>,
        #[command(flatten)]
        out: TableOut,
    },
    /// Witness distances and the diameter lower bound for an LPS graph.
    Witness {
        graph: PathBuf,
        /// Prime-power divisor of the modulus used for I' (default: the largest).
        #[arg(short, long)]
        q: Option<u64>,
    },
    /// Certify the extreme nontrivial eigenvalue.
    Spectrum {
        graph: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Unreachable-set and variance bounds for the sphere operator S(R) at a root.
    Thm2 {
        graph: PathBuf,
        /// Root vertex: index, a,b,c,d, I, W or Iprime:q.
        #[arg(short, long, default_value = "0")]
        x: String,
        #[arg(short = 'R', long = "R")]
        radius: u32,
    },
    /// Girth.
    Girth { graph: PathBuf },
    /// BFS level counts from a root.
    Levels {
        graph: PathBuf,
        #[arg(long, default_value = "0")]
        root: String,
    },
    /// Graph distance between two vertices.
    Distance {
        graph: PathBuf,
        #[arg(short, long)]
        u: String,
        #[arg(short, long)]
        v: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Family {
    /// LPS graph X_{p,m}.
    #[arg(long)]
    lps: bool,
    /// Random Cayley graph of PSL2(Z/qZ) with three generators and their inverses.
    #[arg(long)]
    random: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    family: Family,
    #[arg(short, required_if_eq("lps", "true"))]
    p: Option<u64>,
    #[arg(short, required_if_eq("lps", "true"))]
    m: Option<u64>,
    #[arg(short, required_if_eq("random", "true"))]
    q: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (default: x<p>-<m>.lpsg or z<q>-s<seed>.lpsg).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableOut {
    /// Write CSV here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Print one JSON record per row, with unrounded ratios, instead of CSV.
    #[arg(long)]
    json: bool,
}

enum Outcome {
    Pass,
    CheckFailed,
}

type CmdResult = Result<Outcome, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), String> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var("RAMA_THREADS") {
            Ok(v) => Some(
                v.parse()
                    .map_err(|_| format!("RAMA_THREADS={v:?} is not a thread count"))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<(CayleyGraph, u64), String> {
    let g = CayleyGraph::load(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let checksum = g.checksum();
    Ok((g, checksum))
}

fn check(passed: bool) -> Outcome {
    if passed {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    }
}

fn run(command: Command) -> CmdResult {
    let started = Instant::now();
    match command {
        Command::Build(args) => cmd_build(args),
        Command::Table1 { p, q, out } => cmd_table1(p, q, out, started),
        Command::Table2 { p, q, out } => cmd_table2(p, &q, out),
        Command::Table3 { q, seeds, out } => cmd_table3(&q, &seeds, out),
        Command::Witness { graph, q } => {
            let (g, sum) = load(&graph)?;
            let report = match q {
                Some(q) => verify_thm1_with(&g, q),
                None => verify_thm1(&g),
            }
            .map_err(|e| e.to_string())?;
            let passed = report.satisfied && report.parity_consistent;
            ExperimentRecord::new(
                "witness",
                json!({ "graph": graph, "q": report.q }),
                &report,
                started,
                Some(sum),
            )
            .print();
            Ok(check(passed))
        }
        Command::Spectrum { graph, tol } => {
            let (g, sum) = load(&graph)?;
            let s = extreme_nontrivial_eigenvalue(&g, tol).map_err(|e| e.to_string())?;
            ExperimentRecord::new("spectrum", json!({ "graph": graph, "tol": tol }), s, started, Some(sum)).print();
            Ok(check(s.ramanujan))
        }
        Command::Thm2 { graph, x, radius } => cmd_thm2(&graph, &x, radius, started),
        Command::Girth { graph } => {
            let (g, sum) = load(&graph)?;
            let gi = girth(&g);
            ExperimentRecord::new(
                "girth",
                json!({ "graph": graph }),
                json!({ "girth": gi }),
                started,
                Some(sum),
            )
            .print();
            Ok(Outcome::Pass)
        }
        Command::Levels { graph, root } => {
            let (g, sum) = load(&graph)?;
            let root = matrix_arg::parse_vertex(&g, &root)?;
            let levels = bfs_levels(&g, root);
            ExperimentRecord::new(
                "levels",
                json!({ "graph": graph, "root": root }),
                levels,
                started,
                Some(sum),
            )
            .print();
            Ok(Outcome::Pass)
        }
        Command::Distance { graph, u, v } => {
            let (g, sum) = load(&graph)?;
            let (a, b) = (matrix_arg::parse_vertex(&g, &u)?, matrix_arg::parse_vertex(&g, &v)?);
            let d = distance(&g, a, b);
            let params = json!({ "graph": graph, "u": u, "v": v, "u_index": a, "v_index": b });
            ExperimentRecord::new("distance", params, json!({ "distance": d }), started, Some(sum)).print();
            Ok(Outcome::Pass)
        }
    }
}

fn cmd_build(args: BuildArgs) -> CmdResult {
    let (g, default_name) = if args.family.lps {
        let (p, m) = (args.p.expect("clap requires -p"), args.m.expect("clap requires -m"));
        (build_lps(p, m), format!("x{p}-{m}.lpsg"))
    } else {
        let q = args.q.expect("clap requires -q");
        (build_random_cayley(q, args.seed), format!("z{q}-s{}.lpsg", args.seed))
    };
    let g = g.map_err(|e: Error| e.to_string())?;
    let path = args.out.unwrap_or_else(|| PathBuf::from(default_name));
    g.save(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    println!(
        "n={} k={} kind={} bipartite={}",
        g.n(),
        g.k(),
        g.kind(),
        is_bipartite(&g)
    );
    eprintln!("wrote {} (checksum {:016x})", path.display(), g.checksum());
    Ok(Outcome::Pass)
}

fn table_sink(out: &TableOut) -> Result<Box<dyn Write>, String> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| format!("{}: {e}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_table1(p: u64, q: u64, out: TableOut, started: Instant) -> CmdResult {
    let rows = tables::table1(p, q)?;
    if out.json {
        let counts: Vec<u64> = rows.iter().map(|r| r.count).collect();
        ExperimentRecord::new(
            "table1",
            json!({ "p": p, "q": q }),
            json!({ "counts": counts }),
            started,
            None,
        )
        .print();
        return Ok(Outcome::Pass);
    }
    let mut w = tables::csv_writer(table_sink(&out)?);
    let io = |e: csv::Error| e.to_string();
    w.write_record(["r", "count"]).map_err(io)?;
    for row in rows {
        w.write_record([row.r.to_string(), row.count.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| e.to_string())?;
    Ok(Outcome::Pass)
}

fn cmd_table2(p: u64, qs: &[u64], out: TableOut) -> CmdResult {
    let mut w = (!out.json)
        .then(|| table_sink(&out).map(tables::csv_writer))
        .transpose()?;
    let io = |e: csv::Error| e.to_string();
    if let Some(w) = w.as_mut() {
        w.write_record(["q", "n", "diameter", "ratio"]).map_err(io)?;
    }
    let mut failed = false;
    for &q in qs {
        let row_start = Instant::now();
        match tables::table2_row(p, q) {
            Ok(row) => match w.as_mut() {
                Some(w) => {
                    let fields = [
                        row.q.to_string(),
                        row.n.to_string(),
                        row.diameter.to_string(),
                        tables::truncate2(row.ratio),
                    ];
                    w.write_record(fields).map_err(io)?;
                    w.flush().map_err(|e| e.to_string())?;
                }
                None => ExperimentRecord::new("table2", json!({ "p": p, "q": q }), &row, row_start, None).print(),
            },
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    if failed {
        return Err("some rows failed".into());
    }
    Ok(Outcome::Pass)
}

fn cmd_table3(qs: &[u64], seeds: &[u64], out: TableOut) -> CmdResult {
    let mut w = (!out.json)
        .then(|| table_sink(&out).map(tables::csv_writer))
        .transpose()?;
    let io = |e: csv::Error| e.to_string();
    if let Some(w) = w.as_mut() {
        w.write_record(["q", "n", "diameters", "ratio"]).map_err(io)?;
    }
    let mut failed = false;
    for &q in qs {
        let row_start = Instant::now();
        match tables::table3_row(q, seeds) {
            Ok(row) => match w.as_mut() {
                Some(w) => {
                    let fields = [
                        row.q.to_string(),
                        row.n.to_string(),
                        row.multiset(),
                        tables::truncate2(row.ratio),
                    ];
                    w.write_record(fields).map_err(io)?;
                    w.flush().map_err(|e| e.to_string())?;
                }
                None => {
                    ExperimentRecord::new("table3", json!({ "q": q, "seeds": seeds }), &row, row_start, None).print()
                }
            },
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    if failed {
        return Err("some rows failed".into());
    }
    Ok(Outcome::Pass)
}

fn cmd_thm2(graph: &Path, x: &str, radius: u32, started: Instant) -> CmdResult {
    let (g, sum) = load(graph)?;
    let root = matrix_arg::parse_vertex(&g, x)?;
    let report = unreachable_count(&g, root, radius).map_err(|e| e.to_string())?;
    let variance = if radius >= 1 && !is_bipartite(&g) {
        Some(sphere_variance(&g, root, radius).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let holds = report.raw_bound_holds
        && report.theorem_bound_holds.unwrap_or(true)
        && variance.as_ref().is_none_or(|v| v.holds);
    let result = json!({
        "unreachable": report.unreachable,
        "bound": (report.raw_rhs_ln - (radius as f64) * ((g.k() - 1) as f64).ln()).exp(),
        "holds": holds,
        "report": report,
        "variance": variance,
    });
    let params = json!({ "graph": graph, "x": x, "root": root, "R": radius });
    ExperimentRecord::new("thm2", params, result, started, Some(sum)).print();
    Ok(check(holds))
}
