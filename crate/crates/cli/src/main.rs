//! Command-line front end: generate/ingest graphs, encode/decode chunk
//! images, run and time the matching variants, verify against the oracle,
//! and tabulate memory traffic.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mwm_bench::{
    run_on, sweep, traffic_table, verify, write_csv, Algorithm, InputSpec, RunSpec, SweepAxis,
};
use substream_mwm::codec::{decode, encode, encode_output, ChunkImage, ChunkKind};
use substream_mwm::gen::{GenKind, GenSpec};
use substream_mwm::graph::ingest_edge_list;
use substream_mwm::Graph;

#[derive(Parser)]
#[command(
    name = "mwm-bench",
    about = "Substream-decomposed streaming maximum-weighted-matching benchmark harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum KindArg {
    /// Power-law graph from recursive quadrant sampling.
    Kronecker,
    /// Uniformly random vertex pairs.
    Uniform,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> GenKind {
        match k {
            KindArg::Kronecker => GenKind::Kronecker,
            KindArg::Uniform => GenKind::UniformRandom,
        }
    }
}

/// Graph source: an edge-list file or generator parameters.
#[derive(Args, Clone, Debug)]
struct InputArgs {
    /// Edge-list file: one "u v w" triple per line.
    #[arg(long, conflicts_with_all = ["kind", "scale"])]
    input: Option<PathBuf>,
    /// Generator family (requires --scale).
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Generator size: n = 2^scale vertices.
    #[arg(long)]
    scale: Option<u32>,
    /// Generator average degree (m ≈ degree·n).
    #[arg(long, default_value_t = 16.0)]
    degree: f64,
}

impl InputArgs {
    fn to_spec(&self, epsilon: f64, substreams: usize, seed: u64) -> Result<InputSpec> {
        match (&self.input, self.kind, self.scale) {
            (Some(path), None, None) => Ok(InputSpec::File(path.clone())),
            (None, Some(kind), Some(scale)) => Ok(InputSpec::Generated(GenSpec {
                kind: kind.into(),
                scale,
                avg_degree: self.degree,
                epsilon,
                substreams,
                seed,
            })),
            (None, _, _) => bail!("provide --input FILE, or --kind and --scale for a generated graph"),
            (Some(_), _, _) => bail!("--input conflicts with generator flags"),
        }
    }
}

/// Algorithm parameters shared by run/sweep/verify.
#[derive(Args, Clone, Debug)]
struct EngineArgs {
    /// Substream weight-ladder step: thresholds are (1+ε)^i.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Substream count L.
    #[arg(long, default_value_t = 8)]
    substreams: usize,
    /// Epoch block size K (sc-opt).
    #[arg(long, default_value_t = 1)]
    block: usize,
    /// Worker threads (cs-par).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Timed repetitions per configuration.
    #[arg(long, default_value_t = 10)]
    reps: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        scale: u32,
        #[arg(long, default_value_t = 16.0)]
        degree: f64,
        /// Weight-range parameter: weights span [1, floor((1+ε)^(L−1))+1].
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 8)]
        substreams: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse an edge list, normalize it, and report what was dropped.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        /// Expected vertex count (inferred from the maximum id if omitted).
        #[arg(long)]
        vertices: Option<usize>,
        /// Re-emit the normalized edge list here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a graph into pointer and edge chunk images.
    Encode {
        #[arg(long)]
        input: PathBuf,
        /// Output base path: writes <base>.ptr and <base>.edg.
        #[arg(long)]
        out_base: PathBuf,
    },
    /// Decode chunk images back into an edge list.
    Decode {
        /// Input base path: reads <base>.ptr and <base>.edg.
        #[arg(long)]
        in_base: PathBuf,
        /// Vertex count (the images carry no header).
        #[arg(long)]
        vertices: usize,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time an algorithm and emit benchmark CSV.
    Run {
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Also compute matching weight / oracle weight (small graphs).
        #[arg(long)]
        ratio: bool,
        /// Attach blocked-engine traffic counters (sc-opt only).
        #[arg(long)]
        traffic: bool,
        /// Write per-substream matchings to <base>.out (substream variants).
        #[arg(long)]
        matchings_out: Option<PathBuf>,
        /// CSV output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one axis of configurations and emit concatenated CSV groups.
    Sweep {
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Dimension to vary.
        #[arg(long, value_enum)]
        axis: SweepAxis,
        /// Axis values, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<usize>,
        /// On the L axis, pick ε per the regime table instead of --epsilon.
        #[arg(long)]
        auto_epsilon: bool,
        /// CSV output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm and the exhaustive oracle; fail if the bound breaks.
    Verify {
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Tabulate chunk-level memory traffic across epoch block sizes.
    Traffic {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 8)]
        substreams: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Block sizes to simulate, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        /// Charge every edge its own column-bit read (no reuse within an epoch).
        #[arg(long)]
        no_share: bool,
        /// On-chip bit budget; block·substreams must fit.
        #[arg(long, default_value_t = u64::MAX)]
        bram_bits: u64,
        /// CSV output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_text(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_records<T: serde::Serialize>(path: &Option<PathBuf>, records: &[T]) -> Result<()> {
    match path {
        Some(p) => {
            let file = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            write_csv(records, file)
        }
        None => write_csv(records, std::io::stdout().lock()),
    }
}

fn load_graph(path: &Path, vertices: Option<usize>) -> Result<(Graph, usize, usize)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let summary = ingest_edge_list(&text, vertices)?;
    Ok((summary.graph, summary.self_loops_dropped, summary.duplicates_dropped))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen { kind, scale, degree, epsilon, substreams, seed, out } => {
            let spec = GenSpec {
                kind: kind.into(),
                scale,
                avg_degree: degree,
                epsilon,
                substreams,
                seed,
            };
            let g = substream_mwm::gen::generate(&spec)?;
            eprintln!("generated n={} m={}", g.n(), g.m());
            write_text(&out, &g.to_edge_list())
        }
        Command::Ingest { input, vertices, out } => {
            let (g, self_loops, duplicates) = load_graph(&input, vertices)?;
            println!(
                "vertices={} edges={} self_loops_dropped={} duplicates_dropped={}",
                g.n(),
                g.m(),
                self_loops,
                duplicates
            );
            if out.is_some() {
                write_text(&out, &g.to_edge_list())?;
            }
            Ok(())
        }
        Command::Encode { input, out_base } => {
            let (g, _, _) = load_graph(&input, None)?;
            let (ptr, edg) = encode(&g)?;
            let ptr_path = out_base.with_extension("ptr");
            let edg_path = out_base.with_extension("edg");
            fs::write(&ptr_path, ptr.to_bytes())
                .with_context(|| format!("writing {}", ptr_path.display()))?;
            fs::write(&edg_path, edg.to_bytes())
                .with_context(|| format!("writing {}", edg_path.display()))?;
            println!(
                "wrote {} ({} chunks) and {} ({} chunks) for n={} m={}",
                ptr_path.display(),
                ptr.chunks.len(),
                edg_path.display(),
                edg.chunks.len(),
                g.n(),
                g.m()
            );
            Ok(())
        }
        Command::Decode { in_base, vertices, out } => {
            let ptr_path = in_base.with_extension("ptr");
            let edg_path = in_base.with_extension("edg");
            let ptr_bytes =
                fs::read(&ptr_path).with_context(|| format!("reading {}", ptr_path.display()))?;
            let edg_bytes =
                fs::read(&edg_path).with_context(|| format!("reading {}", edg_path.display()))?;
            let ptr = ChunkImage::from_bytes(ChunkKind::Pointer, &ptr_bytes)?;
            let edg = ChunkImage::from_bytes(ChunkKind::GraphData, &edg_bytes)?;
            let g = decode(&ptr, &edg, vertices)?;
            eprintln!("decoded n={} m={}", g.n(), g.m());
            write_text(&out, &g.to_edge_list())
        }
        Command::Run { algorithm, input, engine, ratio, traffic, matchings_out, out } => {
            let spec = RunSpec {
                algorithm,
                input: input.to_spec(engine.epsilon, engine.substreams, engine.seed)?,
                epsilon: engine.epsilon,
                substreams: engine.substreams,
                block: engine.block,
                workers: engine.workers,
                seed: engine.seed,
                repetitions: engine.reps,
                with_ratio: ratio,
                with_traffic: traffic,
            };
            let g = mwm_bench::load_input(&spec.input)?;
            let records = run_on(&g, &spec)?;
            if let Some(base) = matchings_out {
                if !algorithm.is_substream_variant() {
                    bail!("--matchings-out applies to substream variants only");
                }
                let exec = mwm_bench::execute(&g, &spec)?;
                let ms = exec.matchings.expect("substream variants produce matchings");
                let image = encode_output(&ms)?;
                let out_path = base.with_extension("out");
                fs::write(&out_path, image.to_bytes())
                    .with_context(|| format!("writing {}", out_path.display()))?;
                eprintln!("wrote {} ({} chunks)", out_path.display(), image.chunks.len());
            }
            write_records(&out, &records)
        }
        Command::Sweep { algorithm, input, engine, axis, values, auto_epsilon: auto_eps, out } => {
            let base = RunSpec {
                algorithm,
                input: input.to_spec(engine.epsilon, engine.substreams, engine.seed)?,
                epsilon: engine.epsilon,
                substreams: engine.substreams,
                block: engine.block,
                workers: engine.workers,
                seed: engine.seed,
                repetitions: engine.reps,
                with_ratio: false,
                with_traffic: false,
            };
            let records = sweep(axis, &values, &base, auto_eps)?;
            write_records(&out, &records)
        }
        Command::Verify { algorithm, input, engine } => {
            let spec = RunSpec {
                algorithm,
                input: input.to_spec(engine.epsilon, engine.substreams, engine.seed)?,
                epsilon: engine.epsilon,
                substreams: engine.substreams,
                block: engine.block,
                workers: engine.workers,
                seed: engine.seed,
                repetitions: 1,
                with_ratio: false,
                with_traffic: false,
            };
            let report = verify(&spec)?;
            println!(
                "algorithm={} weight={} size={} oracle_weight={} oracle_size={} ratio={:.6} bound=\"{}\" result={}",
                report.algorithm,
                report.matching_weight,
                report.matching_size,
                report.oracle_weight,
                report.oracle_size,
                report.ratio,
                report.bound_description,
                if report.passed { "PASS" } else { "FAIL" }
            );
            if !report.passed {
                bail!("verification failed: ratio {} violates {}", report.ratio, report.bound_description);
            }
            Ok(())
        }
        Command::Traffic { input, epsilon, substreams, seed, blocks, no_share, bram_bits, out } => {
            let spec = input.to_spec(epsilon, substreams, seed)?;
            let g = mwm_bench::load_input(&spec)?;
            let rows = traffic_table(&g, epsilon, substreams, &blocks, !no_share, bram_bits)?;
            write_records(&out, &rows)
        }
    }
}
