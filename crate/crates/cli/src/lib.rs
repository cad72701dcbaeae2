//! Benchmark/verification harness around the substream matching engine:
//! load or generate a graph, run one of the algorithm variants repeatedly,
//! and emit CSV records; verify results against the exhaustive oracle.

use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use substream_mwm::baselines::{ghaffari_mwm, greedy_maximal};
use substream_mwm::engine::{
    merge_matchings, process_stream_blocked, process_stream_parallel, process_stream_simple,
    EngineConfig, SubstreamMatchings,
};
use substream_mwm::gen::GenSpec;
use substream_mwm::oracle::{exact_mcm, exact_mwm, OracleLimit};
use substream_mwm::traffic::{simulate_traffic, BitStoreConfig, TrafficReport};
use substream_mwm::{Graph, MatchingResult};

/// Environment variable overriding the exhaustive-search edge cap.
pub const ORACLE_CAP_ENV: &str = "MWM_ORACLE_MAX_EDGES";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    /// Substream matching, one sequential pass (arbitrary edge order).
    CsSeq,
    /// Substream matching, substreams matched independently in parallel.
    CsPar,
    /// Substream matching on the row-major edge stream.
    ScSimple,
    /// Substream matching with epoch blocking (K rows per epoch).
    ScOpt,
    /// Greedy maximal matching (½-approximate cardinality baseline).
    Greedy,
    /// Local-ratio streaming matcher ((2+ε)-approximate weight baseline).
    Ghaffari,
    /// Exhaustive branch-and-bound oracle (small graphs only).
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::CsSeq => "cs-seq",
            Algorithm::CsPar => "cs-par",
            Algorithm::ScSimple => "sc-simple",
            Algorithm::ScOpt => "sc-opt",
            Algorithm::Greedy => "greedy",
            Algorithm::Ghaffari => "ghaffari",
            Algorithm::Exact => "exact",
        }
    }

    pub fn is_substream_variant(self) -> bool {
        matches!(self, Algorithm::CsSeq | Algorithm::CsPar | Algorithm::ScSimple | Algorithm::ScOpt)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where the graph comes from: an edge-list file or a seeded generator.
#[derive(Clone, Debug)]
pub enum InputSpec {
    File(PathBuf),
    Generated(GenSpec),
}

/// One benchmark request.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub input: InputSpec,
    pub epsilon: f64,
    pub substreams: usize,
    pub block: usize,
    pub workers: usize,
    pub seed: u64,
    pub repetitions: usize,
    /// Compute matching weight / oracle weight per record (oracle-sized
    /// inputs only).
    pub with_ratio: bool,
    /// Attach blocked-engine traffic counters (sc-opt only).
    pub with_traffic: bool,
}

impl RunSpec {
    pub fn engine_config(&self) -> Result<EngineConfig> {
        Ok(EngineConfig::new(self.epsilon, self.substreams, self.block, self.workers)?)
    }
}

/// One CSV row of benchmark output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub substreams: usize,
    #[serde(rename = "K")]
    pub block: usize,
    pub epsilon: f64,
    pub workers: usize,
    pub run_index: usize,
    pub elapsed_seconds: f64,
    pub throughput_edges_per_second: f64,
    pub matching_weight: u64,
    pub matching_size: usize,
    pub ratio_vs_oracle: Option<f64>,
    pub vbit_chunk_reads: Option<u64>,
    pub vbit_chunk_writes: Option<u64>,
    pub epoch_barriers: Option<u64>,
    pub reads_per_edge: Option<f64>,
}

/// Reads the oracle cap from the environment, falling back to the default.
pub fn oracle_limit() -> Result<OracleLimit> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(raw) => {
            let cap: usize = raw
                .trim()
                .parse()
                .with_context(|| format!("{ORACLE_CAP_ENV} must be an integer, got {raw:?}"))?;
            Ok(OracleLimit::new(cap))
        }
        Err(_) => Ok(OracleLimit::default()),
    }
}

pub fn load_input(input: &InputSpec) -> Result<Graph> {
    match input {
        InputSpec::File(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let summary = substream_mwm::graph::ingest_edge_list(&text, None)?;
            Ok(summary.graph)
        }
        InputSpec::Generated(spec) => Ok(substream_mwm::gen::generate(spec)?),
    }
}

/// Outcome of one timed execution.
pub struct Execution {
    pub result: MatchingResult,
    pub elapsed_seconds: f64,
    /// Per-substream lists, for variants that produce them.
    pub matchings: Option<SubstreamMatchings>,
}

/// Runs the algorithm once. The clock covers the streaming pass and the
/// merge — not input loading, generation, or encoding.
pub fn execute(g: &Graph, spec: &RunSpec) -> Result<Execution> {
    let n = g.n();
    match spec.algorithm {
        Algorithm::CsSeq | Algorithm::CsPar | Algorithm::ScSimple | Algorithm::ScOpt => {
            let cfg = spec.engine_config()?;
            let stream;
            let start;
            let ms = match spec.algorithm {
                Algorithm::CsSeq | Algorithm::ScSimple => {
                    stream = g.edge_vec();
                    start = Instant::now();
                    process_stream_simple(&stream, n, &cfg)?
                }
                Algorithm::CsPar => {
                    stream = g.edge_vec();
                    start = Instant::now();
                    process_stream_parallel(&stream, n, &cfg)?
                }
                Algorithm::ScOpt => {
                    start = Instant::now();
                    process_stream_blocked(g, &cfg)?
                }
                _ => unreachable!(),
            };
            let result = merge_matchings(&ms, n);
            let elapsed_seconds = start.elapsed().as_secs_f64();
            Ok(Execution { result, elapsed_seconds, matchings: Some(ms) })
        }
        Algorithm::Greedy => {
            let stream = g.edge_vec();
            let start = Instant::now();
            let result = greedy_maximal(&stream, n);
            Ok(Execution { result, elapsed_seconds: start.elapsed().as_secs_f64(), matchings: None })
        }
        Algorithm::Ghaffari => {
            let stream = g.edge_vec();
            let start = Instant::now();
            let result = ghaffari_mwm(&stream, spec.epsilon, n);
            Ok(Execution { result, elapsed_seconds: start.elapsed().as_secs_f64(), matchings: None })
        }
        Algorithm::Exact => {
            let limit = oracle_limit()?;
            let start = Instant::now();
            let result = exact_mwm(g, &limit)?;
            Ok(Execution { result, elapsed_seconds: start.elapsed().as_secs_f64(), matchings: None })
        }
    }
}

fn traffic_for(g: &Graph, spec: &RunSpec) -> Result<TrafficReport> {
    let cfg = spec.engine_config()?;
    let store = BitStoreConfig::for_engine(&cfg, u64::MAX)?;
    Ok(simulate_traffic(g, &cfg, &store)?)
}

/// Runs `spec.repetitions` timed executions over one loaded input.
pub fn run(spec: &RunSpec) -> Result<Vec<BenchRecord>> {
    let g = load_input(&spec.input)?;
    run_on(&g, spec)
}

/// As [`run`], reusing an already loaded graph.
pub fn run_on(g: &Graph, spec: &RunSpec) -> Result<Vec<BenchRecord>> {
    if spec.repetitions == 0 {
        bail!("repetitions must be at least 1");
    }
    if spec.with_traffic && spec.algorithm != Algorithm::ScOpt {
        bail!("traffic counters are defined for the blocked engine; use --algorithm sc-opt");
    }

    let ratio = if spec.with_ratio {
        let limit = oracle_limit()?;
        let probe = execute(g, spec)?;
        Some(substream_mwm::oracle::ratio_mwm(&probe.result, g, &limit)?)
    } else {
        None
    };
    let traffic = if spec.with_traffic { Some(traffic_for(g, spec)?) } else { None };

    let mut records = Vec::with_capacity(spec.repetitions);
    for run_index in 0..spec.repetitions {
        let exec = execute(g, spec)?;
        let m = g.m();
        records.push(BenchRecord {
            algorithm: spec.algorithm.name().to_string(),
            n: g.n(),
            m,
            substreams: spec.substreams,
            block: spec.block,
            epsilon: spec.epsilon,
            workers: spec.workers,
            run_index,
            elapsed_seconds: exec.elapsed_seconds,
            throughput_edges_per_second: if exec.elapsed_seconds > 0.0 {
                m as f64 / exec.elapsed_seconds
            } else {
                0.0
            },
            matching_weight: exec.result.total_weight,
            matching_size: exec.result.size(),
            ratio_vs_oracle: ratio,
            vbit_chunk_reads: traffic.as_ref().map(|t| t.vbit_chunk_reads),
            vbit_chunk_writes: traffic.as_ref().map(|t| t.vbit_chunk_writes),
            epoch_barriers: traffic.as_ref().map(|t| t.epoch_barriers),
            reads_per_edge: traffic.as_ref().map(|t| t.reads_per_edge),
        });
    }
    Ok(records)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    /// Graph size: values are generator scales (n = 2^scale).
    N,
    /// Epoch block size.
    K,
    /// Substream count; with auto-epsilon, ε follows the regime table.
    L,
    /// Parallel worker count.
    Workers,
}

/// ε regimes by substream count: few substreams need a coarse ladder,
/// hundreds allow a fine one.
pub fn auto_epsilon(substreams: usize) -> f64 {
    if substreams < 64 {
        0.6
    } else if substreams < 256 {
        0.1
    } else {
        0.03
    }
}

/// Runs `base` once per axis value, overriding that one dimension.
pub fn sweep(
    axis: SweepAxis,
    values: &[usize],
    base: &RunSpec,
    use_auto_epsilon: bool,
) -> Result<Vec<BenchRecord>> {
    if values.is_empty() {
        bail!("sweep requires at least one axis value");
    }
    let mut records = Vec::new();
    for &value in values {
        let mut spec = base.clone();
        match axis {
            SweepAxis::N => match &mut spec.input {
                InputSpec::Generated(gen_spec) => {
                    gen_spec.scale = u32::try_from(value).context("scale out of range")?;
                }
                InputSpec::File(_) => {
                    bail!("sweeping n requires a generated input (scale values)");
                }
            },
            SweepAxis::K => spec.block = value,
            SweepAxis::L => {
                spec.substreams = value;
                if use_auto_epsilon {
                    spec.epsilon = auto_epsilon(value);
                    if let InputSpec::Generated(gen_spec) = &mut spec.input {
                        gen_spec.epsilon = spec.epsilon;
                        gen_spec.substreams = value;
                    }
                }
            }
            SweepAxis::Workers => spec.workers = value,
        }
        records.extend(run(&spec)?);
    }
    Ok(records)
}

/// Verification outcome: the measured ratio in the convention matching the
/// algorithm (≥ 1 for weight ratios, ≤ 1 for the cardinality ratio) and the
/// bound it was held to.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub algorithm: Algorithm,
    pub matching_weight: u64,
    pub matching_size: usize,
    pub oracle_weight: u64,
    pub oracle_size: usize,
    pub ratio: f64,
    pub bound_description: String,
    pub passed: bool,
}

pub fn verify(spec: &RunSpec) -> Result<VerifyReport> {
    let g = load_input(&spec.input)?;
    let limit = oracle_limit()?;
    let exec = execute(&g, spec)?;

    let (ratio, bound_description, passed, oracle_weight, oracle_size) = match spec.algorithm {
        Algorithm::Greedy => {
            let best = exact_mcm(&g, &limit)?;
            let ratio = if best.size() == 0 {
                1.0
            } else {
                exec.result.size() as f64 / best.size() as f64
            };
            // Integer form of |greedy| / |MCM| ≥ ½, no tolerance needed.
            let passed = 2 * exec.result.size() >= best.size();
            (ratio, "cardinality ratio ≥ 1/2".to_string(), passed, best.total_weight, best.size())
        }
        Algorithm::Ghaffari => {
            let best = exact_mwm(&g, &limit)?;
            let ratio = substream_mwm::oracle::ratio_mwm(&exec.result, &g, &limit)?;
            let bound = 2.0 + spec.epsilon;
            (ratio, format!("weight ratio ≤ {bound}"), ratio <= bound + RATIO_SLACK, best.total_weight, best.size())
        }
        Algorithm::Exact => {
            let best = exact_mwm(&g, &limit)?;
            let passed = best.total_weight == exec.result.total_weight;
            (1.0, "exact".to_string(), passed, best.total_weight, best.size())
        }
        _ => {
            let best = exact_mwm(&g, &limit)?;
            let ratio = substream_mwm::oracle::ratio_mwm(&exec.result, &g, &limit)?;
            let bound = 4.0 + spec.epsilon;
            (ratio, format!("weight ratio ≤ {bound}"), ratio <= bound + RATIO_SLACK, best.total_weight, best.size())
        }
    };

    Ok(VerifyReport {
        algorithm: spec.algorithm,
        matching_weight: exec.result.total_weight,
        matching_size: exec.result.size(),
        oracle_weight,
        oracle_size,
        ratio,
        bound_description,
        passed,
    })
}

/// Numerical slack for ratio comparisons: the bounds are mathematical, the
/// ratio is one f64 division.
pub const RATIO_SLACK: f64 = 1e-9;

/// One row of traffic output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrafficRow {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub substreams: usize,
    #[serde(rename = "K")]
    pub block: usize,
    pub pointer_chunk_reads: u64,
    pub edge_chunk_reads: u64,
    pub vbit_chunk_reads: u64,
    pub vbit_chunk_writes: u64,
    pub epoch_barriers: u64,
    pub edges_processed: u64,
    pub reads_per_edge: f64,
}

/// Simulates traffic for each block size in `blocks`.
pub fn traffic_table(
    g: &Graph,
    epsilon: f64,
    substreams: usize,
    blocks: &[usize],
    share_vbit_reads: bool,
    bram_bits: u64,
) -> Result<Vec<TrafficRow>> {
    if blocks.is_empty() {
        bail!("traffic requires at least one block size");
    }
    let mut rows = Vec::with_capacity(blocks.len());
    for &block in blocks {
        let cfg = EngineConfig::new(epsilon, substreams, block, 1)?;
        let mut store = BitStoreConfig::for_engine(&cfg, bram_bits)?;
        if !share_vbit_reads {
            store = store.without_read_sharing();
        }
        let report = simulate_traffic(g, &cfg, &store)?;
        rows.push(TrafficRow {
            n: g.n(),
            m: g.m(),
            substreams,
            block,
            pointer_chunk_reads: report.pointer_chunk_reads,
            edge_chunk_reads: report.edge_chunk_reads,
            vbit_chunk_reads: report.vbit_chunk_reads,
            vbit_chunk_writes: report.vbit_chunk_writes,
            epoch_barriers: report.epoch_barriers,
            edges_processed: report.edges_processed,
            reads_per_edge: report.reads_per_edge,
        });
    }
    Ok(rows)
}

/// Serializes records with a header row.
pub fn write_csv<T: Serialize, W: Write>(records: &[T], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

/// Parses records produced by [`write_csv`] — the schema-stability check.
pub fn read_csv<T: for<'de> Deserialize<'de>, R: Read>(input: R) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}
