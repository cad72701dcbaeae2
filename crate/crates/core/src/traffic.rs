//! Chunk-level memory-traffic model for the blocked engine.
//!
//! While an epoch's rows are being matched, the matching bits of the row
//! vertices stay resident (which is what bounds block × substreams by the
//! bit-store budget); the column vertices' bits live off-chip, packed
//! ⌊512/L⌋ vertices per 512-bit chunk, and every distinct chunk an epoch
//! touches costs one read (sharable) and one write-back. Edge and pointer
//! traffic come straight from the packed codec layout. No latencies or queue
//! effects — transfer counts only.

use crate::engine::{epoch_ordered_edges, EngineConfig, StreamMatcher};
use crate::error::{Error, Result};
use crate::graph::Graph;

const CHUNK_BITS: usize = 512;
const POINTERS_PER_CHUNK: usize = 5;
const EDGES_PER_CHUNK: usize = 8;

/// Capacity budget and layout of the matching-bit stores.
#[derive(Clone, Copy, Debug)]
pub struct BitStoreConfig {
    /// On-chip bit budget for the resident rows: block × substreams must fit.
    pub bram_bits: u64,
    /// Column-bit vertices per 512-bit chunk: ⌊512/L⌋.
    pub vbits_per_chunk: usize,
    /// When set, an epoch reads each distinct column chunk once; when
    /// cleared, every edge pays its own read (the worst case that pins the
    /// 1.125 reads-per-edge ceiling).
    pub share_vbit_reads: bool,
}

impl BitStoreConfig {
    pub fn for_engine(cfg: &EngineConfig, bram_bits: u64) -> Result<Self> {
        let vbits_per_chunk = CHUNK_BITS / cfg.substreams();
        if vbits_per_chunk == 0 {
            return Err(Error::Config(format!(
                "{} substreams leave no room for even one vertex per {CHUNK_BITS}-bit chunk",
                cfg.substreams()
            )));
        }
        Ok(Self { bram_bits, vbits_per_chunk, share_vbit_reads: true })
    }

    pub fn without_read_sharing(mut self) -> Self {
        self.share_vbit_reads = false;
        self
    }
}

/// Transfer counters for one blocked run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrafficReport {
    pub pointer_chunk_reads: u64,
    pub edge_chunk_reads: u64,
    pub vbit_chunk_reads: u64,
    pub vbit_chunk_writes: u64,
    pub epoch_barriers: u64,
    pub edges_processed: u64,
    pub reads_per_edge: f64,
}

/// Runs the blocked engine over `g` counting chunk transfers.
///
/// Column-bit chunks are counted per distinct (epoch, chunk) pair — the
/// stream inside an epoch is column-sorted, so distinct pairs are exactly
/// the chunk-id transitions. Edge chunks are counted as each epoch's
/// contiguous span of the packed edge image. Pointer chunks are read once.
pub fn simulate_traffic(g: &Graph, cfg: &EngineConfig, store: &BitStoreConfig) -> Result<TrafficReport> {
    let block = cfg.block();
    let resident_bits = block as u128 * cfg.substreams() as u128;
    if resident_bits > store.bram_bits as u128 {
        return Err(Error::Config(format!(
            "epoch needs {resident_bits} resident matching bits, budget is {}",
            store.bram_bits
        )));
    }
    let vpc = store.vbits_per_chunk;
    if vpc == 0 || vpc > CHUNK_BITS {
        return Err(Error::Config(format!("invalid column-bit chunk capacity {vpc}")));
    }

    let mut matcher = StreamMatcher::new(g.n(), cfg);
    let mut vbit_chunk_reads = 0u64;
    let mut vbit_chunk_writes = 0u64;
    let mut epoch = 0usize;
    let mut last_chunk = None;
    for ee in epoch_ordered_edges(g, block) {
        if ee.epoch != epoch {
            epoch = ee.epoch;
            last_chunk = None;
        }
        let chunk = (ee.edge.v as usize - 1) / vpc;
        if last_chunk != Some(chunk) {
            last_chunk = Some(chunk);
            vbit_chunk_writes += 1;
            if store.share_vbit_reads {
                vbit_chunk_reads += 1;
            }
        }
        if !store.share_vbit_reads {
            vbit_chunk_reads += 1;
        }
        matcher.process(ee.edge)?;
    }

    let offsets = g.row_offsets();
    let epochs = g.n().div_ceil(block);
    let mut edge_chunk_reads = 0u64;
    for k in 1..=epochs {
        let first_row = (k - 1) * block;
        let last_row = (k * block).min(g.n());
        let (start, end) = (offsets[first_row], offsets[last_row]);
        if end > start {
            edge_chunk_reads += ((end - 1) / EDGES_PER_CHUNK - start / EDGES_PER_CHUNK + 1) as u64;
        }
    }

    let m = g.m() as u64;
    Ok(TrafficReport {
        pointer_chunk_reads: g.n().div_ceil(POINTERS_PER_CHUNK) as u64,
        edge_chunk_reads,
        vbit_chunk_reads,
        vbit_chunk_writes,
        epoch_barriers: epochs as u64,
        edges_processed: m,
        reads_per_edge: if m == 0 {
            0.0
        } else {
            (edge_chunk_reads + vbit_chunk_reads) as f64 / m as f64
        },
    })
}

/// One report per block size, same graph and thresholds.
pub fn compare_blocking(g: &Graph, cfg: &EngineConfig, blocks: &[usize]) -> Result<Vec<TrafficReport>> {
    blocks
        .iter()
        .map(|&k| {
            let cfg_k = cfg.with_block(k)?;
            let store = BitStoreConfig::for_engine(&cfg_k, u64::MAX)?;
            simulate_traffic(g, &cfg_k, &store)
        })
        .collect()
}
