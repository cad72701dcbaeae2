//! Bit-exact chunked interchange format.
//!
//! Everything travels in 64-byte chunks. Row pointers are 12-byte entries
//! (chunk_id, chunk_offset, edge_count), five per chunk with the final four
//! bytes reserved zero. Edges are 8-byte entries (col, weight), eight per
//! chunk. Matching output records are 16 bytes (u, v, weight,
//! matching_index), four per chunk. All fields little-endian, slot 0 at the
//! lowest byte offset, unused bytes zero — one fixed convention so
//! independently written encoders agree byte for byte.

use crate::engine::SubstreamMatchings;
use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedEdge};

pub const CHUNK_BYTES: usize = 64;
pub const POINTER_ENTRIES_PER_CHUNK: usize = 5;
pub const EDGE_ENTRIES_PER_CHUNK: usize = 8;
pub const OUTPUT_RECORDS_PER_CHUNK: usize = 4;

pub type Chunk = [u8; CHUNK_BYTES];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChunkKind {
    Pointer,
    GraphData,
    Output,
}

/// A sequence of 64-byte chunks of one kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkImage {
    pub kind: ChunkKind,
    pub chunks: Vec<Chunk>,
}

impl ChunkImage {
    fn with_chunks(kind: ChunkKind, count: usize) -> Self {
        Self { kind, chunks: vec![[0u8; CHUNK_BYTES]; count] }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.chunks.concat()
    }

    pub fn from_bytes(kind: ChunkKind, bytes: &[u8]) -> Result<Self> {
        if bytes.len() % CHUNK_BYTES != 0 {
            return Err(Error::Corrupt(format!(
                "image length {} is not a multiple of {CHUNK_BYTES}",
                bytes.len()
            )));
        }
        let chunks = bytes
            .chunks_exact(CHUNK_BYTES)
            .map(|c| <Chunk>::try_from(c).expect("exact chunk"))
            .collect();
        Ok(Self { kind, chunks })
    }
}

/// One row-pointer entry: where the row's edges start and how many there are.
/// An empty row stores edge_count = 0 with (chunk_id, chunk_offset) at the
/// position the next edge would occupy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointerEntry {
    pub chunk_id: u32,
    pub chunk_offset: u32,
    pub edge_count: u32,
}

#[inline]
fn put_u32(chunk: &mut Chunk, off: usize, x: u32) {
    chunk[off..off + 4].copy_from_slice(&x.to_le_bytes());
}

#[inline]
fn get_u32(chunk: &Chunk, off: usize) -> u32 {
    u32::from_le_bytes(chunk[off..off + 4].try_into().expect("4 bytes"))
}

/// Encodes a graph into its pointer and edge images.
pub fn encode(g: &Graph) -> Result<(ChunkImage, ChunkImage)> {
    let (n, m) = (g.n(), g.m());
    if n > u32::MAX as usize {
        return Err(Error::Overflow(format!("vertex count {n}")));
    }
    if m > u32::MAX as usize {
        return Err(Error::Overflow(format!("edge count {m}")));
    }

    let mut graph_image = ChunkImage::with_chunks(ChunkKind::GraphData, m.div_ceil(EDGE_ENTRIES_PER_CHUNK));
    for (j, e) in g.csr_edges().enumerate() {
        let chunk = &mut graph_image.chunks[j / EDGE_ENTRIES_PER_CHUNK];
        let base = (j % EDGE_ENTRIES_PER_CHUNK) * 8;
        put_u32(chunk, base, e.v);
        put_u32(chunk, base + 4, e.w);
    }

    let mut pointer_image = ChunkImage::with_chunks(ChunkKind::Pointer, n.div_ceil(POINTER_ENTRIES_PER_CHUNK));
    let mut next = 0usize;
    for u in 1..=n {
        let count = g.row(u as u32).len();
        let chunk = &mut pointer_image.chunks[(u - 1) / POINTER_ENTRIES_PER_CHUNK];
        let base = ((u - 1) % POINTER_ENTRIES_PER_CHUNK) * 12;
        put_u32(chunk, base, (next / EDGE_ENTRIES_PER_CHUNK) as u32);
        put_u32(chunk, base + 4, (next % EDGE_ENTRIES_PER_CHUNK) as u32);
        put_u32(chunk, base + 8, count as u32);
        next += count;
    }
    Ok((pointer_image, graph_image))
}

/// Decodes a graph from its images. The vertex count is supplied by the
/// caller — the format carries no header, exactly as the hardware interface
/// receives n alongside the buffers.
///
/// The pointer fields are redundant with the running sum of edge counts; any
/// disagreement, out-of-range value, or nonzero padding is reported as
/// corruption.
pub fn decode(pointer_image: &ChunkImage, graph_image: &ChunkImage, n: usize) -> Result<Graph> {
    if pointer_image.kind != ChunkKind::Pointer || graph_image.kind != ChunkKind::GraphData {
        return Err(Error::Corrupt("image kind mismatch".into()));
    }
    if pointer_image.chunks.len() != n.div_ceil(POINTER_ENTRIES_PER_CHUNK) {
        return Err(Error::Corrupt(format!(
            "pointer image has {} chunks, expected {} for n={n}",
            pointer_image.chunks.len(),
            n.div_ceil(POINTER_ENTRIES_PER_CHUNK)
        )));
    }

    let edge_slots = graph_image.chunks.len() * EDGE_ENTRIES_PER_CHUNK;
    let read_entry = |idx: usize| -> PointerEntry {
        let chunk = &pointer_image.chunks[idx / POINTER_ENTRIES_PER_CHUNK];
        let base = (idx % POINTER_ENTRIES_PER_CHUNK) * 12;
        PointerEntry {
            chunk_id: get_u32(chunk, base),
            chunk_offset: get_u32(chunk, base + 4),
            edge_count: get_u32(chunk, base + 8),
        }
    };

    let mut rows: Vec<Vec<(u32, u32)>> = Vec::with_capacity(n);
    let mut running = 0usize;
    for u in 1..=n {
        let entry = read_entry(u - 1);
        if entry.chunk_offset as usize >= EDGE_ENTRIES_PER_CHUNK {
            return Err(Error::Corrupt(format!("row {u}: chunk offset {} out of range", entry.chunk_offset)));
        }
        let start = entry.chunk_id as usize * EDGE_ENTRIES_PER_CHUNK + entry.chunk_offset as usize;
        if start != running {
            return Err(Error::Corrupt(format!(
                "row {u}: pointer says slot {start}, cumulative counts say {running}"
            )));
        }
        let count = entry.edge_count as usize;
        if start + count > edge_slots {
            return Err(Error::Corrupt(format!("row {u}: edges run past the graph image")));
        }
        let mut row = Vec::with_capacity(count);
        let mut prev = 0u32;
        for slot in start..start + count {
            let chunk = &graph_image.chunks[slot / EDGE_ENTRIES_PER_CHUNK];
            let base = (slot % EDGE_ENTRIES_PER_CHUNK) * 8;
            let col = get_u32(chunk, base);
            let weight = get_u32(chunk, base + 4);
            if col == 0 || col as usize > n {
                return Err(Error::Corrupt(format!("row {u}: column {col} out of range")));
            }
            if col as usize == u {
                return Err(Error::Corrupt(format!("row {u}: self-loop")));
            }
            if col <= prev {
                return Err(Error::Corrupt(format!("row {u}: columns not strictly increasing")));
            }
            prev = col;
            row.push((col, weight));
        }
        rows.push(row);
        running += count;
    }

    if graph_image.chunks.len() != running.div_ceil(EDGE_ENTRIES_PER_CHUNK) {
        return Err(Error::Corrupt(format!(
            "graph image has {} chunks, cumulative counts say {}",
            graph_image.chunks.len(),
            running.div_ceil(EDGE_ENTRIES_PER_CHUNK)
        )));
    }
    for slot in running..edge_slots {
        let chunk = &graph_image.chunks[slot / EDGE_ENTRIES_PER_CHUNK];
        let base = (slot % EDGE_ENTRIES_PER_CHUNK) * 8;
        if get_u32(chunk, base) != 0 || get_u32(chunk, base + 4) != 0 {
            return Err(Error::Corrupt("nonzero padding in graph image".into()));
        }
    }
    for idx in n..pointer_image.chunks.len() * POINTER_ENTRIES_PER_CHUNK {
        let e = read_entry(idx);
        if e != (PointerEntry { chunk_id: 0, chunk_offset: 0, edge_count: 0 }) {
            return Err(Error::Corrupt("nonzero padding in pointer image".into()));
        }
    }
    for chunk in &pointer_image.chunks {
        if chunk[60..64] != [0u8; 4] {
            return Err(Error::Corrupt("nonzero reserved bytes in pointer chunk".into()));
        }
    }

    Graph::from_rows(rows).map_err(|e| Error::Corrupt(format!("decoded rows invalid: {e}")))
}

/// Encodes the per-substream matchings as output records, substreams
/// concatenated in ascending index, each starting on a chunk boundary.
pub fn encode_output(matchings: &SubstreamMatchings) -> Result<ChunkImage> {
    if matchings.substreams() > u32::MAX as usize {
        return Err(Error::Overflow(format!("substream count {}", matchings.substreams())));
    }
    let total_chunks: usize = matchings
        .lists()
        .iter()
        .map(|l| l.len().div_ceil(OUTPUT_RECORDS_PER_CHUNK))
        .sum();
    let mut image = ChunkImage::with_chunks(ChunkKind::Output, total_chunks);
    let mut chunk_idx = 0usize;
    for (i, list) in matchings.lists().iter().enumerate() {
        for (j, e) in list.iter().enumerate() {
            let chunk = &mut image.chunks[chunk_idx + j / OUTPUT_RECORDS_PER_CHUNK];
            let base = (j % OUTPUT_RECORDS_PER_CHUNK) * 16;
            put_u32(chunk, base, e.u);
            put_u32(chunk, base + 4, e.v);
            put_u32(chunk, base + 8, e.w);
            put_u32(chunk, base + 12, i as u32);
        }
        chunk_idx += list.len().div_ceil(OUTPUT_RECORDS_PER_CHUNK);
    }
    Ok(image)
}

/// Inverse of [`encode_output`]. The substream count is supplied by the
/// caller so trailing empty lists survive the round trip.
pub fn decode_output(image: &ChunkImage, substreams: usize) -> Result<SubstreamMatchings> {
    if image.kind != ChunkKind::Output {
        return Err(Error::Corrupt("image kind mismatch".into()));
    }
    let mut lists: Vec<Vec<WeightedEdge>> = vec![Vec::new(); substreams];
    // (index, last chunk of that index was partially filled)
    let mut prev: Option<(usize, bool)> = None;
    for chunk in &image.chunks {
        let mut chunk_index: Option<usize> = None;
        let mut padded = false;
        for slot in 0..OUTPUT_RECORDS_PER_CHUNK {
            let base = slot * 16;
            let (u, v, w, idx) = (
                get_u32(chunk, base),
                get_u32(chunk, base + 4),
                get_u32(chunk, base + 8),
                get_u32(chunk, base + 12),
            );
            if u == 0 {
                if (v, w, idx) != (0, 0, 0) {
                    return Err(Error::Corrupt("partial zero record".into()));
                }
                padded = true;
                continue;
            }
            if padded {
                return Err(Error::Corrupt("record after padding".into()));
            }
            if v == 0 || u == v {
                return Err(Error::Corrupt(format!("invalid record endpoints ({u}, {v})")));
            }
            let i = idx as usize;
            if i >= substreams {
                return Err(Error::Corrupt(format!("matching index {i} out of range")));
            }
            if let Some(ci) = chunk_index {
                if ci != i {
                    return Err(Error::Corrupt("mixed matching indexes in one chunk".into()));
                }
            }
            chunk_index = Some(i);
            lists[i].push(WeightedEdge::new(u, v, w));
        }
        let Some(i) = chunk_index else {
            return Err(Error::Corrupt("all-padding chunk".into()));
        };
        match prev {
            Some((pi, _)) if pi > i => {
                return Err(Error::Corrupt("matching indexes not ascending across chunks".into()));
            }
            Some((pi, partial)) if pi == i && partial => {
                return Err(Error::Corrupt("substream resumes after a partial chunk".into()));
            }
            _ => {}
        }
        prev = Some((i, padded));
    }
    Ok(SubstreamMatchings::from_lists(lists))
}
