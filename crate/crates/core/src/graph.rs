//! Graph storage in row-sorted adjacency form, plain-text ingestion, and the
//! canonical row-major edge stream every engine consumes.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One weighted edge. Vertex ids are 1-based; `u != v`; the weight fits the
/// 32-bit field of the chunked interchange format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightedEdge {
    pub u: u32,
    pub v: u32,
    pub w: u32,
}

impl WeightedEdge {
    pub fn new(u: u32, v: u32, w: u32) -> Self {
        Self { u, v, w }
    }
}

/// Simple weighted graph with per-row adjacency lists sorted by column.
///
/// `rows[u-1]` holds the `(v, w)` entries of row `u`, column indices strictly
/// increasing. Ingestion and generation place each undirected edge once, in
/// the row of its lower endpoint; the type itself only requires `v != u` and
/// ids in `[1, n]`, so decoded images with rows keyed by the higher endpoint
/// are also representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    rows: Vec<Vec<(u32, u32)>>,
}

impl Graph {
    /// Builds from complete adjacency rows (`rows.len()` is the vertex count),
    /// validating every structural invariant.
    pub fn from_rows(rows: Vec<Vec<(u32, u32)>>) -> Result<Self> {
        let n = rows.len();
        if n > u32::MAX as usize {
            return Err(Error::Overflow(format!("vertex count {n}")));
        }
        let mut m = 0usize;
        for (i, row) in rows.iter().enumerate() {
            let u = (i + 1) as u32;
            let mut prev = 0u32;
            for &(v, _) in row {
                if v == 0 || v as usize > n {
                    return Err(Error::VertexRange { id: v as u64, max: n });
                }
                if v == u {
                    return Err(Error::SelfLoop { u });
                }
                if v <= prev {
                    return Err(Error::DuplicateEdge { u, v });
                }
                prev = v;
            }
            m += row.len();
        }
        Ok(Self { n, m, rows })
    }

    /// Builds from an edge list; each edge lands in the row of its `u` field.
    /// Duplicate `(u, v)` pairs are an error here — dedup policy belongs to
    /// ingestion.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = WeightedEdge>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::Overflow(format!("vertex count {n}")));
        }
        let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for e in edges {
            if e.u == 0 || e.u as usize > n {
                return Err(Error::VertexRange { id: e.u as u64, max: n });
            }
            if e.v == 0 || e.v as usize > n {
                return Err(Error::VertexRange { id: e.v as u64, max: n });
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { u: e.u });
            }
            rows[(e.u - 1) as usize].push((e.v, e.w));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(v, _)| v);
        }
        Self::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Adjacency entries of row `u` (1-based), sorted by column.
    pub fn row(&self, u: u32) -> &[(u32, u32)] {
        &self.rows[(u - 1) as usize]
    }

    /// All edges in row-major order: rows ascending, columns ascending within
    /// a row. This is the canonical stream order of the engines.
    pub fn csr_edges(&self) -> impl Iterator<Item = WeightedEdge> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            let u = (i + 1) as u32;
            row.iter().map(move |&(v, w)| WeightedEdge { u, v, w })
        })
    }

    pub fn edge_vec(&self) -> Vec<WeightedEdge> {
        self.csr_edges().collect()
    }

    /// Prefix offsets into the row-major edge stream: `offsets[u-1]` is the
    /// index of the first edge of row `u`, `offsets[n]` = m.
    pub fn row_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for row in &self.rows {
            acc += row.len();
            offsets.push(acc);
        }
        offsets
    }

    pub fn max_weight(&self) -> u32 {
        self.rows.iter().flatten().map(|&(_, w)| w).max().unwrap_or(0)
    }

    /// Serializes as "u v w" lines in row-major order; the inverse of
    /// [`ingest_edge_list`] for canonically stored graphs.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.m * 8);
        for e in self.csr_edges() {
            writeln!(out, "{} {} {}", e.u, e.v, e.w).expect("string write");
        }
        out
    }
}

/// Outcome of text ingestion: the graph plus the records that were dropped on
/// the way in.
#[derive(Debug)]
pub struct IngestSummary {
    pub graph: Graph,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// Parses line-oriented "u v w" records (blank lines and `#` comments
/// skipped). Each record is normalized to the row of its lower endpoint; the
/// first occurrence of an unordered pair wins; self-loops are dropped and
/// counted. With `n_hint` absent, n is the largest vertex id seen.
pub fn ingest_edge_list(text: &str, n_hint: Option<usize>) -> Result<IngestSummary> {
    if let Some(h) = n_hint {
        if h > u32::MAX as usize {
            return Err(Error::Overflow(format!("vertex count hint {h}")));
        }
    }
    let mut edges: Vec<WeightedEdge> = Vec::new();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut self_loops = 0usize;
    let mut duplicates = 0usize;
    let mut max_id = 0u32;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (a, b, w) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), Some(w), None) => (a, b, w),
            _ => {
                return Err(Error::Parse { line, msg: format!("expected 3 fields, got {:?}", trimmed) });
            }
        };
        let parse_int = |tok: &str| -> Result<u64> {
            tok.parse::<u64>().map_err(|e| Error::Parse { line, msg: format!("{tok:?}: {e}") })
        };
        let a = parse_int(a)?;
        let b = parse_int(b)?;
        let w = parse_int(w)?;
        if w > u32::MAX as u64 {
            return Err(Error::Parse { line, msg: format!("weight {w} exceeds 32 bits") });
        }
        let bound = n_hint.unwrap_or(u32::MAX as usize);
        for id in [a, b] {
            if id == 0 || id > bound as u64 {
                return Err(Error::VertexRange { id, max: bound });
            }
        }
        let (a, b) = (a as u32, b as u32);
        if a == b {
            self_loops += 1;
            continue;
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        if !seen.insert((u as u64) << 32 | v as u64) {
            duplicates += 1;
            continue;
        }
        max_id = max_id.max(v);
        edges.push(WeightedEdge { u, v, w: w as u32 });
    }

    let n = n_hint.unwrap_or(max_id as usize);
    Ok(IngestSummary {
        graph: Graph::from_edges(n, edges)?,
        self_loops_dropped: self_loops,
        duplicates_dropped: duplicates,
    })
}
