//! Substream-decomposed streaming matcher.
//!
//! The stream is split into L nested substreams by weight threshold
//! (1+ε)^i. Pass one runs a greedy maximal matching per substream while
//! scanning the edge stream once; pass two merges the per-substream lists
//! from heaviest threshold down into the final matching, which is a
//! (4+ε)-approximation of the maximum weighted matching.
//!
//! Three pass-one drivers share the same matching step:
//! * [`process_stream_simple`] — any edge order, one shared bit matrix.
//! * [`process_stream_blocked`] — rows regrouped into epochs of `block`
//!   consecutive rows, each epoch merged into (v, u) order. Epoch locality is
//!   what lets an accelerator keep only `block × L` matching bits resident.
//! * [`process_stream_parallel`] — every substream matched independently
//!   (edges may then appear in several lists; the merge pass suppresses the
//!   duplicates, and the final matching is provably the one the simple
//!   variant yields).

mod kmerge;

use std::cmp::Ordering;

use crate::bits::VertexBits;
use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedEdge};
use crate::matching::MatchingResult;
use kmerge::LoserTree;

/// Parameters shared by every stream variant.
#[derive(Clone, Debug)]
pub struct EngineConfig {
    epsilon: f64,
    substreams: usize,
    block: usize,
    workers: usize,
    thresholds: Vec<f64>,
}

impl EngineConfig {
    /// Builds a config and precomputes the threshold ladder.
    ///
    /// Thresholds are (1+ε)^i by repeated multiplication, which pins the
    /// exact double every implementation sees (powf may round differently).
    /// They must come out finite and strictly increasing, which bounds how
    /// large ε·substreams can get.
    pub fn new(epsilon: f64, substreams: usize, block: usize, workers: usize) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be a positive real, got {epsilon}")));
        }
        if substreams == 0 {
            return Err(Error::Config("substream count must be at least 1".into()));
        }
        if block == 0 {
            return Err(Error::Config("epoch block size must be at least 1".into()));
        }
        if workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        let mut thresholds = Vec::with_capacity(substreams);
        let mut t = 1.0f64;
        for i in 0..substreams {
            if !t.is_finite() {
                return Err(Error::Config(format!("threshold {i} is not finite")));
            }
            if let Some(&prev) = thresholds.last() {
                if t <= prev {
                    return Err(Error::Config(format!(
                        "thresholds not strictly increasing at {i} (epsilon too small for f64)"
                    )));
                }
            }
            thresholds.push(t);
            t *= 1.0 + epsilon;
        }
        Ok(Self { epsilon, substreams, block, workers, thresholds })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn substreams(&self) -> usize {
        self.substreams
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// The weight cutoffs: element i is (1+ε)^i.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Same thresholds and workers, different epoch block size.
    pub fn with_block(&self, block: usize) -> Result<Self> {
        if block == 0 {
            return Err(Error::Config("epoch block size must be at least 1".into()));
        }
        let mut cfg = self.clone();
        cfg.block = block;
        Ok(cfg)
    }
}

/// The ε for which L substreams exactly cover weights up to w_max:
/// w_max^(1/L) − 1.
pub fn compute_epsilon(substreams: usize, w_max: u32) -> f64 {
    debug_assert!(substreams >= 1 && w_max >= 1);
    (w_max as f64).powf(1.0 / substreams as f64) - 1.0
}

/// Which substreams one edge belongs to: te[i] = (w ≥ (1+ε)^i).
/// Always a contiguous prefix, since the thresholds increase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstreamMembership {
    te: Vec<bool>,
}

impl SubstreamMembership {
    pub fn is_member(&self, i: usize) -> bool {
        self.te[i]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.te
    }
}

pub fn membership(w: u32, cfg: &EngineConfig) -> SubstreamMembership {
    let w = w as f64;
    SubstreamMembership { te: cfg.thresholds.iter().map(|&t| w >= t).collect() }
}

/// L×n bit matrix; bit (i, v) set iff vertex v is matched inside substream
/// i's greedy matching. Stored per vertex so one edge touches two contiguous
/// bit words regardless of L.
#[derive(Clone, Debug)]
pub struct MatchingBits {
    substreams: usize,
    n: usize,
    words_per_vertex: usize,
    words: Vec<u64>,
}

impl MatchingBits {
    pub fn new(n: usize, substreams: usize) -> Self {
        let words_per_vertex = substreams.div_ceil(64);
        Self { substreams, n, words_per_vertex, words: vec![0; n * words_per_vertex] }
    }

    #[inline]
    fn word(&self, i: usize, v: u32) -> usize {
        debug_assert!(i < self.substreams);
        debug_assert!(v >= 1 && v as usize <= self.n);
        (v as usize - 1) * self.words_per_vertex + (i >> 6)
    }

    #[inline]
    pub fn get(&self, i: usize, v: u32) -> bool {
        self.words[self.word(i, v)] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: u32) {
        let w = self.word(i, v);
        self.words[w] |= 1 << (i & 63);
    }

    pub fn substreams(&self) -> usize {
        self.substreams
    }

    pub fn vertices(&self) -> usize {
        self.n
    }
}

/// The per-substream acceptance lists C_0..C_{L−1}, in acceptance order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstreamMatchings {
    lists: Vec<Vec<WeightedEdge>>,
}

impl SubstreamMatchings {
    pub fn from_lists(lists: Vec<Vec<WeightedEdge>>) -> Self {
        Self { lists }
    }

    pub fn substreams(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, i: usize) -> &[WeightedEdge] {
        &self.lists[i]
    }

    pub fn lists(&self) -> &[Vec<WeightedEdge>] {
        &self.lists
    }

    pub fn total_edges(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }
}

/// One-pass matcher: feed edges in any order, collect the lists at the end.
///
/// Per edge, substreams are scanned from tightest threshold (L−1) down to 0;
/// wherever the edge qualifies and both endpoints are free the bits are set,
/// but the edge is recorded only at the first accepting substream.
pub struct StreamMatcher<'a> {
    cfg: &'a EngineConfig,
    n: usize,
    bits: MatchingBits,
    lists: Vec<Vec<WeightedEdge>>,
}

impl<'a> StreamMatcher<'a> {
    pub fn new(n: usize, cfg: &'a EngineConfig) -> Self {
        Self {
            cfg,
            n,
            bits: MatchingBits::new(n, cfg.substreams),
            lists: vec![Vec::new(); cfg.substreams],
        }
    }

    fn check(&self, e: WeightedEdge) -> Result<()> {
        for id in [e.u, e.v] {
            if id == 0 || id as usize > self.n {
                return Err(Error::VertexRange { id: id as u64, max: self.n });
            }
        }
        if e.u == e.v {
            return Err(Error::SelfLoop { u: e.u });
        }
        Ok(())
    }

    /// Processes one edge; returns whether any substream accepted it
    /// (i.e. whether any matching bits changed).
    pub fn process(&mut self, e: WeightedEdge) -> Result<bool> {
        self.check(e)?;
        let w = e.w as f64;
        let mut has_added = false;
        let mut accepted = false;
        for i in (0..self.cfg.substreams).rev() {
            if w < self.cfg.thresholds[i] {
                continue;
            }
            if !self.bits.get(i, e.u) && !self.bits.get(i, e.v) {
                self.bits.set(i, e.u);
                self.bits.set(i, e.v);
                accepted = true;
                if !has_added {
                    self.lists[i].push(e);
                    has_added = true;
                }
            }
        }
        Ok(accepted)
    }

    pub fn bits(&self) -> &MatchingBits {
        &self.bits
    }

    pub fn finish(self) -> SubstreamMatchings {
        SubstreamMatchings { lists: self.lists }
    }
}

pub fn process_stream_simple(
    edges: &[WeightedEdge],
    n: usize,
    cfg: &EngineConfig,
) -> Result<SubstreamMatchings> {
    let mut matcher = StreamMatcher::new(n, cfg);
    for &e in edges {
        matcher.process(e)?;
    }
    Ok(matcher.finish())
}

/// An edge tagged with the epoch its row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpochEdge {
    pub edge: WeightedEdge,
    pub epoch: usize,
}

/// Epoch of row u for block size K: ⌊(u−1)/K⌋ + 1.
#[inline]
pub fn epoch_of(u: u32, block: usize) -> usize {
    debug_assert!(u >= 1 && block >= 1);
    (u as usize - 1) / block + 1
}

/// The streaming order of the blocked variant: by epoch, then column, then
/// row. Weight never participates.
pub fn lex_compare(a: &EpochEdge, b: &EpochEdge) -> Ordering {
    (a.epoch, a.edge.v, a.edge.u).cmp(&(b.epoch, b.edge.v, b.edge.u))
}

struct RowCursor<'a> {
    u: u32,
    inner: std::slice::Iter<'a, (u32, u32)>,
}

impl Iterator for RowCursor<'_> {
    type Item = WeightedEdge;

    fn next(&mut self) -> Option<WeightedEdge> {
        self.inner.next().map(|&(v, w)| WeightedEdge::new(self.u, v, w))
    }
}

fn cmp_col_then_row(a: &WeightedEdge, b: &WeightedEdge) -> Ordering {
    (a.v, a.u).cmp(&(b.v, b.u))
}

type EpochMerge<'a> = LoserTree<RowCursor<'a>, fn(&WeightedEdge, &WeightedEdge) -> Ordering>;

/// Streams a graph's edges in blocked lexicographic order: epochs of `block`
/// consecutive rows, each epoch's rows merged into (v, u) order.
pub struct EpochOrderedEdges<'a> {
    g: &'a Graph,
    block: usize,
    epochs: usize,
    epoch: usize,
    current: Option<EpochMerge<'a>>,
}

impl<'a> EpochOrderedEdges<'a> {
    fn build(&mut self) -> Option<EpochMerge<'a>> {
        if self.epoch >= self.epochs {
            return None;
        }
        self.epoch += 1;
        let first = (self.epoch - 1) * self.block + 1;
        let last = (self.epoch * self.block).min(self.g.n());
        let cursors = (first..=last)
            .map(|u| RowCursor { u: u as u32, inner: self.g.row(u as u32).iter() })
            .collect();
        Some(LoserTree::new(cursors, cmp_col_then_row))
    }
}

impl Iterator for EpochOrderedEdges<'_> {
    type Item = EpochEdge;

    fn next(&mut self) -> Option<EpochEdge> {
        loop {
            if let Some(tree) = &mut self.current {
                if let Some(edge) = tree.next() {
                    return Some(EpochEdge { edge, epoch: self.epoch });
                }
            } else if self.epoch >= self.epochs {
                return None;
            }
            self.current = self.build();
            if self.current.is_none() {
                return None;
            }
        }
    }
}

pub fn epoch_ordered_edges(g: &Graph, block: usize) -> EpochOrderedEdges<'_> {
    debug_assert!(block >= 1);
    EpochOrderedEdges { g, block, epochs: g.n().div_ceil(block), epoch: 0, current: None }
}

/// Blocked pass one: identical matching step, epoch-merged order. With
/// block = 1 the order degenerates to row-major, so the lists equal the
/// simple variant's on the row-major stream.
pub fn process_stream_blocked(g: &Graph, cfg: &EngineConfig) -> Result<SubstreamMatchings> {
    let mut matcher = StreamMatcher::new(g.n(), cfg);
    for ee in epoch_ordered_edges(g, cfg.block) {
        matcher.process(ee.edge)?;
    }
    Ok(matcher.finish())
}

/// Parallel pass one: each substream runs its own greedy matching over the
/// full stream, with private occupancy bits and list. An edge can land in
/// several lists; the merge pass blocks the duplicates. Worker count only
/// sets how substreams are divided among threads — the lists are identical
/// for any worker count.
pub fn process_stream_parallel(
    edges: &[WeightedEdge],
    n: usize,
    cfg: &EngineConfig,
) -> Result<SubstreamMatchings> {
    for &e in edges {
        for id in [e.u, e.v] {
            if id == 0 || id as usize > n {
                return Err(Error::VertexRange { id: id as u64, max: n });
            }
        }
        if e.u == e.v {
            return Err(Error::SelfLoop { u: e.u });
        }
    }

    let substreams = cfg.substreams;
    let workers = cfg.workers.min(substreams).max(1);
    let per_worker = substreams.div_ceil(workers);
    let mut lists: Vec<Vec<WeightedEdge>> = Vec::with_capacity(substreams);

    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|wk| {
                let lo = (wk * per_worker).min(substreams);
                let hi = ((wk + 1) * per_worker).min(substreams);
                scope.spawn(move || {
                    // One pass per worker over an interleaved occupancy
                    // matrix: vertex v's bits for this worker's substreams
                    // sit in `wpv` consecutive words, so an edge touches two
                    // short word runs instead of one bitset per substream.
                    // Thresholds ascend, hence the substreams an edge
                    // qualifies for form a prefix of the worker's range, and
                    // claiming every free qualifying row in one OR is exactly
                    // the per-substream greedy rule (no substream ever reads
                    // another substream's bits).
                    let count = hi - lo;
                    if count == 0 {
                        return Vec::new();
                    }
                    let wpv = count.div_ceil(64);
                    let mut words = vec![0u64; n * wpv];
                    let mut out: Vec<Vec<WeightedEdge>> = vec![Vec::new(); count];
                    let thresholds = &cfg.thresholds[lo..hi];
                    for &e in edges {
                        let w = e.w as f64;
                        let q = thresholds.partition_point(|&t| w >= t);
                        let ru = (e.u as usize - 1) * wpv;
                        let rv = (e.v as usize - 1) * wpv;
                        for wi in 0..wpv {
                            let filled = q.saturating_sub(wi * 64);
                            if filled == 0 {
                                break;
                            }
                            let mask =
                                if filled >= 64 { !0u64 } else { (1u64 << filled) - 1 };
                            let free = !(words[ru + wi] | words[rv + wi]) & mask;
                            if free != 0 {
                                words[ru + wi] |= free;
                                words[rv + wi] |= free;
                                let mut rest = free;
                                while rest != 0 {
                                    let s = rest.trailing_zeros() as usize;
                                    out[wi * 64 + s].push(e);
                                    rest &= rest - 1;
                                }
                            }
                        }
                    }
                    out
                })
            })
            .collect();
        for h in handles {
            lists.extend(h.join().expect("substream worker panicked"));
        }
    });

    Ok(SubstreamMatchings { lists })
}

/// Pass two: scan lists from substream L−1 down to 0, each in stored order,
/// keeping every edge whose endpoints are still free.
///
/// # Panics
/// If `ms` references a vertex outside 1..=n.
pub fn merge_matchings(ms: &SubstreamMatchings, n: usize) -> MatchingResult {
    let mut tbits = VertexBits::new(n);
    let mut edges = Vec::new();
    let mut total_weight = 0u64;
    for i in (0..ms.substreams()).rev() {
        for &e in ms.list(i) {
            assert!(e.u >= 1 && e.u as usize <= n && e.v >= 1 && e.v as usize <= n);
            if !tbits.get(e.u) && !tbits.get(e.v) {
                tbits.set(e.u);
                tbits.set(e.v);
                edges.push(e);
                total_weight += e.w as u64;
            }
        }
    }
    MatchingResult { edges, total_weight, tbits }
}
