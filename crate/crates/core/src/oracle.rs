//! Exact maximum-weight / maximum-cardinality matchings by include/exclude
//! branch and bound — desk-scale ground truth for every approximation bound
//! in this workspace. Deliberately simple and auditable rather than
//! asymptotically clever.

use crate::bits::VertexBits;
use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedEdge};
use crate::matching::MatchingResult;

/// Cap on edge count for exhaustive search; beyond it the oracle refuses.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimit {
    pub max_edges: usize,
}

impl OracleLimit {
    pub fn new(max_edges: usize) -> Self {
        Self { max_edges }
    }
}

impl Default for OracleLimit {
    fn default() -> Self {
        Self { max_edges: 24 }
    }
}

/// Exact maximum weighted matching. Ties between equal-weight optima break
/// toward the lexicographically smallest set of edge indices in row-major
/// order, so results are deterministic.
pub fn exact_mwm(g: &Graph, limit: &OracleLimit) -> Result<MatchingResult> {
    solve(g, limit, |e| e.w as u64)
}

/// Exact maximum cardinality matching: the same search with every weight
/// treated as 1. The returned edges keep their real weights; cardinality is
/// `result.size()`.
pub fn exact_mcm(g: &Graph, limit: &OracleLimit) -> Result<MatchingResult> {
    solve(g, limit, |_| 1)
}

/// Weighted approximation ratio w(M*)/w(approx), the ≥ 1 convention.
/// Defined as 1 when both weights are zero; +infinity when only the
/// approximation is zero.
pub fn ratio_mwm(approx: &MatchingResult, g: &Graph, limit: &OracleLimit) -> Result<f64> {
    let exact = exact_mwm(g, limit)?;
    Ok(if approx.total_weight == 0 {
        if exact.total_weight == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        exact.total_weight as f64 / approx.total_weight as f64
    })
}

fn solve(g: &Graph, limit: &OracleLimit, value: impl Fn(&WeightedEdge) -> u64) -> Result<MatchingResult> {
    let edges = g.edge_vec();
    if edges.len() > limit.max_edges {
        return Err(Error::OracleCap { m: edges.len(), cap: limit.max_edges });
    }
    // Two admissible bounds on what edges[i..] can still add: their total
    // value, and one maximal remaining value per matchable vertex pair.
    let mut suffix = vec![0u64; edges.len() + 1];
    let mut max_rest = vec![0u64; edges.len() + 1];
    for i in (0..edges.len()).rev() {
        suffix[i] = suffix[i + 1] + value(&edges[i]);
        max_rest[i] = max_rest[i + 1].max(value(&edges[i]));
    }
    let mut search = Search {
        edges: &edges,
        suffix: &suffix,
        max_rest: &max_rest,
        value: &value,
        occupied: VertexBits::new(g.n()),
        free_vertices: g.n(),
        chosen: Vec::new(),
        best_value: 0,
        best_set: Vec::new(),
    };
    search.recurse(0, 0);
    let picked: Vec<WeightedEdge> = search.best_set.iter().map(|&i| edges[i]).collect();
    MatchingResult::from_edges(g.n(), picked)
}

struct Search<'a, F: Fn(&WeightedEdge) -> u64> {
    edges: &'a [WeightedEdge],
    suffix: &'a [u64],
    max_rest: &'a [u64],
    value: &'a F,
    occupied: VertexBits,
    free_vertices: usize,
    chosen: Vec<usize>,
    best_value: u64,
    best_set: Vec<usize>,
}

impl<F: Fn(&WeightedEdge) -> u64> Search<'_, F> {
    fn recurse(&mut self, idx: usize, acc: u64) {
        // Each still-free vertex joins at most one more edge, so edges[idx..]
        // add at most ⌊free/2⌋ of the largest remaining value — and never
        // more than their sum. Strict inequality: equal-value branches stay
        // alive so the lexicographic tie-break sees every optimum.
        let capacity = (self.free_vertices / 2) as u64 * self.max_rest[idx];
        if acc + self.suffix[idx].min(capacity) < self.best_value {
            return;
        }
        if idx == self.edges.len() {
            if acc > self.best_value || (acc == self.best_value && self.chosen < self.best_set) {
                self.best_value = acc;
                self.best_set = self.chosen.clone();
            }
            return;
        }
        let e = self.edges[idx];
        if !self.occupied.get(e.u) && !self.occupied.get(e.v) {
            self.occupied.set(e.u);
            self.occupied.set(e.v);
            self.free_vertices -= 2;
            self.chosen.push(idx);
            self.recurse(idx + 1, acc + (self.value)(&e));
            self.chosen.pop();
            self.free_vertices += 2;
            self.occupied.clear(e.u);
            self.occupied.clear(e.v);
        }
        self.recurse(idx + 1, acc);
    }
}
