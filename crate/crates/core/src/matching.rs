//! The merged-matching output shared by engines, baselines, and oracles.

use crate::bits::VertexBits;
use crate::error::{Error, Result};
use crate::graph::WeightedEdge;

/// A matching plus its weight and vertex-occupancy bits.
///
/// Producers guarantee the invariants: `edges` are pairwise vertex-disjoint,
/// `total_weight` is their weight sum, and `tbits` has exactly the endpoints
/// set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingResult {
    pub edges: Vec<WeightedEdge>,
    pub total_weight: u64,
    pub tbits: VertexBits,
}

impl MatchingResult {
    pub fn empty(n: usize) -> Self {
        Self { edges: Vec::new(), total_weight: 0, tbits: VertexBits::new(n) }
    }

    /// Builds from explicit edges over vertices `1..=n`, verifying they form
    /// a matching.
    pub fn from_edges(n: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        let mut tbits = VertexBits::new(n);
        let mut total = 0u64;
        for e in &edges {
            for id in [e.u, e.v] {
                if id == 0 || id as usize > n {
                    return Err(Error::VertexRange { id: id as u64, max: n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { u: e.u });
            }
            if tbits.get(e.u) || tbits.get(e.v) {
                return Err(Error::DuplicateEdge { u: e.u, v: e.v });
            }
            tbits.set(e.u);
            tbits.set(e.v);
            total += e.w as u64;
        }
        Ok(Self { edges, total_weight: total, tbits })
    }

    /// Number of matched edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}
