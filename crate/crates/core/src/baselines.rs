//! Streaming baselines the substream engine is measured against: greedy
//! maximal matching (½-approximate by cardinality) and the local-ratio
//! streaming matcher ((2+ε)-approximate by weight).

use crate::bits::VertexBits;
use crate::graph::WeightedEdge;
use crate::matching::MatchingResult;

/// Greedy maximal matching: accept every edge whose endpoints are both free.
/// Order-dependent, maximal with respect to the input stream, and at least
/// half the maximum cardinality.
///
/// # Panics
/// If an edge references a vertex outside 1..=n.
pub fn greedy_maximal(edges: &[WeightedEdge], n: usize) -> MatchingResult {
    let mut tbits = VertexBits::new(n);
    let mut picked = Vec::new();
    let mut total_weight = 0u64;
    for &e in edges {
        if !tbits.get(e.u) && !tbits.get(e.v) {
            tbits.set(e.u);
            tbits.set(e.v);
            total_weight += e.w as u64;
            picked.push(e);
        }
    }
    MatchingResult { edges: picked, total_weight, tbits }
}

/// Per-vertex dual potentials φ. They only ever grow, and an edge is worth
/// taking only by its surplus over φ_u + φ_v.
#[derive(Clone, Debug)]
pub struct PotentialTable {
    phi: Vec<f64>,
}

impl PotentialTable {
    fn new(n: usize) -> Self {
        Self { phi: vec![0.0; n] }
    }

    pub fn get(&self, v: u32) -> f64 {
        self.phi[v as usize - 1]
    }

    fn add(&mut self, v: u32, delta: f64) {
        debug_assert!(delta > 0.0);
        self.phi[v as usize - 1] += delta;
    }
}

/// One streaming pass of the local-ratio matcher plus its unwind.
///
/// Streaming rule for e = (u, v, w): if w > (1+ε)·(φ_u + φ_v), the surplus
/// gain = w − φ_u − φ_v is added to both potentials and the edge is pushed.
/// Popping the stack and keeping every edge whose endpoints are still free
/// yields a matching within 2+ε of the maximum weight.
pub struct LocalRatioPass {
    potentials: PotentialTable,
    stack: Vec<WeightedEdge>,
    threshold_factor: f64,
}

impl LocalRatioPass {
    pub fn new(n: usize, epsilon: f64) -> Self {
        assert!(epsilon >= 0.0 && epsilon.is_finite(), "epsilon must be a finite non-negative real");
        Self { potentials: PotentialTable::new(n), stack: Vec::new(), threshold_factor: 1.0 + epsilon }
    }

    /// Feeds one edge; returns whether it was pushed.
    ///
    /// # Panics
    /// If the edge references a vertex outside 1..=n.
    pub fn offer(&mut self, e: WeightedEdge) -> bool {
        let (pu, pv) = (self.potentials.get(e.u), self.potentials.get(e.v));
        if (e.w as f64) > self.threshold_factor * (pu + pv) {
            let gain = e.w as f64 - pu - pv;
            self.potentials.add(e.u, gain);
            self.potentials.add(e.v, gain);
            self.stack.push(e);
            true
        } else {
            false
        }
    }

    pub fn potential(&self, v: u32) -> f64 {
        self.potentials.get(v)
    }

    pub fn stack(&self) -> &[WeightedEdge] {
        &self.stack
    }

    /// Pops the stack (reverse push order), greedily keeping edges whose
    /// endpoints are unmatched.
    pub fn unwind(self) -> MatchingResult {
        let n = self.potentials.phi.len();
        let mut tbits = VertexBits::new(n);
        let mut edges = Vec::new();
        let mut total_weight = 0u64;
        for &e in self.stack.iter().rev() {
            if !tbits.get(e.u) && !tbits.get(e.v) {
                tbits.set(e.u);
                tbits.set(e.v);
                total_weight += e.w as u64;
                edges.push(e);
            }
        }
        MatchingResult { edges, total_weight, tbits }
    }
}

/// The full local-ratio baseline: stream, then unwind.
pub fn ghaffari_mwm(edges: &[WeightedEdge], epsilon: f64, n: usize) -> MatchingResult {
    let mut pass = LocalRatioPass::new(n, epsilon);
    for &e in edges {
        pass.offer(e);
    }
    pass.unwind()
}
