//! Deterministic graph generators: recursive-quadrant power-law sampling and
//! uniform random pairs, both seeded and platform-stable.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightedEdge};

/// Default ceiling on the n·L occupancy bit matrix a generated graph implies.
pub const DEFAULT_BIT_MATRIX_CAP_BITS: u128 = 1 << 33;

/// Recursive quadrant split used for the power-law generator.
const QUADRANTS: [f64; 3] = [0.57, 0.57 + 0.19, 0.57 + 0.19 + 0.19];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Kronecker,
    UniformRandom,
}

/// Generator parameters. `epsilon` and `substreams` fix the weight range
/// [1, floor((1+epsilon)^(substreams-1)) + 1] so drawn weights line up with
/// the engine's substream thresholds.
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub kind: GenKind,
    pub scale: u32,
    pub avg_degree: f64,
    pub epsilon: f64,
    pub substreams: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be positive and finite, got {}", self.epsilon)));
        }
        if self.substreams == 0 {
            return Err(Error::Config("substream count must be at least 1".into()));
        }
        if !(self.avg_degree >= 1.0) || !self.avg_degree.is_finite() {
            return Err(Error::Config(format!("avg_degree must be at least 1, got {}", self.avg_degree)));
        }
        Ok(())
    }
}

/// Upper end of the weight range: floor((1+epsilon)^(substreams-1)) + 1,
/// accumulated by repeated multiplication like the engine's thresholds.
pub fn weight_upper_bound(epsilon: f64, substreams: usize) -> Result<u32> {
    let mut top = 1.0f64;
    for _ in 1..substreams {
        top *= 1.0 + epsilon;
    }
    if !top.is_finite() || top >= u32::MAX as f64 {
        return Err(Error::Overflow(format!(
            "weight range for epsilon={epsilon}, substreams={substreams}"
        )));
    }
    Ok(top.floor() as u32 + 1)
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    generate_with_cap(spec, DEFAULT_BIT_MATRIX_CAP_BITS)
}

/// As [`generate`] with an explicit ceiling (in bits) on the implied n·L
/// occupancy matrix.
pub fn generate_with_cap(spec: &GenSpec, cap_bits: u128) -> Result<Graph> {
    spec.validate()?;
    if spec.scale >= 64 {
        return Err(Error::Capacity(format!("scale {} out of range", spec.scale)));
    }
    let n = 1u64 << spec.scale;
    let bits = n as u128 * spec.substreams as u128;
    if bits > cap_bits {
        return Err(Error::Capacity(format!(
            "occupancy matrix needs {bits} bits for n=2^{} and {} substreams, cap is {cap_bits}",
            spec.scale, spec.substreams
        )));
    }
    if n > u32::MAX as u64 {
        return Err(Error::Capacity(format!("vertex count 2^{} exceeds 32-bit ids", spec.scale)));
    }

    let target = (spec.avg_degree * n as f64).round() as u64;
    let max_pairs = n * (n - 1) / 2;
    if target > max_pairs {
        return Err(Error::Density { target: target as usize, got: max_pairs as usize });
    }
    let w_top = weight_upper_bound(spec.epsilon, spec.substreams)?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen: HashSet<u64> = HashSet::with_capacity(target as usize * 2);
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(target as usize);
    let budget = target.saturating_mul(50) + 1000;
    let mut attempts = 0u64;
    while (pairs.len() as u64) < target {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Density { target: target as usize, got: pairs.len() });
        }
        let (a, b) = match spec.kind {
            GenKind::Kronecker => sample_quadrants(&mut rng, spec.scale),
            GenKind::UniformRandom => (rng.gen_range(0..n), rng.gen_range(0..n)),
        };
        if a == b {
            continue;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if seen.insert(lo << 32 | hi) {
            pairs.push((lo as u32 + 1, hi as u32 + 1));
        }
    }

    // Weights are drawn in sorted edge order so results depend only on the
    // edge set, not on sampling history.
    pairs.sort_unstable();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| WeightedEdge::new(u, v, rng.gen_range(1..=w_top)));
    Graph::from_edges(n as usize, edges)
}

fn sample_quadrants(rng: &mut ChaCha8Rng, scale: u32) -> (u64, u64) {
    let mut r = 0u64;
    let mut c = 0u64;
    for _ in 0..scale {
        let x: f64 = rng.gen();
        let (dr, dc) = if x < QUADRANTS[0] {
            (0, 0)
        } else if x < QUADRANTS[1] {
            (0, 1)
        } else if x < QUADRANTS[2] {
            (1, 0)
        } else {
            (1, 1)
        };
        r = r << 1 | dr;
        c = c << 1 | dc;
    }
    (r, c)
}
