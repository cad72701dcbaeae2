//! Shared proptest strategies for graph-shaped inputs.
#![allow(dead_code)]

use proptest::prelude::*;
use substream_mwm::{Graph, WeightedEdge};

/// Random simple graph: up to `max_n` vertices, each possible edge present
/// with probability ~0.4 carrying a weight in 1..=max_w.
pub fn arb_graph(max_n: usize, max_w: u32) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(u32, u32)> = (1..=n as u32)
            .flat_map(|u| ((u + 1)..=n as u32).map(move |v| (u, v)))
            .collect();
        let len = pairs.len();
        proptest::collection::vec(proptest::option::weighted(0.4, 1..=max_w), len).prop_map(
            move |slots| {
                let edges = pairs
                    .iter()
                    .zip(&slots)
                    .filter_map(|(&(u, v), w)| w.map(|w| WeightedEdge::new(u, v, w)));
                Graph::from_edges(n, edges).expect("generated pairs are unique and in range")
            },
        )
    })
}

/// A graph plus a shuffled copy of its edges, for order-sensitivity checks.
pub fn arb_graph_and_stream(
    max_n: usize,
    max_w: u32,
) -> impl Strategy<Value = (Graph, Vec<WeightedEdge>)> {
    arb_graph(max_n, max_w).prop_flat_map(|g| {
        let edges = g.edge_vec();
        (Just(g), Just(edges).prop_shuffle())
    })
}
