//! Streaming maximum-weighted-matching toolkit built around substream
//! decomposition: split an edge stream into L nested weight classes, run a
//! greedy matching per class in one pass, merge the per-class matchings into
//! a (4+ε)-approximate result.
//!
//! The crate bundles everything needed to study the approach end to end:
//!
//! * [`graph`] — compressed sparse rows with strictly sorted columns, plus
//!   text-edge-list ingestion and synthetic generators ([`gen`]).
//! * [`codec`] — the 64-byte-chunk interchange format for pointers, edges,
//!   and matching output, bit-exact and corruption-checked.
//! * [`engine`] — the matcher itself: simple, epoch-blocked, and
//!   per-substream-parallel variants sharing one matching step, plus the
//!   final merge.
//! * [`baselines`] — greedy maximal matching and the local-ratio (2+ε)
//!   streaming matcher, for comparison.
//! * [`oracle`] — exhaustive branch-and-bound ground truth on small graphs.
//! * [`traffic`] — chunk-granular memory-transfer counts for the blocked
//!   variant.

pub mod baselines;
mod bits;
pub mod codec;
pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod traffic;

pub use bits::VertexBits;
pub use error::{Error, Result};
pub use graph::{Graph, WeightedEdge};
pub use matching::MatchingResult;
