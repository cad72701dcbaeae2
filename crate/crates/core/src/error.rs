use thiserror::Error;

/// Crate-wide error type; variants map one-to-one onto the failure classes of
/// the public contracts (parse, range, config, capacity, corruption, oracle
/// refusal, generator density).
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex id {id} out of range [1, {max}]")]
    VertexRange { id: u64, max: usize },

    #[error("self-loop at vertex {u}")]
    SelfLoop { u: u32 },

    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: u32, v: u32 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("value overflows a 32-bit field: {0}")]
    Overflow(String),

    #[error("corrupt chunk image: {0}")]
    Corrupt(String),

    #[error("exact search refused: {m} edges exceeds the oracle cap of {cap}")]
    OracleCap { m: usize, cap: usize },

    #[error("generator could not reach {target} unique edges (got {got})")]
    Density { target: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
