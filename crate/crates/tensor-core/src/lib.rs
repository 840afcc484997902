//! Dense real tensors with labelled, directed legs, plus contraction graphs
//! and matrix-product states built on them.
//!
//! Data is row-major over the leg order. Contraction pairs an `Out` leg with
//! an `In` leg of equal extent. Graph contraction picks a greedy elimination
//! order (smallest intermediate first); results do not depend on the order.

pub mod graph;
pub mod mps;
pub mod tensor;

pub use graph::{ContractionGraph, NodeId};
pub use mps::{Mps, MpsSite};
pub use tensor::{Dir, Leg, Tensor};

/// Refuse to materialise dense data above this entry count.
pub const MAX_DENSE_ENTRIES: usize = 200_000_000;

#[derive(Debug, thiserror::Error)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("tensor too large: {0} entries")]
    TooLarge(usize),
    #[error("bad leg: {0}")]
    BadLeg(String),
    #[error("bad graph: {0}")]
    BadGraph(String),
}

pub type Result<T> = std::result::Result<T, TensorError>;
