//! Solver library for the Induced Disjoint Paths problem on claw-free graphs.
//!
//! The pipeline reduces an instance to an independent one (vertex/edge removal
//! rules), strips twins and proper W-joins, solves proper circular-arc and
//! general circular-arc instances directly from an arc representation, and
//! otherwise branches a strip structure into a set of line-graph instances
//! that are finished through the preimage and an exact disjoint-paths search.
//!
//! Exact brute-force reference solvers live in [`oracle`]; every YES answer
//! produced by the faster paths carries a certificate that is re-verified
//! against the original input.

pub mod circarc;
pub mod derived;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod pipeline;
pub mod reduce;
pub mod strips;

pub use graph::{Graph, VertexId};
pub use instance::{Instance, Solution};
