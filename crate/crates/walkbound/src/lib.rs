//! Deterministic simulator and verification harness for local graph
//! exploration policies (LRV-v, LRV-e, LFV-v, LFV-e).
//!
//! * [`graph`]: validated undirected multigraphs.
//! * [`walk`]: the walk engine, counters and tie-breakers.
//! * [`generators`]: adversarial instance families with bundled priorities.
//! * [`oracle`]: exhaustive worst case over tie-break choices.
//! * [`analysis`]: metrics, invariant checks, degree tables and growth fits.
//! * [`io`]: JSON formats for graphs, traces and metrics.
//! * [`verify`]: named check suites producing verdicts.

pub mod analysis;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod verify;
pub mod walk;

pub use graph::{EdgeId, Graph, GraphError, GraphStats, Incidence, NodeId};
pub use walk::{Move, Policy, Priorities, TieBreaker, Trace, Walk, WalkError, WalkState};

/// Growth fit over `f64`, the precision used throughout the harness.
pub type GrowthFit = analysis::fit::GrowthFit<f64>;
/// Latency verdict over `f64`.
pub type LatencyCheck = analysis::invariants::LatencyCheck<f64>;
