//! Metrics, invariant checks, caterpillar pass analysis and growth fits.

pub mod caterpillar;
pub mod fit;
pub mod invariants;
pub mod metrics;

use serde::Serialize;

use crate::generators::{Family, GeneratedInstance, LRV_GADGET_ENTRY};
use crate::graph::NodeId;
use crate::walk::{Policy, TieBreaker, Walk, WalkError};

/// Return times of LRV-v on an `lrv_v_chain` instance.
///
/// Entry `i - 1` is the time of the first return to the start after the
/// walker first reaches gadget `i` (for `i` in `1..k`) or the final target
/// (for `i = k`). Entries stay `None` if the budget runs out first.
pub fn chain_cycle_times(
    inst: &GeneratedInstance,
    step_cap: u64,
) -> Result<Vec<Option<u64>>, WalkError> {
    let k = inst.param("k").unwrap_or(1) as u32;
    let mut markers: Vec<NodeId> = (1..k).map(|i| NodeId(9 * i + LRV_GADGET_ENTRY)).collect();
    markers.push(NodeId(9 * k));
    let mut reached = vec![false; markers.len()];
    let mut pending = Vec::new();
    let mut times = vec![None; markers.len()];
    let mut w = Walk::new(&inst.graph, Policy::LrvV, inst.tiebreaker(), inst.start)?;
    while times.iter().any(Option::is_none) && w.state().t < step_cap {
        let m = w.step()?;
        if let Some(i) = markers.iter().position(|&x| x == m.dest) {
            if !reached[i] {
                reached[i] = true;
                pending.push(i);
            }
        }
        if m.dest == inst.start {
            for i in pending.drain(..) {
                times[i] = Some(w.state().t);
            }
        }
    }
    Ok(times)
}

/// How ties are broken in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieSpec {
    /// The instance's bundled priorities.
    Bundled,
    LowestIndex,
    /// Seeded random; repeat `r` uses `seed + r`.
    Random {
        seed: u64,
    },
}

impl TieSpec {
    pub fn build(self, inst: &GeneratedInstance, repeat: u64) -> TieBreaker {
        match self {
            TieSpec::Bundled => inst.tiebreaker(),
            TieSpec::LowestIndex => TieBreaker::LowestIndex,
            TieSpec::Random { seed } => TieBreaker::seeded(seed.wrapping_add(repeat)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TieSpec::Bundled => "static-priority",
            TieSpec::LowestIndex => "lowest-index",
            TieSpec::Random { .. } => "seeded-random",
        }
    }
}

/// One row of a sweep CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub d: usize,
    pub policy: String,
    pub tiebreak: String,
    pub seed: Option<u64>,
    pub cover_time: Option<u64>,
    pub max_freq: u64,
    pub max_latency: Option<u64>,
}

/// Runs `inst` until covered (or `step_cap`), then keeps going for
/// `window_factor` times the cover time to measure latency.
pub fn sweep_row(
    inst: &GeneratedInstance,
    policy: Policy,
    tie: TieSpec,
    repeat: u64,
    step_cap: u64,
    window_factor: u64,
) -> Result<SweepRow, WalkError> {
    let tb = tie.build(inst, repeat);
    let seed = tb.seed();
    let mut w = Walk::new(&inst.graph, policy, tb, inst.start)?.recording();
    let report = w.run_until_covered(step_cap)?;
    let max_freq = report.max_freq;
    let mut max_latency = None;
    if let Some(c) = report.cover_time {
        let window = c.saturating_mul(window_factor);
        if window > 0 {
            w.run_steps(window)?;
            max_latency = metrics::metrics(&w.trace(), &inst.graph, Some(window)).max_latency();
        }
    }
    let stats = inst.graph.stats();
    Ok(SweepRow {
        family: if inst.family == Family::Custom {
            "custom".into()
        } else {
            inst.family.to_string()
        },
        n: inst.graph.node_count(),
        m: inst.graph.edge_count(),
        delta: stats.max_degree,
        d: stats.diameter,
        policy: policy.to_string(),
        tiebreak: tie.name().into(),
        seed,
        cover_time: report.cover_time,
        max_freq,
        max_latency,
    })
}
