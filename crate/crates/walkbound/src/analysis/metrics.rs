use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::Graph;
use crate::walk::Trace;

/// Summary of a recorded walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunMetrics {
    pub cover_time: Option<u64>,
    pub steps: u64,
    pub max_freq: u64,
    /// Maximum gap between consecutive visits per node over the trailing
    /// window; `None` when the window does not fit in the trace or the walk
    /// never covered the graph.
    pub latency: Option<Vec<u64>>,
    pub window: Option<u64>,
    /// Frequency value to number of nodes with that frequency.
    pub histogram: BTreeMap<u64, u64>,
}

impl RunMetrics {
    pub fn covered(&self) -> bool {
        self.cover_time.is_some()
    }

    pub fn max_latency(&self) -> Option<u64> {
        self.latency.as_ref().and_then(|l| l.iter().copied().max())
    }
}

/// Default latency window: four times the cover time.
pub const DEFAULT_WINDOW_FACTOR: u64 = 4;

/// Computes metrics from a trace. With `window = None` the latency window is
/// [`DEFAULT_WINDOW_FACTOR`] times the cover time.
pub fn metrics(trace: &Trace, g: &Graph, window: Option<u64>) -> RunMetrics {
    let n = g.node_count();
    let steps = trace.moves.len() as u64;
    let mut freq = vec![0u64; n];
    let mut visits: Vec<Vec<u64>> = vec![Vec::new(); n];
    visits[trace.start.index()].push(0);
    let mut unseen = n - 1;
    let mut seen = vec![false; n];
    seen[trace.start.index()] = true;
    let mut cover_time = if unseen == 0 { Some(0) } else { None };
    for (i, m) in trace.moves.iter().enumerate() {
        let t = i as u64 + 1;
        let v = m.dest.index();
        freq[v] += 1;
        visits[v].push(t);
        if !seen[v] {
            seen[v] = true;
            unseen -= 1;
            if unseen == 0 {
                cover_time = Some(t);
            }
        }
    }
    let window = window.or_else(|| cover_time.map(|c| c * DEFAULT_WINDOW_FACTOR));
    let latency = match (cover_time, window) {
        (Some(_), Some(w)) if w <= steps => Some(
            visits
                .iter()
                .map(|vs| latency_of(vs, steps - w, steps))
                .collect(),
        ),
        _ => None,
    };
    let mut histogram = BTreeMap::new();
    for &f in &freq {
        *histogram.entry(f).or_insert(0) += 1;
    }
    RunMetrics {
        cover_time,
        steps,
        max_freq: freq.iter().copied().max().unwrap_or(0),
        latency,
        window,
        histogram,
    }
}

/// Largest gap ending inside `(from, to]`, counting the open gap up to `to`.
fn latency_of(visits: &[u64], from: u64, to: u64) -> u64 {
    let mut best = to - visits.last().copied().unwrap_or(0);
    for w in visits.windows(2) {
        if w[1] > from {
            best = best.max(w[1] - w[0]);
        }
    }
    best
}
