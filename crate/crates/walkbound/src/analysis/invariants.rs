//! Checks that hold at every step of a walk.

use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::walk::{Policy, TieBreaker, Walk, WalkError, WalkState};

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    #[error(
        "frequency lemma fails at t={t}: g={g}, degree={degree}, {above} neighbors at >= {floor}+1 (need {needed}), lowest neighbor {lowest}"
    )]
    Lemma {
        t: u64,
        g: u64,
        degree: u64,
        floor: u64,
        above: u64,
        needed: u64,
        lowest: u64,
    },
    #[error("max frequency {max_freq} exceeds bound {bound} at t={t}")]
    DeltaD { t: u64, max_freq: u64, bound: u64 },
    #[error("counters do not sum to t={t}: nodes {node_sum}, edges {edge_sum}")]
    Conservation {
        t: u64,
        node_sum: u64,
        edge_sum: u64,
    },
}

/// With `g` visits at `s` and degree `delta`, every neighbor has at least
/// `g / delta` visits and at least `g % delta` of them have one more.
pub fn check_frequency_lemma(g: &Graph, state: &WalkState, s: NodeId) -> Result<(), Violation> {
    let degree = g.degree(s) as u64;
    if degree == 0 {
        return Ok(());
    }
    let gs = state.node_freq[s.index()];
    let (floor, needed) = (gs / degree, gs % degree);
    let mut above = 0;
    let mut lowest = u64::MAX;
    for inc in g.incidences(s) {
        let f = state.node_freq[inc.neighbor.index()];
        lowest = lowest.min(f);
        if f > floor {
            above += 1;
        }
    }
    if above >= needed && lowest >= floor {
        Ok(())
    } else {
        Err(Violation::Lemma {
            t: state.t,
            g: gs,
            degree,
            floor,
            above,
            needed,
            lowest,
        })
    }
}

/// `delta^d`, saturating at `u64::MAX`.
pub fn delta_d_bound(max_degree: usize, diameter: usize) -> u64 {
    let d = u32::try_from(diameter).unwrap_or(u32::MAX);
    (max_degree as u64).checked_pow(d).unwrap_or(u64::MAX)
}

pub fn check_delta_d_bound(state: &WalkState, bound: u64) -> Result<(), Violation> {
    let max_freq = state.max_node_freq();
    if max_freq <= bound {
        Ok(())
    } else {
        Err(Violation::DeltaD {
            t: state.t,
            max_freq,
            bound,
        })
    }
}

pub fn check_conservation(state: &WalkState) -> Result<(), Violation> {
    let node_sum: u64 = state.node_freq.iter().sum();
    let edge_sum: u64 = state.edge_freq.iter().sum();
    if node_sum == state.t && edge_sum == state.t {
        Ok(())
    } else {
        Err(Violation::Conservation {
            t: state.t,
            node_sum,
            edge_sum,
        })
    }
}

/// True when `s` has exactly `k * delta` visits and at least `delta - 1` of
/// its neighbors have exactly `k`.
pub fn ratio_state_reached(g: &Graph, state: &WalkState, s: NodeId, k: u64) -> bool {
    let delta = g.degree(s) as u64;
    if state.node_freq[s.index()] != k * delta {
        return false;
    }
    let at_k = g
        .incidences(s)
        .iter()
        .filter(|i| state.node_freq[i.neighbor.index()] == k)
        .count() as u64;
    at_k + 1 >= delta
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatencyCheck<T> {
    pub max_latency: u64,
    pub n: usize,
    pub diameter: usize,
    pub constant: T,
    /// `max_latency / (n * d)`
    pub ratio: T,
    pub pass: bool,
}

/// Compares the largest latency against `constant * n * d`.
pub fn check_latency<T: Float>(
    latency: &[u64],
    n: usize,
    diameter: usize,
    constant: T,
) -> LatencyCheck<T> {
    let max_latency = latency.iter().copied().max().unwrap_or(0);
    let nd = T::from(n * diameter.max(1)).expect("fits");
    let ratio = T::from(max_latency).expect("fits") / nd;
    LatencyCheck {
        max_latency,
        n,
        diameter,
        constant,
        ratio,
        pass: ratio <= constant,
    }
}

/// Result of stepping a walk while checking invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub steps: u64,
    pub cover_time: Option<u64>,
    pub lemma_checks: u64,
    pub bound_checks: u64,
    pub violations: Vec<Violation>,
}

impl Audit {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs until covered or `cap` moves. Conservation is checked at every step.
/// For LFV-v the frequency lemma at `start` is checked at every step and the
/// `delta^d` bound at every step before coverage. Only the first violation of
/// each kind is kept.
pub fn audit(
    g: &Graph,
    policy: Policy,
    tb: TieBreaker,
    start: NodeId,
    cap: u64,
) -> Result<Audit, WalkError> {
    let stats = g.stats();
    let bound = delta_d_bound(stats.max_degree, stats.diameter);
    let mut w = Walk::new(g, policy, tb, start)?;
    let mut out = Audit {
        steps: 0,
        cover_time: None,
        lemma_checks: 0,
        bound_checks: 0,
        violations: Vec::new(),
    };
    let mut seen = [false; 3];
    let mut note = |v: Violation, out: &mut Audit| {
        let slot = match v {
            Violation::Lemma { .. } => 0,
            Violation::DeltaD { .. } => 1,
            Violation::Conservation { .. } => 2,
        };
        if !seen[slot] {
            seen[slot] = true;
            out.violations.push(v);
        }
    };
    let lfv_v = policy == Policy::LfvV;
    loop {
        let s = w.state();
        if let Err(v) = check_conservation(s) {
            note(v, &mut out);
        }
        if lfv_v {
            out.lemma_checks += 1;
            if let Err(v) = check_frequency_lemma(g, s, start) {
                note(v, &mut out);
            }
            if !w.is_covered() {
                out.bound_checks += 1;
                if let Err(v) = check_delta_d_bound(s, bound) {
                    note(v, &mut out);
                }
            }
        }
        if w.is_covered() || s.t >= cap {
            break;
        }
        w.step()?;
    }
    out.steps = w.state().t;
    out.cover_time = w.cover_time();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::Priorities;

    fn star(k: u32) -> Graph {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::new(k as usize + 1, &edges).unwrap()
    }

    #[test]
    fn lemma_trivial_at_zero() {
        let g = star(3);
        let s = WalkState::new(&g, NodeId(0));
        assert!(check_frequency_lemma(&g, &s, NodeId(0)).is_ok());
    }

    #[test]
    fn lemma_on_star_after_four_moves() {
        let g = star(3);
        let tb = TieBreaker::StaticPriority(Priorities::lowest_index(&g));
        let mut w = Walk::new(&g, Policy::LfvV, tb, NodeId(0)).unwrap();
        w.run_steps(4).unwrap();
        assert_eq!(w.state().node_freq[0], 2);
        assert!(check_frequency_lemma(&g, w.state(), NodeId(0)).is_ok());
    }

    #[test]
    fn lemma_detects_a_forged_state() {
        let g = star(3);
        let mut s = WalkState::new(&g, NodeId(0));
        s.node_freq[0] = 2;
        s.node_freq[1] = 2;
        assert!(matches!(
            check_frequency_lemma(&g, &s, NodeId(0)),
            Err(Violation::Lemma {
                above: 1,
                needed: 2,
                ..
            })
        ));
    }

    #[test]
    fn delta_d_on_single_edge() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let s = WalkState::new(&g, NodeId(0));
        assert_eq!(delta_d_bound(1, 1), 1);
        assert!(check_delta_d_bound(&s, 1).is_ok());
        assert_eq!(delta_d_bound(10, 100), u64::MAX);
    }

    #[test]
    fn conservation_detects_tampering() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let mut s = WalkState::new(&g, NodeId(0));
        assert!(check_conservation(&s).is_ok());
        s.advance(g.incidences(NodeId(0))[0]).unwrap();
        assert!(check_conservation(&s).is_ok());
        s.node_freq[0] += 1;
        assert!(check_conservation(&s).is_err());
    }

    #[test]
    fn latency_on_four_cycle() {
        use crate::analysis::metrics::metrics;
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (trace, _) =
            crate::walk::run_steps(&g, Policy::LfvE, TieBreaker::LowestIndex, NodeId(0), 400)
                .unwrap();
        let m = metrics(&trace, &g, Some(200));
        let check = check_latency(m.latency.as_deref().unwrap(), 4, 2, 16.0);
        assert!(check.pass);
        assert!(check.max_latency <= 16 * 4 * 2);
        assert_eq!(check.ratio, check.max_latency as f64 / 8.0);
    }

    #[test]
    fn audit_reports_clean_star() {
        let g = star(4);
        let a = audit(&g, Policy::LfvV, TieBreaker::LowestIndex, NodeId(0), 100).unwrap();
        assert!(a.clean());
        assert_eq!(a.cover_time, Some(7));
        assert_eq!(a.lemma_checks, 8);
    }
}
