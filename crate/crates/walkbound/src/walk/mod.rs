//! Single-agent walk under one of the four local policies.
//!
//! The walker scores every incidence of its current node, keeps the ones
//! with the minimum score and lets a [`TieBreaker`] pick among them. All four
//! counter families are maintained on every step regardless of the policy, so
//! a single run can be audited against any of them.
//!
//! The initial placement is not a visit: the start node begins with
//! frequency 0 and last-visit time 0.

mod tiebreak;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Incidence, NodeId};

pub use tiebreak::{Priorities, PriorityError, TieBreaker};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Policy {
    #[serde(rename = "lrv-v")]
    LrvV,
    #[serde(rename = "lrv-e")]
    LrvE,
    #[serde(rename = "lfv-v")]
    LfvV,
    #[serde(rename = "lfv-e")]
    LfvE,
}

impl Policy {
    pub const ALL: [Policy; 4] = [Policy::LrvV, Policy::LrvE, Policy::LfvV, Policy::LfvE];

    /// True for the two policies that score edges rather than nodes.
    pub fn scores_edges(self) -> bool {
        matches!(self, Policy::LrvE | Policy::LfvE)
    }

    /// True for the two policies that score visit counts.
    pub fn scores_frequency(self) -> bool {
        matches!(self, Policy::LfvV | Policy::LfvE)
    }

    pub fn name(self) -> &'static str {
        match self {
            Policy::LrvV => "lrv-v",
            Policy::LrvE => "lrv-e",
            Policy::LfvV => "lfv-v",
            Policy::LfvE => "lfv-e",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown policy `{0}` (expected lrv-v, lrv-e, lfv-v or lfv-e)")]
pub struct UnknownPolicy(pub String);

impl FromStr for Policy {
    type Err = UnknownPolicy;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lrv-v" => Ok(Policy::LrvV),
            "lrv-e" => Ok(Policy::LrvE),
            "lfv-v" => Ok(Policy::LfvV),
            "lfv-e" => Ok(Policy::LfvE),
            _ => Err(UnknownPolicy(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("start node {start} is not in the graph")]
    BadStart { start: u32 },
    #[error("node {node} has no incident edges")]
    Stuck { node: u32 },
    #[error("scripted choices ran out at step {step}")]
    ScriptExhausted { step: u64 },
    #[error("scripted move at step {step} (edge {edge} to node {dest}) is not a minimum-score candidate")]
    ScriptMismatch { step: u64, edge: u32, dest: u32 },
    #[error("counter overflow at step {step}")]
    CounterOverflow { step: u64 },
}

/// One move: the edge traversed and the node arrived at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct Move {
    pub edge: EdgeId,
    pub dest: NodeId,
}

impl From<(u32, u32)> for Move {
    fn from((e, v): (u32, u32)) -> Self {
        Move {
            edge: EdgeId(e),
            dest: NodeId(v),
        }
    }
}

impl From<Move> for (u32, u32) {
    fn from(m: Move) -> Self {
        (m.edge.0, m.dest.0)
    }
}

impl From<Incidence> for Move {
    fn from(i: Incidence) -> Self {
        Move {
            edge: i.edge,
            dest: i.neighbor,
        }
    }
}

/// Counters of a walk in progress. `None` in a last-visit slot means the
/// node or edge has never been visited; it is older than every timestamp.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkState {
    pub current: NodeId,
    pub t: u64,
    pub node_last: Vec<Option<u64>>,
    pub node_freq: Vec<u64>,
    pub edge_last: Vec<Option<u64>>,
    pub edge_freq: Vec<u64>,
}

#[inline]
fn age_key(last: Option<u64>) -> u64 {
    // NEVER sorts below timestamp 0; t never reaches u64::MAX.
    last.map_or(0, |x| x + 1)
}

impl WalkState {
    pub fn new(g: &Graph, start: NodeId) -> Self {
        let mut node_last = vec![None; g.node_count()];
        node_last[start.index()] = Some(0);
        WalkState {
            current: start,
            t: 0,
            node_last,
            node_freq: vec![0; g.node_count()],
            edge_last: vec![None; g.edge_count()],
            edge_freq: vec![0; g.edge_count()],
        }
    }

    #[inline]
    pub fn score(&self, policy: Policy, inc: Incidence) -> u64 {
        match policy {
            Policy::LrvV => age_key(self.node_last[inc.neighbor.index()]),
            Policy::LrvE => age_key(self.edge_last[inc.edge.index()]),
            Policy::LfvV => self.node_freq[inc.neighbor.index()],
            Policy::LfvE => self.edge_freq[inc.edge.index()],
        }
    }

    /// Adjacency positions at the current node whose score is minimal.
    pub fn candidate_slots(&self, g: &Graph, policy: Policy, out: &mut Vec<usize>) {
        out.clear();
        let mut best = u64::MAX;
        for (slot, &inc) in g.incidences(self.current).iter().enumerate() {
            let s = self.score(policy, inc);
            if s < best {
                best = s;
                out.clear();
            }
            if s == best {
                out.push(slot);
            }
        }
    }

    pub fn candidates(&self, g: &Graph, policy: Policy) -> Vec<Incidence> {
        let mut slots = Vec::new();
        self.candidate_slots(g, policy, &mut slots);
        let adj = g.incidences(self.current);
        slots.into_iter().map(|s| adj[s]).collect()
    }

    /// Moves along `inc` and updates every counter family.
    pub fn advance(&mut self, inc: Incidence) -> Result<(), WalkError> {
        let step = self.t;
        let overflow = WalkError::CounterOverflow { step };
        let t = self
            .t
            .checked_add(1)
            .filter(|&t| t < u64::MAX)
            .ok_or(overflow.clone())?;
        let v = inc.neighbor.index();
        let e = inc.edge.index();
        self.node_freq[v] = self.node_freq[v].checked_add(1).ok_or(overflow.clone())?;
        self.edge_freq[e] = self.edge_freq[e].checked_add(1).ok_or(overflow)?;
        self.node_last[v] = Some(t);
        self.edge_last[e] = Some(t);
        self.t = t;
        self.current = inc.neighbor;
        Ok(())
    }

    pub fn max_node_freq(&self) -> u64 {
        self.node_freq.iter().copied().max().unwrap_or(0)
    }
}

/// Recorded walk. Serializes to a JSON list of `[edge_id, dest_node]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub start: NodeId,
    pub policy: Policy,
    pub tiebreak: String,
    pub moves: Vec<Move>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("move {index}: edge {edge} does not exist")]
    NoSuchEdge { index: usize, edge: u32 },
    #[error("move {index}: edge {edge} is not incident to node {at} or does not lead to {dest}")]
    NotIncident {
        index: usize,
        edge: u32,
        at: u32,
        dest: u32,
    },
}

impl Trace {
    /// Checks that consecutive moves form a walk from `start`.
    pub fn validate(&self, g: &Graph) -> Result<(), TraceError> {
        let mut at = self.start;
        for (index, m) in self.moves.iter().enumerate() {
            if m.edge.index() >= g.edge_count() {
                return Err(TraceError::NoSuchEdge {
                    index,
                    edge: m.edge.0,
                });
            }
            let (a, b) = g.endpoints(m.edge);
            let ok = (a == at && b == m.dest) || (b == at && a == m.dest);
            if !ok {
                return Err(TraceError::NotIncident {
                    index,
                    edge: m.edge.0,
                    at: at.0,
                    dest: m.dest.0,
                });
            }
            at = m.dest;
        }
        Ok(())
    }
}

/// Outcome of a bounded run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub cover_time: Option<u64>,
    pub steps: u64,
    pub max_freq: u64,
    pub unvisited: Vec<NodeId>,
}

impl RunReport {
    pub fn covered(&self) -> bool {
        self.cover_time.is_some()
    }
}

/// A walk in progress on a borrowed graph.
#[derive(Debug, Clone)]
pub struct Walk<'g> {
    graph: &'g Graph,
    policy: Policy,
    tiebreak: TieBreaker,
    state: WalkState,
    start: NodeId,
    visited: Vec<bool>,
    unvisited: usize,
    cover_time: Option<u64>,
    trace: Option<Vec<Move>>,
    slots: Vec<usize>,
}

impl<'g> Walk<'g> {
    pub fn new(
        graph: &'g Graph,
        policy: Policy,
        tiebreak: TieBreaker,
        start: NodeId,
    ) -> Result<Self, WalkError> {
        if !graph.contains(start) {
            return Err(WalkError::BadStart { start: start.0 });
        }
        let mut visited = vec![false; graph.node_count()];
        visited[start.index()] = true;
        let unvisited = graph.node_count() - 1;
        Ok(Walk {
            graph,
            policy,
            tiebreak,
            state: WalkState::new(graph, start),
            start,
            visited,
            unvisited,
            cover_time: if unvisited == 0 { Some(0) } else { None },
            trace: None,
            slots: Vec::new(),
        })
    }

    /// Keep every move so that [`Walk::trace`] can return it.
    pub fn recording(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    pub fn visited(&self) -> &[bool] {
        &self.visited
    }

    pub fn is_covered(&self) -> bool {
        self.unvisited == 0
    }

    pub fn cover_time(&self) -> Option<u64> {
        self.cover_time
    }

    pub fn candidates(&self) -> Vec<Incidence> {
        self.state.candidates(self.graph, self.policy)
    }

    pub fn step(&mut self) -> Result<Move, WalkError> {
        let at = self.state.current;
        if self.graph.degree(at) == 0 {
            return Err(WalkError::Stuck { node: at.0 });
        }
        self.state
            .candidate_slots(self.graph, self.policy, &mut self.slots);
        let slot = self
            .tiebreak
            .choose(self.graph, at, &self.slots, self.state.t)?;
        let inc = self.graph.incidences(at)[slot];
        self.state.advance(inc)?;
        let v = inc.neighbor.index();
        if !self.visited[v] {
            self.visited[v] = true;
            self.unvisited -= 1;
            if self.unvisited == 0 {
                self.cover_time = Some(self.state.t);
            }
        }
        let mv = Move::from(inc);
        if let Some(tr) = self.trace.as_mut() {
            tr.push(mv);
        }
        Ok(mv)
    }

    /// Steps until every node is visited or `cap` moves have been made.
    pub fn run_until_covered(&mut self, cap: u64) -> Result<RunReport, WalkError> {
        while !self.is_covered() && self.state.t < cap {
            self.step()?;
        }
        Ok(self.report())
    }

    /// Makes exactly `moves` further moves.
    pub fn run_steps(&mut self, moves: u64) -> Result<RunReport, WalkError> {
        for _ in 0..moves {
            self.step()?;
        }
        Ok(self.report())
    }

    pub fn report(&self) -> RunReport {
        RunReport {
            cover_time: self.cover_time,
            steps: self.state.t,
            max_freq: self.state.max_node_freq(),
            unvisited: self
                .visited
                .iter()
                .enumerate()
                .filter(|(_, &v)| !v)
                .map(|(i, _)| NodeId(i as u32))
                .collect(),
        }
    }

    /// Recorded moves; empty unless the walk was built with [`Walk::recording`].
    pub fn trace(&self) -> Trace {
        Trace {
            start: self.start,
            policy: self.policy,
            tiebreak: self.tiebreak.describe(),
            moves: self.trace.clone().unwrap_or_default(),
        }
    }

    pub fn into_parts(self) -> (WalkState, Option<Vec<Move>>) {
        (self.state, self.trace)
    }
}

/// Runs from `start` until covered or `cap` moves, recording the trace.
pub fn run_until_covered(
    g: &Graph,
    policy: Policy,
    tiebreak: TieBreaker,
    start: NodeId,
    cap: u64,
) -> Result<(Trace, RunReport), WalkError> {
    let mut w = Walk::new(g, policy, tiebreak, start)?.recording();
    let report = w.run_until_covered(cap)?;
    Ok((w.trace(), report))
}

/// Runs exactly `moves` moves from `start`, recording the trace.
pub fn run_steps(
    g: &Graph,
    policy: Policy,
    tiebreak: TieBreaker,
    start: NodeId,
    moves: u64,
) -> Result<(Trace, RunReport), WalkError> {
    let mut w = Walk::new(g, policy, tiebreak, start)?.recording();
    let report = w.run_steps(moves)?;
    Ok((w.trace(), report))
}

/// Replays `trace` with a scripted tie-breaker and returns the final state.
pub fn replay(g: &Graph, trace: &Trace) -> Result<WalkState, WalkError> {
    let mut w = Walk::new(
        g,
        trace.policy,
        TieBreaker::scripted(trace.moves.clone()),
        trace.start,
    )?;
    w.run_steps(trace.moves.len() as u64)?;
    Ok(w.state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n as usize, &edges).unwrap()
    }

    fn star(leaves: u32) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves as usize + 1, &edges).unwrap()
    }

    #[test]
    fn policy_names_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.name().parse::<Policy>().unwrap(), p);
        }
        assert!("lru".parse::<Policy>().is_err());
    }

    #[test]
    fn zero_state_star_offers_every_leaf() {
        let g = star(4);
        let s = WalkState::new(&g, NodeId(0));
        assert_eq!(s.candidates(&g, Policy::LfvV).len(), 4);
    }

    #[test]
    fn never_visited_is_oldest() {
        let g = path(3);
        let mut s = WalkState::new(&g, NodeId(1));
        s.node_last[0] = Some(1);
        s.node_last[1] = Some(1);
        let c = s.candidates(&g, Policy::LrvV);
        assert_eq!(
            c.iter().map(|i| i.neighbor).collect::<Vec<_>>(),
            vec![NodeId(2)]
        );
        // timestamp 0 still loses to NEVER
        s.node_last[0] = Some(0);
        assert_eq!(s.candidates(&g, Policy::LrvV)[0].neighbor, NodeId(2));
    }

    #[test]
    fn triangle_edge_frequency_argmin() {
        let g = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let mut s = WalkState::new(&g, NodeId(0));
        s.edge_freq = vec![2, 1, 1];
        let c = s.candidates(&g, Policy::LfvE);
        assert_eq!(
            c,
            vec![Incidence {
                neighbor: NodeId(2),
                edge: EdgeId(1)
            }]
        );
    }

    #[test]
    fn vertex_policies_keep_parallel_edges() {
        let g = Graph::new(3, &[(0, 1), (0, 1), (0, 2)]).unwrap();
        let mut s = WalkState::new(&g, NodeId(0));
        s.node_freq[2] = 1;
        assert_eq!(s.candidates(&g, Policy::LfvV).len(), 2);
    }

    #[test]
    fn single_step_updates_all_counters() {
        let g = path(2);
        let mut w = Walk::new(&g, Policy::LfvV, TieBreaker::LowestIndex, NodeId(0)).unwrap();
        let m = w.step().unwrap();
        assert_eq!(
            m,
            Move {
                edge: EdgeId(0),
                dest: NodeId(1)
            }
        );
        let s = w.state();
        assert_eq!(
            (s.t, s.node_freq[1], s.node_last[1], s.edge_freq[0]),
            (1, 1, Some(1), 1)
        );
        assert_eq!(s.node_freq[0], 0);
        assert_eq!(w.cover_time(), Some(1));
    }

    #[test]
    fn star_cover_time_is_two_k_minus_one() {
        let g = star(5);
        let p = Priorities::lowest_index(&g);
        let (trace, rep) = run_until_covered(
            &g,
            Policy::LfvV,
            TieBreaker::StaticPriority(p),
            NodeId(0),
            100,
        )
        .unwrap();
        assert_eq!(rep.cover_time, Some(9));
        let leaves: Vec<u32> = trace.moves.iter().step_by(2).map(|m| m.dest.0).collect();
        assert_eq!(leaves, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn forced_path_walks() {
        for p in Policy::ALL {
            let (_, rep) =
                run_until_covered(&path(3), p, TieBreaker::LowestIndex, NodeId(0), 10).unwrap();
            // the start is placed, not counted, so LFV-v returns to it first
            let want = if p == Policy::LfvV { 4 } else { 2 };
            assert_eq!(rep.cover_time, Some(want));
        }
        let (trace, _) = run_steps(
            &path(2),
            Policy::LrvE,
            TieBreaker::LowestIndex,
            NodeId(0),
            4,
        )
        .unwrap();
        let dests: Vec<u32> = trace.moves.iter().map(|m| m.dest.0).collect();
        assert_eq!(dests, vec![1, 0, 1, 0]);
    }

    #[test]
    fn four_cycle_lrv_e_cover_time() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (_, rep) =
            run_until_covered(&g, Policy::LrvE, TieBreaker::LowestIndex, NodeId(0), 10).unwrap();
        assert_eq!(rep.cover_time, Some(3));
    }

    #[test]
    fn four_cycle_lfv_e_balances_edges() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut w = Walk::new(&g, Policy::LfvE, TieBreaker::LowestIndex, NodeId(0)).unwrap();
        w.run_steps(8).unwrap();
        assert_eq!(w.state().edge_freq, vec![2, 2, 2, 2]);
    }

    #[test]
    fn zero_moves_is_empty() {
        let (trace, rep) = run_steps(
            &path(3),
            Policy::LfvV,
            TieBreaker::LowestIndex,
            NodeId(0),
            0,
        )
        .unwrap();
        assert!(trace.moves.is_empty());
        assert_eq!(rep.steps, 0);
    }

    #[test]
    fn cap_reports_unvisited() {
        let (_, rep) = run_until_covered(
            &path(5),
            Policy::LfvV,
            TieBreaker::LowestIndex,
            NodeId(0),
            2,
        )
        .unwrap();
        assert!(!rep.covered());
        assert_eq!(rep.unvisited, vec![NodeId(2), NodeId(3), NodeId(4)]);
    }

    #[test]
    fn scripted_errors_carry_step() {
        let g = path(3);
        let script = vec![Move {
            edge: EdgeId(0),
            dest: NodeId(1),
        }];
        let mut w = Walk::new(&g, Policy::LfvV, TieBreaker::scripted(script), NodeId(0)).unwrap();
        w.step().unwrap();
        assert_eq!(w.step(), Err(WalkError::ScriptExhausted { step: 1 }));

        // at node 1, node 0 has freq 0 and node 2 has freq 0; edge 0 is fine,
        // but going back along edge 0 after visiting 2 is not the argmin
        let script = vec![
            Move {
                edge: EdgeId(0),
                dest: NodeId(1),
            },
            Move {
                edge: EdgeId(1),
                dest: NodeId(2),
            },
            Move {
                edge: EdgeId(1),
                dest: NodeId(1),
            },
            Move {
                edge: EdgeId(1),
                dest: NodeId(2),
            },
        ];
        let mut w = Walk::new(&g, Policy::LfvV, TieBreaker::scripted(script), NodeId(0)).unwrap();
        for _ in 0..3 {
            w.step().unwrap();
        }
        assert_eq!(
            w.step(),
            Err(WalkError::ScriptMismatch {
                step: 3,
                edge: 1,
                dest: 2
            })
        );
    }

    #[test]
    fn replay_reproduces_state() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let mut w = Walk::new(&g, Policy::LrvV, TieBreaker::seeded(3), NodeId(0))
            .unwrap()
            .recording();
        w.run_steps(40).unwrap();
        let trace = w.trace();
        assert_eq!(replay(&g, &trace).unwrap(), *w.state());
        trace.validate(&g).unwrap();
    }

    #[test]
    fn trace_json_is_pair_list() {
        let m = vec![Move {
            edge: EdgeId(3),
            dest: NodeId(1),
        }];
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[3,1]]");
        let back: Vec<Move> = serde_json::from_str("[[3,1]]").unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_start_and_isolated_node() {
        let g = path(2);
        assert!(matches!(
            Walk::new(&g, Policy::LfvV, TieBreaker::LowestIndex, NodeId(5)),
            Err(WalkError::BadStart { start: 5 })
        ));
        let one = Graph::new(1, &[]).unwrap();
        let mut w = Walk::new(&one, Policy::LfvV, TieBreaker::LowestIndex, NodeId(0)).unwrap();
        assert_eq!(w.cover_time(), Some(0));
        assert_eq!(w.step(), Err(WalkError::Stuck { node: 0 }));
    }
}
