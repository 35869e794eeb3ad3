use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Move, WalkError};
use crate::graph::{Graph, Incidence, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PriorityError {
    #[error("priority table has {got} nodes, graph has {want}")]
    NodeCount { got: usize, want: usize },
    #[error("node {node}: priority list has {got} entries, degree is {want}")]
    Length { node: u32, got: usize, want: usize },
    #[error("node {node}: {neighbor} is not an unused neighbor")]
    NotNeighbor { node: u32, neighbor: u32 },
}

/// Static per-node preference order over incidences.
///
/// Stored as a rank per adjacency slot so that picking among candidates is a
/// plain minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Priorities {
    ranks: Vec<Vec<u32>>,
}

impl Priorities {
    /// Each list must be a permutation of the node's incidences.
    pub fn from_incidences(g: &Graph, lists: &[Vec<Incidence>]) -> Result<Self, PriorityError> {
        if lists.len() != g.node_count() {
            return Err(PriorityError::NodeCount {
                got: lists.len(),
                want: g.node_count(),
            });
        }
        let mut ranks = Vec::with_capacity(lists.len());
        for (v, list) in g.nodes().zip(lists) {
            let adj = g.incidences(v);
            if list.len() != adj.len() {
                return Err(PriorityError::Length {
                    node: v.0,
                    got: list.len(),
                    want: adj.len(),
                });
            }
            let mut rank = vec![u32::MAX; adj.len()];
            for (r, inc) in list.iter().enumerate() {
                match adj.iter().position(|a| a == inc) {
                    Some(slot) if rank[slot] == u32::MAX => rank[slot] = r as u32,
                    _ => {
                        return Err(PriorityError::NotNeighbor {
                            node: v.0,
                            neighbor: inc.neighbor.0,
                        })
                    }
                }
            }
            ranks.push(rank);
        }
        Ok(Priorities { ranks })
    }

    /// Neighbor-id lists. A neighbor reached by parallel edges is listed once
    /// per edge; each repeat takes the next parallel incidence in edge order.
    pub fn from_neighbors(g: &Graph, lists: &[Vec<NodeId>]) -> Result<Self, PriorityError> {
        if lists.len() != g.node_count() {
            return Err(PriorityError::NodeCount {
                got: lists.len(),
                want: g.node_count(),
            });
        }
        let mut out = Vec::with_capacity(lists.len());
        for (v, list) in g.nodes().zip(lists) {
            let adj = g.incidences(v);
            if list.len() != adj.len() {
                return Err(PriorityError::Length {
                    node: v.0,
                    got: list.len(),
                    want: adj.len(),
                });
            }
            let mut used = vec![false; adj.len()];
            let mut incs = Vec::with_capacity(list.len());
            for &w in list {
                let slot = adj
                    .iter()
                    .enumerate()
                    .position(|(i, a)| !used[i] && a.neighbor == w)
                    .ok_or(PriorityError::NotNeighbor {
                        node: v.0,
                        neighbor: w.0,
                    })?;
                used[slot] = true;
                incs.push(adj[slot]);
            }
            out.push(incs);
        }
        Self::from_incidences(g, &out)
    }

    /// Ascending neighbor id, then ascending edge id.
    pub fn lowest_index(g: &Graph) -> Self {
        let lists: Vec<Vec<Incidence>> = g
            .nodes()
            .map(|v| {
                let mut l = g.incidences(v).to_vec();
                l.sort();
                l
            })
            .collect();
        Self::from_incidences(g, &lists).expect("sorted adjacency is a permutation")
    }

    /// Incidences of `v` from most to least preferred.
    pub fn order(&self, g: &Graph, v: NodeId) -> Vec<Incidence> {
        let adj = g.incidences(v);
        let mut slots: Vec<usize> = (0..adj.len()).collect();
        slots.sort_by_key(|&s| self.ranks[v.index()][s]);
        slots.into_iter().map(|s| adj[s]).collect()
    }

    pub fn neighbor_lists(&self, g: &Graph) -> Vec<Vec<NodeId>> {
        g.nodes()
            .map(|v| self.order(g, v).into_iter().map(|i| i.neighbor).collect())
            .collect()
    }

    #[inline]
    fn rank(&self, v: NodeId, slot: usize) -> u32 {
        self.ranks[v.index()][slot]
    }
}

/// Rule for picking one incidence out of the argmin set.
#[derive(Debug, Clone)]
pub enum TieBreaker {
    StaticPriority(Priorities),
    LowestIndex,
    SeededRandom { seed: u64, rng: ChaCha8Rng },
    Scripted { moves: Vec<Move>, next: usize },
}

impl TieBreaker {
    pub fn seeded(seed: u64) -> Self {
        TieBreaker::SeededRandom {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn scripted(moves: Vec<Move>) -> Self {
        TieBreaker::Scripted { moves, next: 0 }
    }

    pub fn describe(&self) -> String {
        match self {
            TieBreaker::StaticPriority(_) => "static-priority".into(),
            TieBreaker::LowestIndex => "lowest-index".into(),
            TieBreaker::SeededRandom { seed, .. } => format!("seeded-random:{seed}"),
            TieBreaker::Scripted { .. } => "scripted".into(),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            TieBreaker::SeededRandom { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Picks one of `slots` (adjacency positions at `at`). `step` is the index
    /// of the move being made, used in error reports.
    pub(crate) fn choose(
        &mut self,
        g: &Graph,
        at: NodeId,
        slots: &[usize],
        step: u64,
    ) -> Result<usize, WalkError> {
        debug_assert!(!slots.is_empty());
        let adj = g.incidences(at);
        match self {
            TieBreaker::StaticPriority(p) => Ok(*slots
                .iter()
                .min_by_key(|&&s| p.rank(at, s))
                .expect("non-empty")),
            TieBreaker::LowestIndex => {
                Ok(*slots.iter().min_by_key(|&&s| adj[s]).expect("non-empty"))
            }
            TieBreaker::SeededRandom { rng, .. } => {
                if slots.len() == 1 {
                    Ok(slots[0])
                } else {
                    Ok(slots[rng.random_range(0..slots.len())])
                }
            }
            TieBreaker::Scripted { moves, next } => {
                let mv = *moves
                    .get(*next)
                    .ok_or(WalkError::ScriptExhausted { step })?;
                let slot = slots
                    .iter()
                    .copied()
                    .find(|&s| adj[s].edge == mv.edge && adj[s].neighbor == mv.dest)
                    .ok_or(WalkError::ScriptMismatch {
                        step,
                        edge: mv.edge.0,
                        dest: mv.dest.0,
                    })?;
                *next += 1;
                Ok(slot)
            }
        }
    }
}
