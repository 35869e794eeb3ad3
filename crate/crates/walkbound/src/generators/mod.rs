//! Instance families, each bundled with a start node and static priorities.

mod caterpillar;
mod chains;
mod flower;
mod random;
mod ratio;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeId};
use crate::walk::{Priorities, PriorityError, TieBreaker};

pub use caterpillar::{caterpillar, CaterpillarLayout, CaterpillarParams};
pub use chains::{
    four_cycle_chain, four_cycle_chain_with, lrv_v_chain, CycleEntry, LRV_GADGET_EDGES,
    LRV_GADGET_ENTRY, LRV_GADGET_EXIT,
};
pub use flower::{flower_path, FlowerLayout};
pub use random::random_bounded_degree;
pub use ratio::{ratio_config, RatioLayout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Priorities(#[from] PriorityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Caterpillar,
    LrvVChain,
    FourCycleChain,
    FlowerPath,
    Ratio,
    Random,
    /// Loaded from a file rather than generated.
    Custom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Caterpillar => "caterpillar",
            Family::LrvVChain => "lrv-v-chain",
            Family::FourCycleChain => "four-cycle-chain",
            Family::FlowerPath => "flower-path",
            Family::Ratio => "ratio",
            Family::Random => "random",
            Family::Custom => "custom",
        }
    }

    /// Families whose graphs stand in for duals of triangulations.
    pub fn is_planar_dual(self) -> bool {
        matches!(self, Family::LrvVChain | Family::FourCycleChain)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "caterpillar" => Family::Caterpillar,
            "lrv-v-chain" => Family::LrvVChain,
            "four-cycle-chain" => Family::FourCycleChain,
            "flower-path" => Family::FlowerPath,
            "ratio" => Family::Ratio,
            "random" => Family::Random,
            "custom" => Family::Custom,
            _ => return Err(GeneratorError::Params(format!("unknown family `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub formula: String,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub family: Family,
    pub params: Vec<(String, u64)>,
    pub graph: Graph,
    pub start: NodeId,
    pub priorities: Priorities,
    pub predicted: Option<Prediction>,
}

impl GeneratedInstance {
    pub fn tiebreaker(&self) -> TieBreaker {
        TieBreaker::StaticPriority(self.priorities.clone())
    }

    pub fn param(&self, name: &str) -> Option<u64> {
        self.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    /// Short label such as `four-cycle-chain(k=4)`.
    pub fn label(&self) -> String {
        let ps: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}({})", self.family, ps.join(","))
    }
}

/// Builds graph and priorities from an edge list plus per-node neighbor order.
pub(crate) fn assemble(
    family: Family,
    params: Vec<(String, u64)>,
    n: usize,
    edges: &[(u32, u32)],
    start: u32,
    order: &[Vec<NodeId>],
    predicted: Option<Prediction>,
) -> Result<GeneratedInstance, GeneratorError> {
    let graph = Graph::new(n, edges)?;
    let priorities = Priorities::from_neighbors(&graph, order)?;
    Ok(GeneratedInstance {
        family,
        params,
        graph,
        start: NodeId(start),
        priorities,
        predicted,
    })
}

/// Orders each node's neighbors by `key`, ascending.
pub(crate) fn order_by<K: Ord>(
    n: usize,
    edges: &[(u32, u32)],
    mut key: impl FnMut(u32, u32) -> K,
) -> Vec<Vec<NodeId>> {
    let mut nbrs: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        nbrs[u as usize].push(v);
        nbrs[v as usize].push(u);
    }
    nbrs.into_iter()
        .enumerate()
        .map(|(v, mut l)| {
            l.sort_by_cached_key(|&w| key(v as u32, w));
            l.into_iter().map(NodeId).collect()
        })
        .collect()
}

/// Largest node count any generator will build.
pub const MAX_NODES: usize = 1 << 20;

/// Every family at small parameters. Used by sweeps and corpus checks.
pub fn small_corpus() -> Vec<GeneratedInstance> {
    let mut out = Vec::new();
    for (b, l) in [(2, 1), (4, 3), (5, 3), (6, 5)] {
        out.push(caterpillar(CaterpillarParams { b, c: 11, l }).expect("valid caterpillar"));
    }
    for k in 1..=4 {
        out.push(lrv_v_chain(k).expect("valid chain"));
        out.push(four_cycle_chain(k).expect("valid chain"));
    }
    for (s, p) in [(1, 0), (1, 3), (2, 2), (3, 1)] {
        out.push(flower_path(s, p).expect("valid flower"));
    }
    for (d, k) in [(3, 1), (3, 2), (4, 1)] {
        out.push(ratio_config(d, k).expect("valid ratio"));
    }
    for seed in 0..4 {
        out.push(random_bounded_degree(12, 3, seed).expect("valid random"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in [
            Family::Caterpillar,
            Family::LrvVChain,
            Family::FourCycleChain,
            Family::FlowerPath,
            Family::Ratio,
            Family::Random,
            Family::Custom,
        ] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("tree".parse::<Family>().is_err());
    }

    #[test]
    fn corpus_is_valid() {
        for inst in small_corpus() {
            let g = &inst.graph;
            assert!(g.contains(inst.start), "{}", inst.label());
            let deg_sum: usize = g.nodes().map(|v| g.degree(v)).sum();
            assert_eq!(deg_sum, 2 * g.edge_count());
            if inst.family.is_planar_dual() {
                assert!(g.max_degree() <= 3, "{}", inst.label());
            }
        }
    }
}
