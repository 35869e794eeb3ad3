//! JSON formats for graphs, traces and run metrics.
//!
//! Graph files look like
//! `{"n": 3, "edges": [[0,1],[1,2]], "start": 0, "priorities": {"1": [2, 0]}}`
//! with edge ids given by list position. Priorities list neighbor ids from most
//! to least preferred; nodes without a list fall back to lowest-index order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{Family, GeneratedInstance, Prediction};
use crate::graph::{Graph, GraphError, NodeId};
use crate::walk::{Move, Priorities, PriorityError, RunReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Priorities(#[from] PriorityError),
    #[error("start node {start} is not in a graph of {n} nodes")]
    BadStart { start: u32, n: usize },
    #[error("priority key `{0}` is not a node id")]
    BadKey(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[u32; 2]>,
    #[serde(default)]
    pub start: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priorities: Option<BTreeMap<String, Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<Prediction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, u64>>,
}

impl GraphFile {
    pub fn from_instance(inst: &GeneratedInstance) -> Self {
        let g = &inst.graph;
        let lists = inst.priorities.neighbor_lists(g);
        let priorities = lists
            .into_iter()
            .enumerate()
            .map(|(v, l)| (v.to_string(), l.into_iter().map(|x| x.0).collect()))
            .collect();
        GraphFile {
            n: g.node_count(),
            edges: g.edge_list().iter().map(|&(u, v)| [u.0, v.0]).collect(),
            start: inst.start.0,
            priorities: Some(priorities),
            predicted: inst.predicted.clone(),
            family: Some(inst.family.to_string()),
            params: Some(inst.params.iter().cloned().collect()),
        }
    }

    pub fn into_instance(self) -> Result<GeneratedInstance, IoError> {
        let edges: Vec<(u32, u32)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let graph = Graph::new(self.n, &edges)?;
        if !graph.contains(NodeId(self.start)) {
            return Err(IoError::BadStart {
                start: self.start,
                n: self.n,
            });
        }
        let fallback = Priorities::lowest_index(&graph);
        let priorities = match self.priorities {
            None => fallback,
            Some(map) => {
                let mut lists = fallback.neighbor_lists(&graph);
                for (key, list) in map {
                    let v: usize = key.parse().map_err(|_| IoError::BadKey(key.clone()))?;
                    if v >= self.n {
                        return Err(IoError::BadKey(key));
                    }
                    lists[v] = list.into_iter().map(NodeId).collect();
                }
                Priorities::from_neighbors(&graph, &lists)?
            }
        };
        let family = self
            .family
            .as_deref()
            .and_then(|f| f.parse().ok())
            .unwrap_or(Family::Custom);
        Ok(GeneratedInstance {
            family,
            params: self.params.unwrap_or_default().into_iter().collect(),
            graph,
            start: NodeId(self.start),
            priorities,
            predicted: self.predicted,
        })
    }
}

pub fn instance_to_json(inst: &GeneratedInstance) -> String {
    serde_json::to_string_pretty(&GraphFile::from_instance(inst))
        .expect("graph files always serialize")
}

pub fn instance_from_json(text: &str) -> Result<GeneratedInstance, IoError> {
    serde_json::from_str::<GraphFile>(text)?.into_instance()
}

pub fn trace_to_json(moves: &[Move]) -> String {
    serde_json::to_string(moves).expect("moves always serialize")
}

pub fn trace_from_json(text: &str) -> Result<Vec<Move>, IoError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsJson {
    pub cover_time: Option<u64>,
    pub covered: bool,
    pub max_freq: u64,
    pub steps: u64,
}

impl From<&RunReport> for MetricsJson {
    fn from(r: &RunReport) -> Self {
        MetricsJson {
            cover_time: r.cover_time,
            covered: r.covered(),
            max_freq: r.max_freq,
            steps: r.steps,
        }
    }
}
