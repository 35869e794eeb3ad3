//! Undirected multigraph with dense node and edge identities.
//!
//! Graphs are validated on construction: no self-loops, every endpoint in
//! range, and a single connected component. Parallel edges are kept and each
//! one gets its own [`EdgeId`].

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One end of an edge as seen from a node: the node on the other side and
/// the edge used to get there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incidence {
    pub neighbor: NodeId,
    pub edge: EdgeId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph needs at least one node")]
    Empty,
    #[error("edge {edge} is a self-loop on node {node}")]
    SelfLoop { edge: usize, node: u32 },
    #[error("edge {edge} names node {node}, but the graph has {n} nodes")]
    EndpointOutOfRange { edge: usize, node: u32, n: usize },
    #[error("graph is disconnected; node {lowest} is not reachable from node 0")]
    Disconnected { lowest: u32 },
    #[error("graph too large: {0}")]
    TooLarge(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<Incidence>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub max_degree: usize,
    pub diameter: usize,
    /// Set by generators whose output is a planar dual; never computed.
    pub planar_note: bool,
}

impl Graph {
    /// Builds a graph from an edge list. Edge ids follow list order.
    ///
    /// A disconnected input is rejected with the lowest node id that is not
    /// in the component of node 0.
    pub fn new(n: usize, edge_list: &[(u32, u32)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > u32::MAX as usize || edge_list.len() > u32::MAX as usize {
            return Err(GraphError::TooLarge(format!(
                "{n} nodes, {} edges",
                edge_list.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(edge_list.len());
        for (i, &(u, v)) in edge_list.iter().enumerate() {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::EndpointOutOfRange {
                        edge: i,
                        node: w,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { edge: i, node: u });
            }
            let e = EdgeId(i as u32);
            adjacency[u as usize].push(Incidence {
                neighbor: NodeId(v),
                edge: e,
            });
            adjacency[v as usize].push(Incidence {
                neighbor: NodeId(u),
                edge: e,
            });
            edges.push((NodeId(u), NodeId(v)));
        }
        let g = Graph { edges, adjacency };
        let dist = g.bfs(NodeId(0));
        if let Some(lowest) = dist.iter().position(|d| d.is_none()) {
            return Err(GraphError::Disconnected {
                lowest: lowest as u32,
            });
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.adjacency.len() as u32).map(NodeId)
    }

    pub fn incidences(&self, v: NodeId) -> &[Incidence] {
        &self.adjacency[v.index()]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.index()].len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e.index()]
    }

    pub fn edge_list(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.adjacency.len()
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source.index()] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u.index()].unwrap_or(0);
            for inc in self.incidences(u) {
                let slot = &mut dist[inc.neighbor.index()];
                if slot.is_none() {
                    *slot = Some(du + 1);
                    queue.push_back(inc.neighbor);
                }
            }
        }
        dist
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest BFS eccentricity over all nodes.
    pub fn diameter(&self) -> usize {
        self.nodes()
            .map(|v| self.bfs(v).into_iter().flatten().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            max_degree: self.max_degree(),
            diameter: self.diameter(),
            planar_note: false,
        }
    }
}
