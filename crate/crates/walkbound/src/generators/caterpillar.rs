//! Caterpillar tree whose LFV-v exploration time grows with the path length
//! in the exponent.
//!
//! Path nodes are `0..=l+1`. Node 0 (the root) carries `b+c+1` leaves, path
//! node `i` in `1..=l` carries `b-i+1`, and the last path node carries `b+1`.
//! Leaves are numbered after the path, grouped by their path node.
//!
//! The walk starts on the root's first leaf. Since the initial placement is
//! not counted, the root collects exactly `b+c+1` arrivals during the first
//! sweep: one from the start leaf and one from each of the other `b+c-1`
//! leaves it bounces through, plus the return from the start leaf.

use super::{assemble, Family, GeneratedInstance, GeneratorError, Prediction, MAX_NODES};
use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaterpillarParams {
    pub b: u64,
    pub c: u64,
    pub l: u64,
}

/// Node numbering of a caterpillar instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaterpillarLayout {
    pub params: CaterpillarParams,
    /// Leaves of each path node, in priority order.
    pub leaves: Vec<Vec<u32>>,
}

impl CaterpillarParams {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        let CaterpillarParams { b, c, l } = *self;
        if l % 2 == 0 {
            return Err(GeneratorError::Params(format!("l must be odd, got {l}")));
        }
        if c < 11 {
            return Err(GeneratorError::Params(format!(
                "c must be at least 11, got {c}"
            )));
        }
        if b < l + 1 {
            return Err(GeneratorError::Params(format!(
                "b must be at least l+1 = {}, got {b}",
                l + 1
            )));
        }
        if self.node_count() > MAX_NODES as u64 {
            return Err(GeneratorError::Params(format!(
                "{} nodes is too many",
                self.node_count()
            )));
        }
        Ok(())
    }

    pub fn path_len(&self) -> u64 {
        self.l + 2
    }

    pub fn leaf_count(&self, i: u64) -> u64 {
        let CaterpillarParams { b, c, l } = *self;
        if i == 0 {
            b + c + 1
        } else if i == l + 1 {
            b + 1
        } else {
            b - i + 1
        }
    }

    pub fn node_count(&self) -> u64 {
        let leaves: u64 = (0..self.path_len()).map(|i| self.leaf_count(i)).sum();
        self.path_len() + leaves
    }

    pub fn layout(&self) -> CaterpillarLayout {
        let mut next = self.path_len() as u32;
        let leaves = (0..self.path_len())
            .map(|i| {
                let k = self.leaf_count(i) as u32;
                let ls: Vec<u32> = (next..next + k).collect();
                next += k;
                ls
            })
            .collect();
        CaterpillarLayout {
            params: *self,
            leaves,
        }
    }
}

impl CaterpillarLayout {
    pub fn path_nodes(&self) -> std::ops::Range<u32> {
        0..self.params.path_len() as u32
    }

    pub fn last(&self) -> u32 {
        self.params.l as u32 + 1
    }

    pub fn start(&self) -> u32 {
        self.leaves[0][0]
    }
}

pub fn caterpillar(p: CaterpillarParams) -> Result<GeneratedInstance, GeneratorError> {
    p.validate()?;
    let lay = p.layout();
    let n = p.node_count() as usize;
    let last = lay.last();
    let mut edges: Vec<(u32, u32)> = (0..last).map(|i| (i, i + 1)).collect();
    for (i, ls) in lay.leaves.iter().enumerate() {
        edges.extend(ls.iter().map(|&leaf| (i as u32, leaf)));
    }

    let mut order: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let ids = |v: &[u32]| v.iter().copied().map(NodeId).collect::<Vec<_>>();
    for i in 0..=last {
        let ls = &lay.leaves[i as usize];
        let o = &mut order[i as usize];
        if i == 0 {
            // all leaves but one, then down the path, then the spare leaf
            let (spare, rest) = ls.split_last().expect("root has leaves");
            o.extend(ids(rest));
            o.push(NodeId(1));
            o.push(NodeId(*spare));
        } else if i == last {
            o.push(NodeId(i - 1));
            o.extend(ids(ls));
        } else if i % 2 == 1 {
            o.push(NodeId(i - 1));
            o.push(NodeId(i + 1));
            o.extend(ids(ls));
        } else {
            // one leaf ahead of the parent, so ties on the way up spend a leaf
            o.push(NodeId(ls[0]));
            o.push(NodeId(i - 1));
            o.extend(ids(&ls[1..]));
            o.push(NodeId(i + 1));
        }
        for &leaf in ls {
            order[leaf as usize].push(NodeId(i));
        }
    }

    let params = vec![("b".into(), p.b), ("c".into(), p.c), ("l".into(), p.l)];
    let predicted = Some(Prediction {
        formula: "root frequency after first sweep = b+c+1".into(),
        value: (p.b + p.c + 1) as f64,
    });
    assemble(
        Family::Caterpillar,
        params,
        n,
        &edges,
        lay.start(),
        &order,
        predicted,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_count_and_degrees() {
        let p = CaterpillarParams { b: 4, c: 11, l: 3 };
        let inst = caterpillar(p).unwrap();
        let g = &inst.graph;
        assert_eq!(g.node_count(), 35);
        assert_eq!(g.degree(NodeId(0)), 17);
        assert_eq!(g.degree(NodeId(4)), 6);
        for i in 1..=3u32 {
            assert_eq!(g.degree(NodeId(i)) as u64, p.b - i as u64 + 3);
        }
        assert_eq!(g.stats().max_degree, 17);
    }

    #[test]
    fn count_matches_closed_form() {
        for (b, c, l) in [(4, 11, 3), (6, 11, 5), (9, 20, 7), (2, 11, 1)] {
            let p = CaterpillarParams { b, c, l };
            let sum: u64 = (1..=l).map(|i| b - i + 1).sum();
            assert_eq!(p.node_count(), (l + 2) + (b + c + 1) + sum + (b + 1));
            assert_eq!(
                caterpillar(p).unwrap().graph.node_count() as u64,
                p.node_count()
            );
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(caterpillar(CaterpillarParams { b: 4, c: 11, l: 2 }).is_err());
        assert!(caterpillar(CaterpillarParams { b: 4, c: 10, l: 3 }).is_err());
        assert!(caterpillar(CaterpillarParams { b: 3, c: 11, l: 3 }).is_err());
    }

    #[test]
    fn root_keeps_one_leaf_behind_the_path() {
        let p = CaterpillarParams { b: 4, c: 11, l: 3 };
        let inst = caterpillar(p).unwrap();
        let order = inst.priorities.neighbor_lists(&inst.graph);
        let root = &order[0];
        assert_eq!(root[root.len() - 2], NodeId(1));
        assert_eq!(inst.start, NodeId(5));
    }
}
