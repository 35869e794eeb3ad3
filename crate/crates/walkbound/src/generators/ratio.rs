//! Instance where LFV-v drives the start node to `k*delta` visits while
//! `delta-1` of its neighbors sit at exactly `k`.
//!
//! Start `s` has heads `h_1..h_{delta-1}` and a return neighbor `u`. Each head
//! leads to a barrier node `f_j` carrying `delta*k+1` petals; the barriers
//! form a path starting at `u`. The first move bounces off `h_1`. The walker
//! then leaves through `u`, charges every barrier with its petals, and comes
//! back through the last head. From then on every neighbor of `s` is backed by
//! a node with a higher count than `s`, so each excursion from `s` bounces
//! straight back and `s` gains `delta` for every round of its neighbors.

use super::{assemble, Family, GeneratedInstance, GeneratorError, Prediction, MAX_NODES};
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioLayout {
    pub delta: u32,
    pub k: u64,
    pub start: u32,
    pub u: u32,
    pub heads: Vec<u32>,
    pub barriers: Vec<u32>,
    pub petals: Vec<Vec<u32>>,
}

impl RatioLayout {
    pub fn new(delta: u32, k: u64) -> Self {
        let h = delta - 1;
        let heads: Vec<u32> = (2..2 + h).collect();
        let barriers: Vec<u32> = (2 + h..2 + 2 * h).collect();
        let per = delta as u64 * k + 1;
        let mut next = 2 + 2 * h;
        let petals = (0..h)
            .map(|_| {
                let ps: Vec<u32> = (next..next + per as u32).collect();
                next += per as u32;
                ps
            })
            .collect();
        RatioLayout {
            delta,
            k,
            start: 0,
            u: 1,
            heads,
            barriers,
            petals,
        }
    }

    pub fn node_count(&self) -> usize {
        2 + self.heads.len() + self.barriers.len() + self.petals.iter().map(Vec::len).sum::<usize>()
    }
}

pub fn ratio_config(delta: u64, k: u64) -> Result<GeneratedInstance, GeneratorError> {
    if delta < 3 {
        return Err(GeneratorError::Params(format!(
            "delta must be at least 3, got {delta}"
        )));
    }
    if k < 1 {
        return Err(GeneratorError::Params("k must be at least 1".into()));
    }
    let nodes = delta
        .checked_mul(k)
        .and_then(|dk| (dk + 3).checked_mul(delta));
    if nodes.is_none_or(|x| x > MAX_NODES as u64) {
        return Err(GeneratorError::Params(format!(
            "delta = {delta}, k = {k} is too large"
        )));
    }
    let lay = RatioLayout::new(delta as u32, k);
    let n = lay.node_count();
    let (s, u) = (lay.start, lay.u);
    let h = lay.heads.len();

    let mut edges: Vec<(u32, u32)> = lay.heads.iter().map(|&x| (s, x)).collect();
    edges.push((s, u));
    edges.push((u, lay.barriers[0]));
    edges.extend(lay.heads.iter().zip(&lay.barriers).map(|(&x, &f)| (x, f)));
    edges.extend(lay.barriers.windows(2).map(|w| (w[0], w[1])));
    for (f, ps) in lay.barriers.iter().zip(&lay.petals) {
        edges.extend(ps.iter().map(|&p| (*f, p)));
    }

    let mut order: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let ids = |v: &[u32]| v.iter().copied().map(NodeId).collect::<Vec<_>>();
    order[s as usize] = [vec![lay.heads[0], u], lay.heads[1..].to_vec()]
        .concat()
        .into_iter()
        .map(NodeId)
        .collect();
    order[u as usize] = ids(&[s, lay.barriers[0]]);
    for j in 0..h {
        let f = lay.barriers[j];
        order[lay.heads[j] as usize] = ids(&[s, f]);
        let o = &mut order[f as usize];
        o.extend(ids(&lay.petals[j]));
        if j + 1 < h {
            o.push(NodeId(lay.barriers[j + 1]));
        }
        o.push(NodeId(lay.heads[j]));
        o.push(NodeId(if j == 0 { u } else { lay.barriers[j - 1] }));
        for &p in &lay.petals[j] {
            order[p as usize].push(NodeId(f));
        }
    }

    let params = vec![("delta".into(), delta), ("k".into(), k)];
    let predicted = Some(Prediction {
        formula: "start frequency k*delta with delta-1 neighbors at k".into(),
        value: (delta * k) as f64,
    });
    assemble(Family::Ratio, params, n, &edges, s, &order, predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_degree_is_delta() {
        for d in 3..6 {
            let inst = ratio_config(d, 2).unwrap();
            assert_eq!(inst.graph.degree(inst.start) as u64, d);
        }
    }

    #[test]
    fn small_instance_size() {
        assert_eq!(ratio_config(3, 1).unwrap().graph.node_count(), 14);
        assert_eq!(ratio_config(3, 2).unwrap().graph.node_count(), 20);
    }

    #[test]
    fn rejects_infeasible() {
        assert!(ratio_config(2, 1).is_err());
        assert!(ratio_config(3, 0).is_err());
        assert!(ratio_config(3, u64::MAX / 2).is_err());
    }
}
