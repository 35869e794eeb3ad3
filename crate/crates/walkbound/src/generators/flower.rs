//! A path interrupted by flower centers. Each center carries pendant petals
//! that the walker consumes on its first visit, which lifts the center's
//! count and makes it act as a barrier for later returns.

use super::{assemble, order_by, Family, GeneratedInstance, GeneratorError, Prediction, MAX_NODES};

/// Plain path nodes between consecutive centers and at both ends.
pub const RUN: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowerLayout {
    pub path_len: u32,
    pub centers: Vec<u32>,
    pub petals: Vec<Vec<u32>>,
}

impl FlowerLayout {
    pub fn new(segments: u64, petals: u64) -> Self {
        let s = segments as u32;
        let path_len = RUN * (s + 1) + s;
        let centers: Vec<u32> = (0..s).map(|j| RUN + j * (RUN + 1)).collect();
        let mut next = path_len;
        let petals = centers
            .iter()
            .map(|_| {
                let ps: Vec<u32> = (next..next + petals as u32).collect();
                next += petals as u32;
                ps
            })
            .collect();
        FlowerLayout {
            path_len,
            centers,
            petals,
        }
    }

    pub fn node_count(&self) -> usize {
        self.path_len as usize + self.petals.iter().map(Vec::len).sum::<usize>()
    }
}

/// `segments` flower centers, each with `petals` pendants. Zero petals gives
/// a plain path. The walk starts at the left end.
pub fn flower_path(segments: u64, petals: u64) -> Result<GeneratedInstance, GeneratorError> {
    if segments < 1 {
        return Err(GeneratorError::Params("segments must be at least 1".into()));
    }
    if segments.saturating_mul(petals + RUN as u64 + 1) > MAX_NODES as u64 {
        return Err(GeneratorError::Params("too many nodes".into()));
    }
    let lay = FlowerLayout::new(segments, petals);
    let n = lay.node_count();
    let mut edges: Vec<(u32, u32)> = (0..lay.path_len - 1).map(|i| (i, i + 1)).collect();
    for (c, ps) in lay.centers.iter().zip(&lay.petals) {
        edges.extend(ps.iter().map(|&p| (*c, p)));
    }
    let path_len = lay.path_len;
    // petals first, then rightward, then leftward
    let order = order_by(n, &edges, |v, w| {
        if w >= path_len {
            (0, w)
        } else if w > v {
            (1, w)
        } else {
            (2, w)
        }
    });
    let params = vec![("segments".into(), segments), ("petals".into(), petals)];
    let predicted = Some(Prediction {
        formula: "center frequency after first left-to-right pass = petals+1".into(),
        value: (petals + 1) as f64,
    });
    assemble(Family::FlowerPath, params, n, &edges, 0, &order, predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_flower_has_ten_nodes() {
        let inst = flower_path(1, 3).unwrap();
        assert_eq!(inst.graph.node_count(), 10);
        assert_eq!(inst.graph.degree(crate::graph::NodeId(3)), 5);
    }

    #[test]
    fn zero_petals_is_a_path() {
        let inst = flower_path(1, 0).unwrap();
        let g = &inst.graph;
        assert_eq!((g.node_count(), g.max_degree(), g.diameter()), (7, 2, 6));
    }

    #[test]
    fn layout_positions() {
        let lay = FlowerLayout::new(2, 2);
        assert_eq!(lay.path_len, 11);
        assert_eq!(lay.centers, vec![3, 7]);
        assert_eq!(lay.petals, vec![vec![11, 12], vec![13, 14]]);
        assert!(flower_path(0, 2).is_err());
    }
}
