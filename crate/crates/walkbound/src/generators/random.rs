use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Family, GeneratedInstance, GeneratorError, MAX_NODES};
use crate::graph::{Graph, NodeId};
use crate::walk::Priorities;

/// Connected simple graph with maximum degree at most `max_degree`.
///
/// A random spanning tree is grown under the degree cap, then up to `n` extra
/// edges are tried between nodes that still have room.
pub fn random_bounded_degree(
    n: u64,
    max_degree: u64,
    seed: u64,
) -> Result<GeneratedInstance, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::Params(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if max_degree < 2 {
        return Err(GeneratorError::Params(format!(
            "max degree must be at least 2, got {max_degree}"
        )));
    }
    if n > MAX_NODES as u64 {
        return Err(GeneratorError::Params(format!("n = {n} is too large")));
    }
    let n = n as usize;
    let cap = max_degree.min(n as u64 - 1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut adjacent = std::collections::HashSet::new();
    let mut edges = Vec::new();

    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| deg[u] < cap).collect();
        let &u = open
            .choose(&mut rng)
            .expect("a tree always has a node below the cap");
        edges.push((u as u32, v as u32));
        adjacent.insert((u, v));
        deg[u] += 1;
        deg[v] += 1;
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        let key = (u.min(v), u.max(v));
        if u == v || deg[u] >= cap || deg[v] >= cap || adjacent.contains(&key) {
            continue;
        }
        adjacent.insert(key);
        edges.push((key.0 as u32, key.1 as u32));
        deg[u] += 1;
        deg[v] += 1;
    }

    let graph = Graph::new(n, &edges)?;
    let priorities = Priorities::lowest_index(&graph);
    Ok(GeneratedInstance {
        family: Family::Random,
        params: vec![
            ("n".into(), n as u64),
            ("max_degree".into(), max_degree),
            ("seed".into(), seed),
        ],
        graph,
        start: NodeId(0),
        priorities,
        predicted: None,
    })
}
