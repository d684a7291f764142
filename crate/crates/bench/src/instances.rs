use std::collections::HashMap;
use std::sync::Arc;

use mgpf_core::{Error, Graph, Instance, NodeId, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples `n` distinct terminals from the largest connected component
/// (ties to the component holding the smallest node id). The first is the
/// origin, the second the destination.
pub fn generate_instance(graph: &Arc<Graph>, n: usize, seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!("need at least 2 terminals, got {n}")));
    }
    let labels = graph.component_labels();
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for &l in &labels {
        *sizes.entry(l).or_default() += 1;
    }
    let best = sizes
        .iter()
        .max_by_key(|&(&l, &s)| (s, std::cmp::Reverse(l)))
        .map(|(&l, &s)| (l, s));
    let (label, size) = best.unwrap_or((0, 0));
    if size < n {
        return Err(Error::InvalidInstance(format!(
            "largest connected component has {size} nodes, {n} terminals requested"
        )));
    }
    let pool: Vec<NodeId> = (0..graph.node_count()).filter(|&u| labels[u] == label).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<NodeId> = pool.choose_multiple(&mut rng, n).copied().collect();
    Instance::new(graph.clone(), chosen[0], chosen[1], chosen[2..].to_vec())
}

/// Seed of instance `index` in the `(map, n)` cell.
pub fn instance_seed(base: u64, map_index: usize, n: usize, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(((map_index as u64) << 40) ^ ((n as u64) << 20) ^ index as u64);
    rand::RngCore::next_u64(&mut rng)
}
