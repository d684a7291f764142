//! Seeded instance generators and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use mgpf_core::graph::{shortest_path_oracle, Cost, Graph, NodeId};
use mgpf_core::Instance;
use petgraph::algo::min_spanning_tree;
use petgraph::data::Element;
use petgraph::graph::UnGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `width × height` grid with each cell blocked with probability `density`.
pub fn random_grid(width: usize, height: usize, density: f64, seed: u64) -> Arc<Graph> {
    let mut r = rng(seed);
    let mask: Vec<bool> = (0..width * height).map(|_| !r.gen_bool(density)).collect();
    Arc::new(Graph::from_grid(width, height, &mask))
}

/// Random connected graph on `n` nodes: a random spanning tree plus extra
/// edges, costs in `1..=max_cost`.
pub fn random_sparse(n: usize, extra: usize, max_cost: u64, seed: u64) -> Arc<Graph> {
    let mut r = rng(seed);
    let mut edges: HashMap<(usize, usize), Cost> = HashMap::new();
    for v in 1..n {
        let u = r.gen_range(0..v);
        edges.insert((u, v), Cost(r.gen_range(1..=max_cost)));
    }
    for _ in 0..extra {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v {
            edges
                .entry((u.min(v), u.max(v)))
                .or_insert(Cost(r.gen_range(1..=max_cost)));
        }
    }
    let mut list: Vec<_> = edges.into_iter().map(|((u, v), c)| (u, v, c)).collect();
    list.sort();
    Arc::new(Graph::from_edges(n, list).unwrap())
}

/// `n` distinct terminals sampled from the largest connected component.
pub fn random_instance(graph: &Arc<Graph>, n: usize, seed: u64) -> Option<Instance> {
    let labels = graph.component_labels();
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for &l in &labels {
        *sizes.entry(l).or_default() += 1;
    }
    let (&big, &size) = sizes.iter().max_by_key(|&(l, s)| (*s, std::cmp::Reverse(*l)))?;
    if size < n {
        return None;
    }
    let pool: Vec<NodeId> = (0..graph.node_count()).filter(|&u| labels[u] == big).collect();
    let mut r = rng(seed ^ 0x5eed);
    let chosen: Vec<NodeId> = pool.choose_multiple(&mut r, n).copied().collect();
    Some(Instance::new(graph.clone(), chosen[0], chosen[1], chosen[2..].to_vec()).unwrap())
}

/// Least cost between every pair of terminals, `[i][j]`.
pub fn terminal_distances(instance: &Instance) -> Vec<Vec<Cost>> {
    instance
        .terminals()
        .iter()
        .map(|&t| {
            let sp = shortest_path_oracle(instance.graph(), t);
            instance.terminals().iter().map(|&u| sp.dist[u]).collect()
        })
        .collect()
}

/// MST cost of the metric completion, computed with petgraph's Kruskal.
pub fn metric_mst_cost(instance: &Instance) -> Cost {
    let d = terminal_distances(instance);
    let n = d.len();
    let mut g = UnGraph::<(), u64>::new_undirected();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(nodes[i], nodes[j], d[i][j].value());
        }
    }
    let total: u64 = min_spanning_tree(&g)
        .filter_map(|e| match e {
            Element::Edge { weight, .. } => Some(weight),
            _ => None,
        })
        .sum();
    Cost(total)
}

/// Optimal MGPF cost restricted to walks that visit the goals in some order
/// along least-cost links. An optimal walk of this form always exists.
pub fn brute_force_mgpf(instance: &Instance) -> Cost {
    let d = terminal_distances(instance);
    let goals: Vec<usize> = (2..instance.terminal_count()).collect();
    let k = goals.len();
    goals
        .into_iter()
        .permutations(k)
        .map(|order| {
            let mut at = 0;
            let mut total = Cost::ZERO;
            for g in order {
                total += d[at][g];
                at = g;
            }
            total + d[at][1]
        })
        .min()
        .unwrap_or(d[0][1])
}
