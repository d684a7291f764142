use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Cost, Graph, NodeId};

/// Exact single-source least costs with a parent tree.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub source: NodeId,
    pub dist: Vec<Cost>,
    pub parent: Vec<Option<NodeId>>,
}

impl ShortestPaths {
    /// Node sequence from the source to `target`, or `None` if unreachable.
    pub fn path_to(&self, target: NodeId) -> Option<Vec<NodeId>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut path = vec![target];
        let mut at = target;
        while let Some(p) = self.parent[at] {
            path.push(p);
            at = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Uniform-cost search from `source` over the whole graph. Unreachable nodes
/// keep [`Cost::INFINITY`].
pub fn shortest_path_oracle(graph: &Graph, source: NodeId) -> ShortestPaths {
    let n = graph.node_count();
    let mut dist = vec![Cost::INFINITY; n];
    let mut parent = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Cost::ZERO;
    heap.push(Reverse((Cost::ZERO, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, c) in graph.neighbors(u) {
            let nd = d + c;
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some(u);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    ShortestPaths { source, dist, parent }
}
