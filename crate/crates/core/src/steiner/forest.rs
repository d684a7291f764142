use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::graph::{Cost, NodeId};
use crate::instance::TerminalIdx;
use crate::terminal_set::TerminalSet;

/// A least-cost path between two terminals, stored from the smaller terminal
/// index to the larger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfirmedPath {
    pub endpoints: (TerminalIdx, TerminalIdx),
    pub cost: Cost,
    pub nodes: Vec<NodeId>,
}

impl ConfirmedPath {
    /// Orients `nodes` so that they run from the smaller endpoint.
    pub fn new(a: TerminalIdx, b: TerminalIdx, cost: Cost, mut nodes: Vec<NodeId>) -> Self {
        if a > b {
            nodes.reverse();
        }
        ConfirmedPath {
            endpoints: (a.min(b), a.max(b)),
            cost,
            nodes,
        }
    }
}

/// Accepted terminal-to-terminal paths plus the union of their graph edges.
#[derive(Clone, Debug)]
pub struct SteinerForest {
    classes: UnionFind<usize>,
    terminal_count: usize,
    class_count: usize,
    accepted: Vec<ConfirmedPath>,
    edges: BTreeMap<(NodeId, NodeId), Cost>,
}

impl SteinerForest {
    pub fn new(terminal_count: usize) -> Self {
        SteinerForest {
            classes: UnionFind::new(terminal_count),
            terminal_count,
            class_count: terminal_count,
            accepted: Vec::new(),
            edges: BTreeMap::new(),
        }
    }

    pub fn terminal_count(&self) -> usize {
        self.terminal_count
    }

    pub fn connected(&self, a: TerminalIdx, b: TerminalIdx) -> bool {
        self.classes.equiv(a, b)
    }

    pub fn is_spanning(&self) -> bool {
        self.class_count <= 1
    }

    /// Terminals in the same class as `t`.
    pub fn class_of(&self, t: TerminalIdx) -> TerminalSet {
        TerminalSet::from_indices(
            self.terminal_count,
            (0..self.terminal_count).filter(|&x| self.classes.equiv(t, x)),
        )
    }

    /// Adds the path unless its endpoints are already connected.
    pub fn accept(&mut self, path: ConfirmedPath, edge_cost: impl Fn(NodeId, NodeId) -> Cost) -> bool {
        let (a, b) = path.endpoints;
        if !self.classes.union(a, b) {
            return false;
        }
        self.class_count -= 1;
        for w in path.nodes.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            self.edges.entry(key).or_insert_with(|| edge_cost(w[0], w[1]));
        }
        self.accepted.push(path);
        true
    }

    pub fn accepted(&self) -> &[ConfirmedPath] {
        &self.accepted
    }

    /// Distinct graph edges used by accepted paths, as `(u, v, cost)`, `u < v`.
    pub fn edge_set(&self) -> impl Iterator<Item = (NodeId, NodeId, Cost)> + '_ {
        self.edges.iter().map(|(&(u, v), &c)| (u, v, c))
    }

    /// Sum of accepted path costs.
    pub fn path_total(&self) -> Cost {
        self.accepted.iter().map(|p| p.cost).sum()
    }

    /// Cost of the deduplicated edge set.
    pub fn edge_cost(&self) -> Cost {
        self.edges.values().copied().sum()
    }
}

/// Confirmed paths waiting for acceptance, cheapest first (ties by
/// endpoints). Keeps only the cheapest path per endpoint pair.
#[derive(Clone, Debug, Default)]
pub struct PendingPaths {
    queue: BTreeSet<(Cost, TerminalIdx, TerminalIdx)>,
    paths: FxHashMap<(TerminalIdx, TerminalIdx), ConfirmedPath>,
}

impl PendingPaths {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    /// Returns false when an equally cheap or cheaper path for the same
    /// endpoints is already queued.
    pub fn insert(&mut self, path: ConfirmedPath) -> bool {
        let (a, b) = path.endpoints;
        if let Some(old) = self.paths.get(&(a, b)) {
            if old.cost <= path.cost {
                return false;
            }
            self.queue.remove(&(old.cost, a, b));
        }
        self.queue.insert((path.cost, a, b));
        self.paths.insert((a, b), path);
        true
    }

    /// Scans in cost order: paths joining connected terminals are dropped,
    /// paths with cost `≤ bound` are accepted (and `on_accept` runs after
    /// each), the rest stay queued.
    pub fn process(
        &mut self,
        forest: &mut SteinerForest,
        bound: Cost,
        mut on_accept: impl FnMut(&SteinerForest, TerminalIdx, TerminalIdx) -> crate::Result<()>,
        edge_cost: impl Fn(NodeId, NodeId) -> Cost,
    ) -> crate::Result<usize> {
        let mut accepted = 0;
        let keys: Vec<_> = self.queue.iter().copied().collect();
        for key @ (cost, a, b) in keys {
            if forest.connected(a, b) {
                self.queue.remove(&key);
                self.paths.remove(&(a, b));
                continue;
            }
            if cost > bound {
                continue;
            }
            self.queue.remove(&key);
            let path = self.paths.remove(&(a, b)).expect("queued path is stored");
            forest.accept(path, &edge_cost);
            accepted += 1;
            on_accept(forest, a, b)?;
        }
        Ok(accepted)
    }
}
