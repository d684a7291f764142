//! One search wavefront grown from the terminals of a component.
//!
//! Open-set priority queues use lazy deletion: an entry is live only if its
//! node is still open with the same `g`. When the destination set shrinks,
//! `h` can only grow, so stored `f` values become underestimates; they are
//! recomputed when they reach the top of the heap.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Cost, Graph, NodeId};
use crate::heuristic::HeuristicProvider;
use crate::instance::TerminalIdx;
use crate::terminal_set::TerminalSet;

pub type ComponentId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub g: Cost,
    pub parent: Option<NodeId>,
    /// Terminal whose search supplied the current `g`.
    pub root: TerminalIdx,
    pub closed: bool,
    h: Cost,
    h_epoch: u64,
}

/// A component's best open node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Nomination {
    pub component: ComponentId,
    pub node: NodeId,
    pub f: Cost,
    pub g: Cost,
}

impl Nomination {
    /// Global selection order: f, then g, then node id, then component id.
    pub fn key(&self) -> (Cost, Cost, NodeId, ComponentId) {
        (self.f, self.g, self.node, self.component)
    }
}

/// Emitted once per node moved into a closed set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionEvent {
    pub step: u64,
    pub component: ComponentId,
    pub node: NodeId,
    pub g: Cost,
    pub f: Cost,
}

type FEntry = Reverse<(Cost, Cost, NodeId, u64)>;

#[derive(Clone, Debug)]
pub struct Component {
    id: ComponentId,
    terminals: TerminalSet,
    dest: TerminalSet,
    epoch: u64,
    nodes: FxHashMap<NodeId, NodeRecord>,
    open_count: usize,
    by_f: BinaryHeap<FEntry>,
    by_g: BinaryHeap<Reverse<(Cost, NodeId)>>,
    /// keyed by `max(f, 2g)`
    by_pr: BinaryHeap<FEntry>,
    /// closed nodes; live while they keep an open neighbor
    boundary: BinaryHeap<Reverse<(Cost, NodeId)>>,
}

impl Component {
    /// Closed set `{t}`, the neighbors of `t` open at their edge costs.
    pub fn new(
        id: ComponentId,
        graph: &Graph,
        provider: &HeuristicProvider,
        terminal: TerminalIdx,
        node: NodeId,
        dest: TerminalSet,
    ) -> Self {
        let mut terminals = TerminalSet::empty(dest.capacity());
        terminals.insert(terminal);
        let mut dest = dest;
        dest.remove(terminal);
        let mut c = Component {
            id,
            terminals,
            dest,
            epoch: 0,
            nodes: FxHashMap::default(),
            open_count: 0,
            by_f: BinaryHeap::new(),
            by_g: BinaryHeap::new(),
            by_pr: BinaryHeap::new(),
            boundary: BinaryHeap::new(),
        };
        c.nodes.insert(
            node,
            NodeRecord {
                g: Cost::ZERO,
                parent: None,
                root: terminal,
                closed: true,
                h: Cost::ZERO,
                h_epoch: 0,
            },
        );
        c.boundary.push(Reverse((Cost::ZERO, node)));
        for &(v, cost) in graph.neighbors(node) {
            c.relax(provider, v, cost, node, terminal);
        }
        c
    }

    pub fn id(&self) -> ComponentId {
        self.id
    }

    pub fn terminals(&self) -> &TerminalSet {
        &self.terminals
    }

    pub fn destinations(&self) -> &TerminalSet {
        &self.dest
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn record(&self, node: NodeId) -> Option<&NodeRecord> {
        self.nodes.get(&node)
    }

    /// `g(u)`, infinite outside the support.
    pub fn g(&self, node: NodeId) -> Cost {
        self.nodes.get(&node).map_or(Cost::INFINITY, |r| r.g)
    }

    pub fn is_closed(&self, node: NodeId) -> bool {
        self.nodes.get(&node).is_some_and(|r| r.closed)
    }

    pub fn is_open(&self, node: NodeId) -> bool {
        self.nodes.get(&node).is_some_and(|r| !r.closed)
    }

    /// Number of nodes with finite `g`.
    pub fn support_len(&self) -> usize {
        self.nodes.len()
    }

    pub fn open_len(&self) -> usize {
        self.open_count
    }

    /// Every node with finite `g`, open or closed, in arbitrary order.
    pub fn support(&self) -> impl Iterator<Item = (NodeId, &NodeRecord)> + '_ {
        self.nodes.iter().map(|(&u, r)| (u, r))
    }

    fn h(&mut self, provider: &HeuristicProvider, node: NodeId) -> Cost {
        let epoch = self.epoch;
        let rec = self.nodes.get_mut(&node).expect("h of a node outside the support");
        if rec.h_epoch != epoch {
            rec.h = provider.h_to_set(node, &self.dest);
            rec.h_epoch = epoch;
        }
        rec.h
    }

    /// Current `f(u) = g(u) + h(u, D)`.
    pub fn f(&mut self, provider: &HeuristicProvider, node: NodeId) -> Cost {
        let g = self.g(node);
        if !g.is_finite() {
            return Cost::INFINITY;
        }
        g + self.h(provider, node)
    }

    fn push_open(&mut self, provider: &HeuristicProvider, node: NodeId) {
        let g = self.g(node);
        let f = g + self.h(provider, node);
        let epoch = self.epoch;
        self.by_f.push(Reverse((f, g, node, epoch)));
        self.by_g.push(Reverse((g, node)));
        self.by_pr.push(Reverse((f.max(g.double()), g, node, epoch)));
    }

    /// Lowers `g(v)` to `g_u + cost` if that improves it. Returns whether it did.
    fn relax(
        &mut self,
        provider: &HeuristicProvider,
        v: NodeId,
        cost: Cost,
        via: NodeId,
        root: TerminalIdx,
    ) -> Option<Cost> {
        let g_via = self.g(via);
        let candidate = g_via + cost;
        match self.nodes.get_mut(&v) {
            Some(rec) if rec.closed || rec.g <= candidate => return None,
            Some(rec) => {
                rec.g = candidate;
                rec.parent = Some(via);
                rec.root = root;
            }
            None => {
                self.nodes.insert(
                    v,
                    NodeRecord {
                        g: candidate,
                        parent: Some(via),
                        root,
                        closed: false,
                        h: Cost::ZERO,
                        h_epoch: u64::MAX,
                    },
                );
                self.open_count += 1;
            }
        }
        self.push_open(provider, v);
        Some(candidate)
    }

    fn live_open(&self, node: NodeId, g: Cost) -> bool {
        self.nodes.get(&node).is_some_and(|r| !r.closed && r.g == g)
    }

    /// Minimum-f open node, without removing it. Stale entries are dropped and
    /// entries from an older epoch are re-keyed on the way.
    pub fn nominate(&mut self, provider: &HeuristicProvider) -> Option<Nomination> {
        // nothing left to find; other components still bound any path to us
        if self.dest.is_empty() {
            return None;
        }
        while let Some(&Reverse((f, g, node, epoch))) = self.by_f.peek() {
            if !self.live_open(node, g) {
                self.by_f.pop();
                continue;
            }
            if epoch != self.epoch {
                let fresh = g + self.h(provider, node);
                if fresh != f {
                    self.by_f.pop();
                    self.by_f.push(Reverse((fresh, g, node, self.epoch)));
                    continue;
                }
            }
            return Some(Nomination {
                component: self.id,
                node,
                f,
                g,
            });
        }
        None
    }

    /// `f` of the nomination, infinite when the open set is empty.
    pub fn f_nomination(&mut self, provider: &HeuristicProvider) -> Cost {
        self.nominate(provider).map_or(Cost::INFINITY, |n| n.f)
    }

    /// Moves the nominated node into the closed set and relaxes its
    /// neighbors. Every neighbor whose `g` improved is appended to `improved`.
    pub fn expand(
        &mut self,
        graph: &Graph,
        provider: &HeuristicProvider,
        improved: &mut Vec<(NodeId, Cost)>,
    ) -> Result<Nomination> {
        let nom = self
            .nominate(provider)
            .ok_or_else(|| Error::ContractViolation(format!("component {} has an empty open set", self.id)))?;
        self.by_f.pop();
        let u = nom.node;
        let rec = self.nodes.get_mut(&u).expect("nominated node is in the support");
        rec.closed = true;
        let root = rec.root;
        self.open_count -= 1;
        self.boundary.push(Reverse((nom.g, u)));
        for &(v, cost) in graph.neighbors(u) {
            if let Some(g) = self.relax(provider, v, cost, u, root) {
                improved.push((v, g));
            }
        }
        Ok(nom)
    }

    /// Removes terminals from the destination set. `f` values are refreshed
    /// lazily, except when the set empties: `h` then drops to zero and the
    /// queues are rebuilt at once.
    pub fn reprioritize(&mut self, provider: &HeuristicProvider, removed: &TerminalSet) {
        if self.dest.subtract(removed) {
            self.epoch += 1;
            if self.dest.is_empty() {
                self.rebuild_heaps(provider);
            }
        }
    }

    /// Replaces the destination set. Shrinking is handled lazily; if any
    /// terminal is added or the set empties, every open `f` is recomputed now.
    pub fn set_destinations(&mut self, provider: &HeuristicProvider, mut dest: TerminalSet) {
        dest.subtract(&self.terminals);
        if dest == self.dest {
            return;
        }
        let grows = dest.iter().any(|t| !self.dest.contains(t));
        self.dest = dest;
        self.epoch += 1;
        if grows || self.dest.is_empty() {
            self.rebuild_heaps(provider);
        }
    }

    /// Recomputes every open `f` against the current destination set and
    /// rebuilds all queues.
    pub fn rebuild_heaps(&mut self, provider: &HeuristicProvider) {
        self.epoch += 1;
        self.by_f.clear();
        self.by_g.clear();
        self.by_pr.clear();
        self.boundary.clear();
        let mut open = Vec::new();
        for (&u, rec) in &self.nodes {
            if rec.closed {
                self.boundary.push(Reverse((rec.g, u)));
            } else {
                open.push(u);
            }
        }
        open.sort_unstable();
        self.open_count = open.len();
        for u in open {
            self.push_open(provider, u);
        }
    }

    /// Smallest `g` over the open set.
    pub fn gmin(&mut self) -> Cost {
        while let Some(&Reverse((g, node))) = self.by_g.peek() {
            if self.live_open(node, g) {
                return g;
            }
            self.by_g.pop();
        }
        Cost::INFINITY
    }

    /// Smallest `max(f, 2g)` over the open set.
    pub fn prmin(&mut self, provider: &HeuristicProvider) -> Cost {
        while let Some(&Reverse((pr, g, node, epoch))) = self.by_pr.peek() {
            if !self.live_open(node, g) {
                self.by_pr.pop();
                continue;
            }
            if epoch != self.epoch {
                let fresh = (g + self.h(provider, node)).max(g.double());
                if fresh != pr {
                    self.by_pr.pop();
                    self.by_pr.push(Reverse((fresh, g, node, self.epoch)));
                    continue;
                }
            }
            return pr;
        }
        Cost::INFINITY
    }

    fn has_open_neighbor(&self, graph: &Graph, node: NodeId) -> bool {
        graph.neighbors(node).iter().any(|&(v, _)| self.is_open(v))
    }

    /// Smallest `g` over closed nodes that have an open neighbor.
    pub fn rmin(&mut self, graph: &Graph) -> Cost {
        while let Some(&Reverse((g, node))) = self.boundary.peek() {
            let rec = self.nodes[&node];
            if rec.closed && rec.g == g && self.has_open_neighbor(graph, node) {
                return g;
            }
            self.boundary.pop();
        }
        Cost::INFINITY
    }

    /// [`Component::gmin`] by full scan.
    pub fn gmin_scan(&self) -> Cost {
        self.nodes
            .values()
            .filter(|r| !r.closed)
            .map(|r| r.g)
            .min()
            .unwrap_or(Cost::INFINITY)
    }

    /// [`Component::prmin`] by full scan.
    pub fn prmin_scan(&self, provider: &HeuristicProvider) -> Cost {
        self.nodes
            .iter()
            .filter(|(_, r)| !r.closed)
            .map(|(&u, r)| (r.g + provider.h_to_set(u, &self.dest)).max(r.g.double()))
            .min()
            .unwrap_or(Cost::INFINITY)
    }

    /// [`Component::rmin`] by full scan.
    pub fn rmin_scan(&self, graph: &Graph) -> Cost {
        self.nodes
            .iter()
            .filter(|&(&u, r)| r.closed && self.has_open_neighbor(graph, u))
            .map(|(_, r)| r.g)
            .min()
            .unwrap_or(Cost::INFINITY)
    }

    /// Minimum open `f` by full scan, with `h` against the current
    /// destination set.
    pub fn fmin_scan(&self, provider: &HeuristicProvider) -> Cost {
        self.nodes
            .iter()
            .filter(|(_, r)| !r.closed)
            .map(|(&u, r)| r.g + provider.h_to_set(u, &self.dest))
            .min()
            .unwrap_or(Cost::INFINITY)
    }

    /// Follows parent pointers from `node` back to a terminal. Returns the
    /// terminal-to-`node` sequence, its summed edge cost, and the terminal
    /// the chain ends at.
    pub fn reconstruct_path(&self, graph: &Graph, node: NodeId) -> Result<(Vec<NodeId>, Cost, TerminalIdx)> {
        let broken = |msg: String| Error::Internal(format!("component {}: {msg}", self.id));
        let mut rec = *self
            .nodes
            .get(&node)
            .ok_or_else(|| broken(format!("node {node} has no finite g")))?;
        let mut path = vec![node];
        let mut cost = Cost::ZERO;
        let mut here = node;
        while let Some(parent) = rec.parent {
            if path.len() > graph.node_count() {
                return Err(broken(format!("parent chain from {node} does not terminate")));
            }
            cost += graph
                .edge_cost(here, parent)
                .ok_or_else(|| broken(format!("parent {parent} of {here} is not adjacent")))?;
            path.push(parent);
            here = parent;
            rec = *self
                .nodes
                .get(&parent)
                .ok_or_else(|| broken(format!("parent {parent} left the support")))?;
        }
        if !self.terminals.contains(rec.root) || rec.g != Cost::ZERO {
            return Err(broken(format!("chain from {node} ends at non-terminal {here}")));
        }
        path.reverse();
        Ok((path, cost, rec.root))
    }

    /// Fuses two components. `g` is the pointwise minimum over both supports;
    /// a node stays closed unless the other side holds it open with a
    /// strictly smaller `g`. Parents and roots come from the side that
    /// supplied the winning `g` (ties keep the closed side, then `a`).
    pub fn merge(a: Component, b: Component, id: ComponentId, provider: &HeuristicProvider) -> Result<Component> {
        if a.id == b.id {
            return Err(Error::ContractViolation(format!(
                "component {} merged with itself",
                a.id
            )));
        }
        let mut terminals = a.terminals.clone();
        terminals.union_with(&b.terminals);
        let mut dest = a.dest.clone();
        dest.union_with(&b.dest);
        dest.subtract(&terminals);

        let (mut big, small, big_is_a) = if a.nodes.len() >= b.nodes.len() {
            (a.nodes, b.nodes, true)
        } else {
            (b.nodes, a.nodes, false)
        };
        for (u, theirs) in small {
            match big.get_mut(&u) {
                None => {
                    big.insert(u, theirs);
                }
                Some(ours) => {
                    let (x, y) = if big_is_a { (*ours, theirs) } else { (theirs, *ours) };
                    *ours = merge_records(x, y);
                }
            }
        }
        let mut merged = Component {
            id,
            terminals,
            dest,
            epoch: a.epoch.max(b.epoch),
            nodes: big,
            open_count: 0,
            by_f: BinaryHeap::new(),
            by_g: BinaryHeap::new(),
            by_pr: BinaryHeap::new(),
            boundary: BinaryHeap::new(),
        };
        merged.rebuild_heaps(provider);
        Ok(merged)
    }
}

/// Record for a node present in both components (`x` from the first).
fn merge_records(x: NodeRecord, y: NodeRecord) -> NodeRecord {
    match (x.closed, y.closed) {
        (true, true) => {
            if y.g < x.g {
                y
            } else {
                x
            }
        }
        (true, false) => {
            if y.g < x.g {
                y
            } else {
                x
            }
        }
        (false, true) => {
            if x.g < y.g {
                x
            } else {
                y
            }
        }
        (false, false) => {
            if y.g < x.g {
                y
            } else {
                x
            }
        }
    }
}
