use rustc_hash::FxHashMap;

use crate::graph::{Cost, NodeId};
use crate::search::{Component, ComponentId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeetRow {
    pub cost: Cost,
    pub node: NodeId,
    /// Cost at which this pair last emitted a path.
    pub confirmed: Option<Cost>,
}

/// For every pair of live components, the cheapest node where their `g`
/// values meet (ties to the smaller node id). Rows are updated whenever a
/// node's `g` improves in one component.
#[derive(Clone, Debug)]
pub struct PairMeetTable {
    rows: FxHashMap<(ComponentId, ComponentId), MeetRow>,
    /// components whose support contains the node
    touched: Vec<Vec<ComponentId>>,
}

fn key(a: ComponentId, b: ComponentId) -> (ComponentId, ComponentId) {
    (a.min(b), a.max(b))
}

impl PairMeetTable {
    pub fn new(node_count: usize) -> Self {
        PairMeetTable {
            rows: FxHashMap::default(),
            touched: vec![Vec::new(); node_count],
        }
    }

    pub fn row(&self, a: ComponentId, b: ComponentId) -> Option<&MeetRow> {
        self.rows.get(&key(a, b))
    }

    /// Best meeting cost, infinite if the pair has not met.
    pub fn best(&self, a: ComponentId, b: ComponentId) -> Cost {
        self.row(a, b).map_or(Cost::INFINITY, |r| r.cost)
    }

    pub fn touched(&self, node: NodeId) -> &[ComponentId] {
        &self.touched[node]
    }

    pub fn touch(&mut self, node: NodeId, component: ComponentId) {
        let list = &mut self.touched[node];
        if !list.contains(&component) {
            list.push(component);
        }
    }

    pub fn offer(&mut self, a: ComponentId, b: ComponentId, cost: Cost, node: NodeId) {
        if !cost.is_finite() {
            return;
        }
        let row = self.rows.entry(key(a, b)).or_insert(MeetRow {
            cost: Cost::INFINITY,
            node,
            confirmed: None,
        });
        if (cost, node) < (row.cost, row.node) {
            row.cost = cost;
            row.node = node;
        }
    }

    /// Records that `comp` now reaches `node` at `g` and offers the meeting
    /// with every other component holding the node.
    pub fn relaxed(&mut self, comp: &Component, node: NodeId, g: Cost, others: &[Option<Component>]) {
        self.touch(node, comp.id());
        for i in 0..self.touched[node].len() {
            let other = self.touched[node][i];
            if other == comp.id() {
                continue;
            }
            if let Some(Some(c)) = others.get(other) {
                let total = g + c.g(node);
                self.offer(comp.id(), other, total, node);
            }
        }
    }

    /// Cheapest meeting cost among pairs that have not emitted a path at that
    /// cost yet.
    pub fn cheapest_unconfirmed(&self) -> Cost {
        self.rows
            .values()
            .filter(|r| r.confirmed.is_none_or(|c| c > r.cost))
            .map(|r| r.cost)
            .min()
            .unwrap_or(Cost::INFINITY)
    }

    /// Marks a pair as having emitted a path at `cost`. Returns false if it
    /// already emitted one at least as cheap.
    pub fn mark_confirmed(&mut self, a: ComponentId, b: ComponentId, cost: Cost) -> bool {
        match self.rows.get_mut(&key(a, b)) {
            Some(row) if row.confirmed.is_none_or(|c| cost < c) => {
                row.confirmed = Some(cost);
                true
            }
            _ => false,
        }
    }

    /// Replaces components `a` and `b` by `merged`: each row with a third
    /// component becomes the minimum of the two old rows, unconfirmed.
    /// `support` lists every node of the merged component.
    pub fn merge(
        &mut self,
        a: ComponentId,
        b: ComponentId,
        merged: ComponentId,
        live: &[ComponentId],
        support: impl IntoIterator<Item = NodeId>,
    ) {
        for &c in live {
            if c == a || c == b || c == merged {
                continue;
            }
            let best = [self.rows.remove(&key(a, c)), self.rows.remove(&key(b, c))]
                .into_iter()
                .flatten()
                .min_by_key(|r| (r.cost, r.node));
            if let Some(row) = best {
                self.rows.insert(key(merged, c), MeetRow { confirmed: None, ..row });
            }
        }
        self.rows.remove(&key(a, b));
        for node in support {
            let list = &mut self.touched[node];
            list.retain(|&c| c != a && c != b);
            list.push(merged);
        }
    }

    /// Best meeting cost of two components by full scan of their supports.
    pub fn scan(a: &Component, b: &Component) -> (Cost, Option<NodeId>) {
        let (small, large) = if a.support_len() <= b.support_len() {
            (a, b)
        } else {
            (b, a)
        };
        small
            .support()
            .filter_map(|(u, r)| {
                let other = large.g(u);
                other.is_finite().then_some((r.g + other, u))
            })
            .min()
            .map_or((Cost::INFINITY, None), |(c, u)| (c, Some(u)))
    }
}
