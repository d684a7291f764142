//! From a Steiner tree to an `s → d` walk through every goal: double the
//! tree, drop one copy of the `s–d` tree path, walk an Euler path, trim.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Cost, NodeId};
use crate::instance::Instance;
use crate::steiner::SteinerForest;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MgpfSolution {
    pub walk: Vec<NodeId>,
    pub cost: Cost,
    /// Cost of the tree the walk was built from (the accepted edge set after
    /// pruning cycles and non-terminal leaves).
    pub tree_edge_cost: Cost,
    /// Sum of accepted terminal-to-terminal path costs.
    pub tree_path_total: Cost,
    /// Cost of the `s–d` path inside the tree.
    pub tree_sd_cost: Cost,
    /// Euler walk cost before trimming.
    pub untrimmed_cost: Cost,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: Ratio<u64>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// `cost / lower_bound` in lowest terms; `1` when both are zero.
pub fn ratio_of(cost: Cost, lower_bound: Cost) -> Ratio<u64> {
    if lower_bound == Cost::ZERO {
        return if cost == Cost::ZERO {
            Ratio::from_integer(1)
        } else {
            Ratio::new_raw(u64::MAX, 1)
        };
    }
    Ratio::new(cost.value(), lower_bound.value())
}

pub fn aposteriori(solution: &MgpfSolution) -> Ratio<u64> {
    ratio_of(solution.cost, solution.tree_edge_cost)
}

/// Spanning tree of the accepted edge set (cheapest edges first, ties by
/// endpoints) with non-terminal leaves stripped.
fn prune(forest: &SteinerForest, instance: &Instance) -> BTreeMap<NodeId, Vec<(NodeId, Cost)>> {
    let mut edges: Vec<(Cost, NodeId, NodeId)> = forest.edge_set().map(|(u, v, c)| (c, u, v)).collect();
    edges.sort_unstable();
    let mut index: BTreeMap<NodeId, usize> = BTreeMap::new();
    for &(_, u, v) in &edges {
        let next = index.len();
        index.entry(u).or_insert(next);
        let next = index.len();
        index.entry(v).or_insert(next);
    }
    let mut uf = UnionFind::new(index.len());
    let mut adj: BTreeMap<NodeId, Vec<(NodeId, Cost)>> = BTreeMap::new();
    for (c, u, v) in edges {
        if uf.union(index[&u], index[&v]) {
            adj.entry(u).or_default().push((v, c));
            adj.entry(v).or_default().push((u, c));
        }
    }
    let mut leaves: Vec<NodeId> = adj
        .iter()
        .filter(|(&u, list)| list.len() == 1 && instance.terminal_index(u).is_none())
        .map(|(&u, _)| u)
        .collect();
    while let Some(u) = leaves.pop() {
        let Some(list) = adj.remove(&u) else { continue };
        for (v, _) in list {
            let other = adj.get_mut(&v).expect("tree edge is symmetric");
            other.retain(|&(w, _)| w != u);
            if other.len() == 1 && instance.terminal_index(v).is_none() {
                leaves.push(v);
            }
        }
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    adj
}

/// Nodes of the unique tree path from `from` to `to`.
fn tree_path(adj: &BTreeMap<NodeId, Vec<(NodeId, Cost)>>, from: NodeId, to: NodeId) -> Option<Vec<NodeId>> {
    let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut stack = vec![from];
    parent.insert(from, from);
    while let Some(u) = stack.pop() {
        if u == to {
            break;
        }
        for &(v, _) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(v) {
                e.insert(u);
                stack.push(v);
            }
        }
    }
    parent.get(&to)?;
    let mut path = vec![to];
    let mut here = to;
    while here != from {
        here = parent[&here];
        path.push(here);
    }
    path.reverse();
    Some(path)
}

/// Hierholzer on a multigraph given as `(u, v)` edge copies. Returns an
/// Euler trail starting at `start`.
fn euler_trail(edges: &[(NodeId, NodeId)], start: NodeId) -> Vec<NodeId> {
    let mut incident: BTreeMap<NodeId, Vec<(NodeId, usize)>> = BTreeMap::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident.entry(u).or_default().push((v, i));
        incident.entry(v).or_default().push((u, i));
    }
    for list in incident.values_mut() {
        list.sort_unstable();
    }
    let mut used = vec![false; edges.len()];
    let mut cursor: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut stack = vec![start];
    let mut trail = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        let list = incident.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        let at = cursor.entry(v).or_insert(0);
        while *at < list.len() && used[list[*at].1] {
            *at += 1;
        }
        if let Some(&(w, e)) = list.get(*at) {
            used[e] = true;
            stack.push(w);
        } else {
            trail.push(v);
            stack.pop();
        }
    }
    trail.reverse();
    trail
}

/// Loop-erases `walk[from..]`, keeping the prefix untouched.
fn trim_suffix(walk: &[NodeId], from: usize) -> Vec<NodeId> {
    let mut out = walk[..from].to_vec();
    let mut position: BTreeMap<NodeId, usize> = BTreeMap::new();
    for &u in &walk[from..] {
        if let Some(&p) = position.get(&u) {
            for dropped in out.drain(p + 1..) {
                position.remove(&dropped);
            }
        } else {
            position.insert(u, out.len());
            out.push(u);
        }
    }
    out
}

fn walk_cost(instance: &Instance, walk: &[NodeId]) -> Result<Cost> {
    walk.windows(2)
        .map(|w| {
            instance
                .graph()
                .edge_cost(w[0], w[1])
                .ok_or_else(|| Error::Internal(format!("walk hop {} - {} is not an edge", w[0], w[1])))
        })
        .sum()
}

/// Turns a spanning forest into a feasible MGPF walk.
pub fn tree_to_walk(forest: &SteinerForest, instance: &Instance) -> Result<MgpfSolution> {
    if !forest.is_spanning() || forest.terminal_count() != instance.terminal_count() {
        return Err(Error::ContractViolation("forest does not span the terminals".into()));
    }
    let (s, d) = (instance.origin(), instance.destination());
    let adj = prune(forest, instance);
    let sd = tree_path(&adj, s, d)
        .ok_or_else(|| Error::Internal("origin and destination are not joined by the tree".into()))?;
    let sd_edges: std::collections::BTreeSet<(NodeId, NodeId)> =
        sd.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();

    let mut copies = Vec::new();
    let mut tree_cost = Cost::ZERO;
    let mut sd_cost = Cost::ZERO;
    for (&u, list) in &adj {
        for &(v, c) in list {
            if u < v {
                tree_cost += c;
                copies.push((u, v));
                if sd_edges.contains(&(u, v)) {
                    sd_cost += c;
                } else {
                    copies.push((u, v));
                }
            }
        }
    }
    let euler = euler_trail(&copies, s);
    if euler.len() != copies.len() + 1 || euler.last() != Some(&d) {
        return Err(Error::Internal("Euler trail does not use every edge copy".into()));
    }
    let untrimmed_cost = walk_cost(instance, &euler)?;

    let mut last_first_visit = 0;
    for &goal in instance.goals() {
        let at = euler
            .iter()
            .position(|&u| u == goal)
            .ok_or_else(|| Error::Internal(format!("goal {goal} is not on the tree")))?;
        last_first_visit = last_first_visit.max(at);
    }
    let walk = trim_suffix(&euler, last_first_visit);
    let cost = walk_cost(instance, &walk)?;
    Ok(MgpfSolution {
        walk,
        cost,
        tree_edge_cost: tree_cost,
        tree_path_total: forest.path_total(),
        tree_sd_cost: sd_cost,
        untrimmed_cost,
        ratio: ratio_of(cost, tree_cost),
    })
}

/// The serialized form of a solution: header `cost tree_cost ratio`, then
/// one node id per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRecord {
    pub cost: Cost,
    pub tree_edge_cost: Cost,
    pub ratio: Ratio<u64>,
    pub walk: Vec<NodeId>,
}

impl From<&MgpfSolution> for SolutionRecord {
    fn from(s: &MgpfSolution) -> Self {
        SolutionRecord {
            cost: s.cost,
            tree_edge_cost: s.tree_edge_cost,
            ratio: s.ratio,
            walk: s.walk.clone(),
        }
    }
}

impl SolutionRecord {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.cost, self.tree_edge_cost, self.ratio);
        for u in &self.walk {
            writeln!(out, "{u}").expect("writing to a String");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty solution file"))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let [cost, tree, ratio] = words.as_slice() else {
            return Err(Error::parse(1, "header must be `cost tree_cost ratio`"));
        };
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| Error::parse(1, format!("invalid number {s:?}")))
        };
        let ratio = match ratio.split_once('/') {
            Some((p, q)) => {
                let q = num(q)?;
                if q == 0 {
                    return Err(Error::parse(1, "ratio has a zero denominator"));
                }
                Ratio::new(num(p)?, q)
            }
            None => Ratio::from_integer(num(ratio)?),
        };
        let mut walk = Vec::new();
        for (i, line) in lines {
            walk.push(
                line.trim()
                    .parse()
                    .map_err(|_| Error::parse(i + 1, format!("invalid node id {:?}", line.trim())))?,
            );
        }
        Ok(SolutionRecord {
            cost: Cost(num(cost)?),
            tree_edge_cost: Cost(num(tree)?),
            ratio,
            walk,
        })
    }

    /// Every violated solution invariant, in a fixed order; empty when valid.
    pub fn violations(&self, instance: &Instance) -> Vec<String> {
        let mut out = Vec::new();
        let graph = instance.graph();
        if self.walk.first() != Some(&instance.origin()) {
            out.push(format!("walk does not start at origin {}", instance.origin()));
        }
        if self.walk.last() != Some(&instance.destination()) {
            out.push(format!("walk does not end at destination {}", instance.destination()));
        }
        for &goal in instance.goals() {
            if !self.walk.contains(&goal) {
                out.push(format!("goal {goal} is never visited"));
            }
        }
        let mut total = Cost::ZERO;
        for (i, w) in self.walk.windows(2).enumerate() {
            match (graph.contains(w[0]) && graph.contains(w[1]))
                .then(|| graph.edge_cost(w[0], w[1]))
                .flatten()
            {
                Some(c) => total += c,
                None => out.push(format!("hop {i} ({} -> {}) is not an edge", w[0], w[1])),
            }
        }
        if total != self.cost {
            out.push(format!("walk costs {total} but the record says {}", self.cost));
        }
        if self.cost > self.tree_edge_cost.double() {
            out.push(format!(
                "cost {} exceeds twice the tree cost {}",
                self.cost, self.tree_edge_cost
            ));
        }
        if self.ratio != ratio_of(self.cost, self.tree_edge_cost) {
            out.push(format!("ratio {} is not cost / tree_cost", self.ratio));
        }
        let one = Ratio::from_integer(1);
        if self.ratio < one || self.ratio > Ratio::from_integer(2) {
            out.push(format!("ratio {} is outside [1, 2]", self.ratio));
        }
        out
    }
}

/// Checks every solution invariant. Returns whether the solution is valid
/// and the list of violations.
pub fn validate_solution(solution: &MgpfSolution, instance: &Instance) -> (bool, Vec<String>) {
    let mut violations = SolutionRecord::from(solution).violations(instance);
    let expected = Cost(
        solution
            .tree_edge_cost
            .double()
            .0
            .saturating_sub(solution.tree_sd_cost.0),
    );
    if solution.untrimmed_cost != expected {
        violations.push(format!(
            "untrimmed walk costs {} but 2 * tree - sd path = {} - {}",
            solution.untrimmed_cost,
            solution.tree_edge_cost.double(),
            solution.tree_sd_cost
        ));
    }
    if solution.cost > solution.untrimmed_cost {
        violations.push("trimming increased the cost".into());
    }
    (violations.is_empty(), violations)
}
