//! Naive Kruskal: metric completion by one uniform-cost search per terminal,
//! then a minimum spanning tree over the completion.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cost, NodeId};
use crate::instance::{Instance, TerminalIdx};
use crate::steiner::{ConfirmedPath, RunStats, SolveOutput, SteinerForest};

/// Pairwise least costs between terminals with one witness path per pair.
#[derive(Clone, Debug)]
pub struct MetricCompletion {
    /// keyed by `(i, j)` with `i < j`; paths run from `i` to `j`
    pub pairs: BTreeMap<(TerminalIdx, TerminalIdx), ConfirmedPath>,
    /// Settled nodes summed over all sources.
    pub expanded: u64,
}

struct SourceRun {
    expanded: u64,
    paths: Vec<ConfirmedPath>,
}

fn search_from(instance: &Instance, source: TerminalIdx) -> Result<SourceRun> {
    let graph = instance.graph();
    let n = graph.node_count();
    let mut dist = vec![Cost::INFINITY; n];
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut settled = vec![false; n];
    let start = instance.terminal_node(source);
    dist[start] = Cost::ZERO;
    let mut heap = BinaryHeap::from([Reverse((Cost::ZERO, start))]);
    let mut remaining = instance.terminal_count() - 1;
    let mut expanded = 0;
    while let Some(Reverse((d, u))) = heap.pop() {
        if settled[u] || d != dist[u] {
            continue;
        }
        settled[u] = true;
        expanded += 1;
        if u != start && instance.terminal_index(u).is_some() {
            remaining -= 1;
            if remaining == 0 {
                break;
            }
        }
        for &(v, c) in graph.neighbors(u) {
            let nd = d + c;
            if !settled[v] && nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some(u);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    if remaining > 0 {
        return Err(Error::Unsolvable);
    }
    let mut paths = Vec::new();
    for other in source + 1..instance.terminal_count() {
        let target = instance.terminal_node(other);
        let mut nodes = vec![target];
        let mut here = target;
        while let Some(p) = parent[here] {
            nodes.push(p);
            here = p;
        }
        nodes.reverse();
        paths.push(ConfirmedPath::new(source, other, dist[target], nodes));
    }
    Ok(SourceRun { expanded, paths })
}

/// Runs one search per terminal, each halting once every other terminal is
/// settled.
pub fn metric_completion(instance: &Instance) -> Result<MetricCompletion> {
    let runs: Vec<SourceRun> = (0..instance.terminal_count())
        .into_par_iter()
        .map(|t| search_from(instance, t))
        .collect::<Result<_>>()?;
    let mut pairs = BTreeMap::new();
    let mut expanded = 0;
    for run in runs {
        expanded += run.expanded;
        for p in run.paths {
            pairs.insert(p.endpoints, p);
        }
    }
    Ok(MetricCompletion { pairs, expanded })
}

/// Kruskal over the completion: pairs sorted by cost then endpoint ids.
pub fn kruskal_mst(instance: &Instance, completion: &MetricCompletion) -> SteinerForest {
    let graph = instance.graph();
    let mut order: Vec<&ConfirmedPath> = completion.pairs.values().collect();
    order.sort_by_key(|p| (p.cost, p.endpoints));
    let mut forest = SteinerForest::new(instance.terminal_count());
    for p in order {
        if forest.is_spanning() {
            break;
        }
        forest.accept(p.clone(), |u, v| graph.edge_cost(u, v).unwrap_or(Cost::INFINITY));
    }
    forest
}

pub fn solve_kruskal(instance: &Instance) -> Result<SolveOutput> {
    let completion = metric_completion(instance)?;
    let forest = kruskal_mst(instance, &completion);
    let confirmed: Vec<ConfirmedPath> = completion.pairs.values().cloned().collect();
    Ok(SolveOutput {
        forest,
        stats: RunStats {
            expanded: completion.expanded,
            iterations: 0,
            confirmed: confirmed.len() as u64,
            ..RunStats::default()
        },
        confirmed,
    })
}
