use crate::error::{Error, Result};
use crate::graph::Cost;
use crate::heuristic::HeuristicProvider;
use crate::instance::Instance;
use crate::search::{Component, ExpansionEvent, Nomination};
use crate::terminal_set::TerminalSet;

use super::{ConfirmedPath, Counter, PendingPaths, RunStats, SolveOutput, SolverConfig, SteinerForest};

pub(super) fn solve(
    instance: &Instance,
    provider: &HeuristicProvider,
    config: &SolverConfig,
    trace: &mut dyn FnMut(&ExpansionEvent),
) -> Result<SolveOutput> {
    let graph = instance.graph();
    let n = instance.terminal_count();
    let mut counter = Counter::new(trace);
    let mut comps: Vec<Component> = (0..n)
        .map(|t| {
            let node = instance.terminal_node(t);
            let c = Component::new(t, graph, provider, t, node, TerminalSet::full(n));
            counter.record(t, node, Cost::ZERO, provider.h_to_set(node, c.destinations()));
            c
        })
        .collect();

    let mut forest = SteinerForest::new(n);
    let mut pending = PendingPaths::new();
    let mut confirmed = Vec::new();
    let mut iterations = 0u64;
    let mut sink = Vec::new();

    while !forest.is_spanning() {
        iterations += 1;
        let best = comps
            .iter_mut()
            .filter_map(|c| c.nominate(provider))
            .min_by_key(Nomination::key);
        if let Some(nom) = best {
            let t = nom.component;
            sink.clear();
            comps[t].expand(graph, provider, &mut sink)?;
            counter.record(t, nom.node, nom.g, nom.f);
            if let Some(found) = instance.terminal_index(nom.node) {
                if comps[t].destinations().contains(found) {
                    let (nodes, cost, root) = comps[t].reconstruct_path(graph, nom.node)?;
                    debug_assert_eq!((root, cost), (t, nom.g));
                    let path = ConfirmedPath::new(t, found, cost, nodes);
                    confirmed.push(path.clone());
                    pending.insert(path);
                    if config.reprioritize {
                        comps[t].reprioritize(provider, &TerminalSet::from_indices(n, [found]));
                        comps[found].reprioritize(provider, &TerminalSet::from_indices(n, [t]));
                        if config.eager_refresh {
                            comps[t].rebuild_heaps(provider);
                            comps[found].rebuild_heaps(provider);
                        }
                    }
                }
            }
        }

        let f_star = comps
            .iter_mut()
            .map(|c| c.f_nomination(provider))
            .min()
            .unwrap_or(Cost::INFINITY);
        let accepted = pending.process(
            &mut forest,
            f_star,
            |forest, a, _| {
                let class = forest.class_of(a);
                let mut dest = TerminalSet::full(n);
                dest.subtract(&class);
                for t in class.iter() {
                    comps[t].set_destinations(provider, dest.clone());
                    if config.eager_refresh {
                        comps[t].rebuild_heaps(provider);
                    }
                }
                Ok(())
            },
            |u, v| graph.edge_cost(u, v).unwrap_or(Cost::INFINITY),
        )?;
        if best.is_none() && accepted == 0 && !forest.is_spanning() {
            return Err(Error::Unsolvable);
        }
    }

    Ok(SolveOutput {
        forest,
        stats: RunStats {
            expanded: counter.expanded,
            iterations,
            confirmed: confirmed.len() as u64,
            ..RunStats::default()
        },
        confirmed,
    })
}
