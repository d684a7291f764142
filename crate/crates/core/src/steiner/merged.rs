use crate::error::{Error, Result};
use crate::graph::{Cost, Graph, NodeId};
use crate::heuristic::HeuristicProvider;
use crate::instance::{Instance, TerminalIdx};
use crate::search::{Component, ComponentId, ExpansionEvent, Nomination};
use crate::terminal_set::TerminalSet;

use super::{
    ConfirmedPath, Counter, Criterion, FrontierBounds, PairMeetTable, PendingPaths, RunStats, SolveOutput,
    SolverConfig, SteinerForest,
};

struct State<'a> {
    graph: &'a Graph,
    provider: &'a HeuristicProvider,
    criterion: Criterion,
    config: &'a SolverConfig,
    c_min: Cost,
    comps: Vec<Option<Component>>,
    /// live component holding each terminal
    owner: Vec<ComponentId>,
    table: PairMeetTable,
    pending: PendingPaths,
    confirmed: Vec<ConfirmedPath>,
}

impl State<'_> {
    fn live(&self) -> Vec<ComponentId> {
        (0..self.comps.len()).filter(|&i| self.comps[i].is_some()).collect()
    }

    fn comp(&mut self, id: ComponentId) -> &mut Component {
        self.comps[id].as_mut().expect("live component")
    }

    fn bounds(&mut self, id: ComponentId) -> FrontierBounds {
        let provider = self.provider;
        let c = self.comp(id);
        FrontierBounds {
            f_nom: c.f_nomination(provider),
            gmin: c.gmin(),
            prmin: c.prmin(provider),
        }
    }

    /// Tests the pair and queues its meeting path when confirmed.
    fn check_pair(&mut self, a: ComponentId, b: ComponentId) -> Result<()> {
        let Some(row) = self.table.row(a, b).copied() else {
            return Ok(());
        };
        #[cfg(test)]
        {
            let (ca, cb) = (self.comps[a].as_ref().unwrap(), self.comps[b].as_ref().unwrap());
            assert_eq!(row.cost, PairMeetTable::scan(ca, cb).0, "meet row {a}-{b}");
        }
        if row.confirmed.is_some_and(|c| c <= row.cost) {
            return Ok(());
        }
        let (ba, bb) = (self.bounds(a), self.bounds(b));
        if !self.criterion.confirms(row.cost, &ba, &bb, self.c_min) {
            return Ok(());
        }
        self.table.mark_confirmed(a, b, row.cost);
        let path = self.meeting_path(a, b, row.node)?;
        self.confirmed.push(path.clone());
        self.pending.insert(path);
        if self.config.reprioritize {
            let provider = self.provider;
            let ta = self.comp(a).terminals().clone();
            let tb = self.comp(b).terminals().clone();
            self.comp(a).reprioritize(provider, &tb);
            self.comp(b).reprioritize(provider, &ta);
            if self.config.eager_refresh {
                self.comp(a).rebuild_heaps(provider);
                self.comp(b).rebuild_heaps(provider);
            }
        }
        Ok(())
    }

    /// Terminal of `a` to `node` to terminal of `b`.
    fn meeting_path(&self, a: ComponentId, b: ComponentId, node: NodeId) -> Result<ConfirmedPath> {
        let ca = self.comps[a].as_ref().expect("live component");
        let cb = self.comps[b].as_ref().expect("live component");
        let (mut nodes, cost_a, ta) = ca.reconstruct_path(self.graph, node)?;
        let (tail, cost_b, tb) = cb.reconstruct_path(self.graph, node)?;
        nodes.extend(tail.iter().rev().skip(1));
        Ok(ConfirmedPath::new(ta, tb, cost_a + cost_b, nodes))
    }

    /// Records `g` improvements of component `id` in the meeting table.
    fn note_relaxations(&mut self, id: ComponentId, improved: &[(NodeId, Cost)]) {
        let comp = self.comps[id].as_ref().expect("live component");
        for &(v, g) in improved {
            self.table.relaxed(comp, v, g, &self.comps);
        }
    }

    fn f_star(&mut self) -> Cost {
        let provider = self.provider;
        let graph = self.graph;
        let mut f_min = Cost::INFINITY;
        let mut r = [Cost::INFINITY; 2];
        for id in self.live() {
            let c = self.comp(id);
            f_min = f_min.min(c.f_nomination(provider));
            let rmin = c.rmin(graph);
            if rmin < r[0] {
                r = [rmin, r[0]];
            } else if rmin < r[1] {
                r[1] = rmin;
            }
        }
        let bound = f_min.max(r[0] + r[1]);
        // a met pair that is still unconfirmed will emit a path no dearer
        // than its meeting cost
        bound.min(self.table.cheapest_unconfirmed())
    }

    fn merge(&mut self, ta: TerminalIdx, tb: TerminalIdx) -> Result<()> {
        let (a, b) = (self.owner[ta], self.owner[tb]);
        if a == b {
            return Err(Error::Internal(format!(
                "accepted path joins terminals {ta} and {tb} already in component {a}"
            )));
        }
        let id = self.comps.len();
        let ca = self.comps[a].take().expect("live component");
        let cb = self.comps[b].take().expect("live component");
        let merged = Component::merge(ca, cb, id, self.provider)?;
        for t in merged.terminals().iter() {
            self.owner[t] = id;
        }
        let live = self.live();
        self.table.merge(a, b, id, &live, merged.support().map(|(u, _)| u));
        self.comps.push(Some(merged));
        Ok(())
    }
}

pub(super) fn solve(
    instance: &Instance,
    provider: &HeuristicProvider,
    criterion: Criterion,
    config: &SolverConfig,
    trace: &mut dyn FnMut(&ExpansionEvent),
) -> Result<SolveOutput> {
    let graph = instance.graph();
    let n = instance.terminal_count();
    let mut counter = Counter::new(trace);
    let mut st = State {
        graph,
        provider,
        criterion,
        config,
        c_min: graph.min_edge_cost().unwrap_or(Cost::ZERO),
        comps: Vec::with_capacity(2 * n),
        owner: (0..n).collect(),
        table: PairMeetTable::new(graph.node_count()),
        pending: PendingPaths::new(),
        confirmed: Vec::new(),
    };
    for t in 0..n {
        let node = instance.terminal_node(t);
        let c = Component::new(t, graph, provider, t, node, TerminalSet::full(n));
        counter.record(t, node, Cost::ZERO, provider.h_to_set(node, c.destinations()));
        st.comps.push(Some(c));
    }
    for t in 0..n {
        let comp = st.comps[t].as_ref().expect("live component");
        let mut support: Vec<(NodeId, Cost)> = comp.support().map(|(u, r)| (u, r.g)).collect();
        support.sort_unstable();
        st.note_relaxations(t, &support);
    }
    // the initial closed sets count as expansions, so pairs may already be
    // confirmable
    for a in 0..n {
        for b in a + 1..n {
            st.check_pair(a, b)?;
        }
    }

    let mut forest = SteinerForest::new(n);
    let mut iterations = 0u64;
    let mut improved = Vec::new();
    let mut first = true;
    while !forest.is_spanning() {
        let mut best = None;
        if !first {
            iterations += 1;
            best = st
                .live()
                .into_iter()
                .filter_map(|id| st.comp(id).nominate(provider))
                .min_by_key(Nomination::key);
            if let Some(nom) = best {
                let id = nom.component;
                improved.clear();
                st.comp(id).expand(graph, provider, &mut improved)?;
                counter.record(id, nom.node, nom.g, nom.f);
                st.note_relaxations(id, &improved);
                for other in st.live() {
                    if other != id {
                        st.check_pair(id, other)?;
                    }
                }
            } else {
                // every frontier is exhausted; components created by a merge
                // since their last expansion have not been tested yet
                let live = st.live();
                for (i, &a) in live.iter().enumerate() {
                    for &b in &live[i + 1..] {
                        st.check_pair(a, b)?;
                    }
                }
            }
        }

        let f_star = st.f_star();
        let mut pending = std::mem::take(&mut st.pending);
        let accepted = pending.process(
            &mut forest,
            f_star,
            |_, a, b| st.merge(a, b),
            |u, v| graph.edge_cost(u, v).unwrap_or(Cost::INFINITY),
        )?;
        st.pending = pending;
        if !first && best.is_none() && accepted == 0 && !forest.is_spanning() {
            return Err(Error::Unsolvable);
        }
        first = false;
    }

    Ok(SolveOutput {
        forest,
        stats: RunStats {
            expanded: counter.expanded,
            iterations,
            confirmed: st.confirmed.len() as u64,
            ..RunStats::default()
        },
        confirmed: st.confirmed,
    })
}
