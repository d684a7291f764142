//! Steiner trees over the terminals of an instance.
//!
//! Every solver here accepts terminal-to-terminal least-cost paths in the
//! order Kruskal's algorithm would take them on the metric completion, so
//! the accepted total equals the metric-completion MST cost.

mod criteria;
mod forest;
mod meet;
mod merged;
mod unmerged;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::baseline;
use crate::error::{Error, Result};
use crate::graph::Cost;
use crate::heuristic::HeuristicProvider;
use crate::instance::Instance;
use crate::search::ExpansionEvent;

pub use criteria::{confirm_bs, confirm_hs, confirm_mm, Criterion, FrontierBounds};
pub use forest::{ConfirmedPath, PendingPaths, SteinerForest};
pub use meet::{MeetRow, PairMeetTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Solver {
    /// Metric completion by one search per terminal, then Kruskal.
    Kruskal,
    /// One wavefront per terminal.
    Unmerged,
    /// Wavefronts merge as their terminals are connected.
    Merged(Criterion),
}

impl Solver {
    pub const ALL: [Solver; 5] = [
        Solver::Kruskal,
        Solver::Unmerged,
        Solver::Merged(Criterion::Hs),
        Solver::Merged(Criterion::Bs),
        Solver::Merged(Criterion::Mm),
    ];

    /// The four S* variants.
    pub const SEARCH: [Solver; 4] = [
        Solver::Unmerged,
        Solver::Merged(Criterion::Hs),
        Solver::Merged(Criterion::Bs),
        Solver::Merged(Criterion::Mm),
    ];

    /// `kruskal`, `unmerged` or `merged`.
    pub fn family(self) -> &'static str {
        match self {
            Solver::Kruskal => "kruskal",
            Solver::Unmerged => "unmerged",
            Solver::Merged(_) => "merged",
        }
    }

    pub fn criterion(self) -> Option<Criterion> {
        match self {
            Solver::Merged(c) => Some(c),
            _ => None,
        }
    }
}

/// `kruskal`, `unmerged`, `hs`, `bs` or `mm`.
impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Merged(c) => write!(f, "{c}"),
            other => f.write_str(other.family()),
        }
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kruskal" | "naive" => Ok(Solver::Kruskal),
            "unmerged" => Ok(Solver::Unmerged),
            other => other
                .strip_prefix("merged-")
                .unwrap_or(other)
                .parse()
                .map(Solver::Merged)
                .map_err(|_| Error::InvalidInstance(format!("unknown solver {s:?}"))),
        }
    }
}

impl Serialize for Solver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub solver: Solver,
    /// Shrink destination sets as soon as a path is confirmed.
    pub reprioritize: bool,
    /// Merged BS only: nominate by `g` alone instead of `f`.
    pub bs_nominate_by_g: bool,
    /// Recompute every open `f` whenever a destination set changes instead
    /// of refreshing lazily. Only useful for checking equivalence.
    pub eager_refresh: bool,
}

impl SolverConfig {
    pub fn new(solver: Solver) -> Self {
        SolverConfig {
            solver,
            reprioritize: false,
            bs_nominate_by_g: false,
            eager_refresh: false,
        }
    }

    pub fn reprioritize(mut self, on: bool) -> Self {
        self.reprioritize = on;
        self
    }

    pub fn bs_nominate_by_g(mut self, on: bool) -> Self {
        self.bs_nominate_by_g = on;
        self
    }

    pub fn eager_refresh(mut self, on: bool) -> Self {
        self.eager_refresh = on;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    /// Moves of a node into any closed set, including each terminal's
    /// initial closed set and re-expansions after a merge demotion.
    pub expanded: u64,
    /// Main-loop iterations.
    pub iterations: u64,
    /// Paths that entered the pending queue.
    pub confirmed: u64,
    pub path_total: Cost,
    pub edge_cost: Cost,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveOutput {
    pub forest: SteinerForest,
    pub stats: RunStats,
    /// Every path that was confirmed, accepted or not, in confirmation order.
    pub confirmed: Vec<ConfirmedPath>,
}

/// Builds a Steiner tree over the instance's terminals.
pub fn solve(instance: &Instance, provider: &HeuristicProvider, config: &SolverConfig) -> Result<SolveOutput> {
    solve_traced(instance, provider, config, &mut |_| {})
}

/// [`solve`] with a callback receiving every expansion.
pub fn solve_traced(
    instance: &Instance,
    provider: &HeuristicProvider,
    config: &SolverConfig,
    trace: &mut dyn FnMut(&ExpansionEvent),
) -> Result<SolveOutput> {
    let start = Instant::now();
    let mut out = match config.solver {
        Solver::Kruskal => baseline::solve_kruskal(instance)?,
        Solver::Unmerged => unmerged::solve(instance, provider, config, trace)?,
        Solver::Merged(criterion) => {
            if criterion == Criterion::Bs && config.bs_nominate_by_g {
                let by_g = provider.with_weight(crate::heuristic::Weight::ZERO);
                merged::solve(instance, &by_g, criterion, config, trace)?
            } else {
                merged::solve(instance, provider, criterion, config, trace)?
            }
        }
    };
    out.stats.path_total = out.forest.path_total();
    out.stats.edge_cost = out.forest.edge_cost();
    out.stats.elapsed = start.elapsed();
    if out.forest.accepted().len() + 1 != instance.terminal_count() {
        return Err(Error::Internal(format!(
            "{} paths accepted for {} terminals",
            out.forest.accepted().len(),
            instance.terminal_count()
        )));
    }
    Ok(out)
}

/// Counts expansions and forwards them to the trace sink.
pub(crate) struct Counter<'a> {
    pub expanded: u64,
    sink: &'a mut dyn FnMut(&ExpansionEvent),
}

impl<'a> Counter<'a> {
    pub fn new(sink: &'a mut dyn FnMut(&ExpansionEvent)) -> Self {
        Counter { expanded: 0, sink }
    }

    pub fn record(&mut self, component: usize, node: crate::graph::NodeId, g: Cost, f: Cost) {
        let event = ExpansionEvent {
            step: self.expanded,
            component,
            node,
            g,
            f,
        };
        self.expanded += 1;
        (self.sink)(&event);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_names_round_trip() {
        for s in Solver::ALL {
            assert_eq!(s.to_string().parse::<Solver>().unwrap(), s);
        }
        assert_eq!("merged-mm".parse::<Solver>().unwrap(), Solver::Merged(Criterion::Mm));
        assert!("dijkstra".parse::<Solver>().is_err());
    }
}
