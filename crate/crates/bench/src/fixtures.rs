//! Hand-built instances shipped with the crate.

use std::sync::Arc;

use mgpf_core::graph::{parse_edge_list, parse_map};
use mgpf_core::heuristic::{HeuristicKind, HeuristicProvider, Weight};
use mgpf_core::{Error, Graph, Instance, Result};

const APPENDIX_MAP: &str = include_str!("../fixtures/appendix.map");
const LINE_5: &str = include_str!("../fixtures/line-5.edges");
const STAR: &str = include_str!("../fixtures/star.edges");

pub const NAMES: [&str; 4] = ["appendix-weak-h", "appendix-strong-h", "line-5", "star"];

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub instance: Instance,
    pub heuristic: HeuristicKind,
    pub weight: Weight,
}

impl Fixture {
    pub fn provider(&self) -> HeuristicProvider {
        HeuristicProvider::new(&self.instance, self.heuristic, self.weight, None)
            .expect("fixture heuristics need no landmarks")
    }
}

/// Two terminals on either side of a walled room. With a weak heuristic
/// (octile at half weight) HS expands more than BS; with the exact
/// heuristic unmerged expands fewer than BS.
fn appendix(name: &'static str, heuristic: HeuristicKind, weight: Weight) -> Result<Fixture> {
    let graph = Arc::new(parse_map(APPENDIX_MAP)?);
    let grid = graph.grid().expect("map fixture");
    let s = grid.node_at(3, 0).expect("passable origin");
    let d = grid.node_at(3, 9).expect("passable destination");
    Ok(Fixture {
        name,
        instance: Instance::new(graph, s, d, vec![])?,
        heuristic,
        weight,
    })
}

fn edges(name: &'static str, text: &str, s: usize, d: usize, goals: Vec<usize>) -> Result<Fixture> {
    let graph: Arc<Graph> = Arc::new(parse_edge_list(text)?);
    Ok(Fixture {
        name,
        instance: Instance::new(graph, s, d, goals)?,
        heuristic: HeuristicKind::Zero,
        weight: Weight::ZERO,
    })
}

pub fn load_fixture(name: &str) -> Result<Fixture> {
    match name {
        "appendix-weak-h" => appendix("appendix-weak-h", HeuristicKind::Octile, Weight::new(1, 2)?),
        "appendix-strong-h" => appendix("appendix-strong-h", HeuristicKind::Exact, Weight::ONE),
        "line-5" => edges("line-5", LINE_5, 0, 4, vec![2]),
        "star" => edges("star", STAR, 1, 2, vec![3]),
        _ => Err(Error::InvalidInstance(format!(
            "unknown fixture {name:?}; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use mgpf_core::graph::shortest_path_oracle;
    use mgpf_core::steiner::{solve, Criterion, Solver, SolverConfig};
    use mgpf_core::Cost;

    use super::*;

    fn expanded(f: &Fixture, solver: Solver) -> u64 {
        solve(&f.instance, &f.provider(), &SolverConfig::new(solver))
            .unwrap()
            .stats
            .expanded
    }

    #[test]
    fn all_fixtures_load() {
        for name in NAMES {
            assert_eq!(load_fixture(name).unwrap().name, name);
        }
        assert!(load_fixture("nope").is_err());
    }

    #[test]
    fn appendix_optimum_is_just_under_fourteen_units() {
        let f = load_fixture("appendix-weak-h").unwrap();
        let i = &f.instance;
        // eleven cardinal moves and two diagonals around the room
        let want = Cost(11 * 1000 + 2 * 1414);
        assert_eq!(shortest_path_oracle(i.graph(), i.origin()).dist[i.destination()], want);
    }

    // counts recorded from this implementation; they anchor regressions
    #[test]
    fn appendix_golden_counts() {
        let weak = load_fixture("appendix-weak-h").unwrap();
        let strong = load_fixture("appendix-strong-h").unwrap();
        assert_eq!(expanded(&weak, Solver::Merged(Criterion::Hs)), 129);
        assert_eq!(expanded(&weak, Solver::Merged(Criterion::Bs)), 93);
        assert_eq!(expanded(&strong, Solver::Unmerged), 35);
        assert_eq!(expanded(&strong, Solver::Merged(Criterion::Bs)), 141);
    }

    #[test]
    fn edge_fixtures_totals() {
        for name in ["line-5", "star"] {
            let f = load_fixture(name).unwrap();
            for solver in Solver::ALL {
                let out = solve(&f.instance, &f.provider(), &SolverConfig::new(solver)).unwrap();
                assert_eq!(out.forest.path_total(), Cost(4000), "{name} {solver}");
            }
        }
    }
}
