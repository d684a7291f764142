//! Consistent lower bounds `h̄_t(u)` on the cost from a node to a terminal,
//! the set form `h(u, S) = min_{t ∈ S} h̄_t(u)`, and weight scaling.
//!
//! All providers here are consistent on the graphs they accept, and so is
//! `floor(w · h)` for `w ∈ [0, 1]`: if `h(u) ≤ c + h(v)` with integer `c`,
//! then `⌊w h(u)⌋ ≤ ⌊w c + w h(v)⌋ ≤ c + ⌊w h(v)⌋`.

mod landmarks;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{shortest_path_oracle, Cost, Graph, NodeId};
use crate::instance::{Instance, TerminalIdx};
use crate::terminal_set::TerminalSet;

pub use landmarks::{graph_fingerprint, select_landmarks, LandmarkTable};

/// Heuristic weight `w = p/q ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Ratio<u64>);

impl Weight {
    pub const ZERO: Weight = Weight(Ratio::new_raw(0, 1));
    pub const ONE: Weight = Weight(Ratio::new_raw(1, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer > denom {
            return Err(Error::UnsupportedHeuristic(format!(
                "weight {numer}/{denom} is outside [0, 1]"
            )));
        }
        Ok(Weight(Ratio::new(numer, denom)))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn is_zero(self) -> bool {
        *self.0.numer() == 0
    }

    /// `floor(w · cost)`, exact in 128-bit arithmetic.
    pub fn apply(self, cost: Cost) -> Cost {
        if !cost.is_finite() {
            return if self.is_zero() { Cost::ZERO } else { cost };
        }
        let scaled = cost.value() as u128 * *self.0.numer() as u128 / *self.0.denom() as u128;
        Cost(scaled as u64)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `p/q`, an integer, or a decimal such as `0.25`.
impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedHeuristic(format!("cannot parse weight {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q = q.trim().parse().map_err(|_| bad())?;
            return Weight::new(p, q);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let denom = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            return Weight::new(int * denom + frac, denom);
        }
        Weight::new(s.parse().map_err(|_| bad())?, 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeuristicKind {
    Zero,
    Octile,
    /// Exact least costs from every terminal (one full search per terminal).
    Exact,
    /// Landmark lower bounds, combined by max with octile on grids.
    Alt,
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicKind::Zero => "zero",
            HeuristicKind::Octile => "octile",
            HeuristicKind::Exact => "exact",
            HeuristicKind::Alt => "alt",
        })
    }
}

impl FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(HeuristicKind::Zero),
            "octile" => Ok(HeuristicKind::Octile),
            "exact" => Ok(HeuristicKind::Exact),
            "alt" => Ok(HeuristicKind::Alt),
            _ => Err(Error::UnsupportedHeuristic(format!("unknown heuristic {s:?}"))),
        }
    }
}

/// `1000·max(dx, dy) + 414·min(dx, dy)` between two grid cells.
pub fn octile_estimate(graph: &Graph, a: NodeId, b: NodeId) -> Result<Cost> {
    let grid = graph
        .grid()
        .ok_or_else(|| Error::UnsupportedHeuristic("octile distance needs a grid graph".into()))?;
    Ok(octile_cells(grid.coords(a), grid.coords(b)))
}

fn octile_cells(a: (usize, usize), b: (usize, usize)) -> Cost {
    let dr = a.0.abs_diff(b.0) as u64;
    let dc = a.1.abs_diff(b.1) as u64;
    let straight = Cost::CARDINAL.value();
    let extra = Cost::DIAGONAL.value() - straight;
    Cost(straight * dr.max(dc) + extra * dr.min(dc))
}

/// Landmark bound `max_L |d(L, a) − d(L, b)|`, maxed with octile on grids.
/// An empty table degrades to octile (or zero off-grid).
pub fn alt_estimate(graph: &Graph, table: &LandmarkTable, a: NodeId, b: NodeId) -> Cost {
    let octile = graph
        .grid()
        .map(|g| octile_cells(g.coords(a), g.coords(b)))
        .unwrap_or(Cost::ZERO);
    table.lower_bound(a, b).max(octile)
}

#[derive(Clone, Debug)]
enum Tables {
    None,
    /// `rows[t][u]` = least cost between terminal `t` and node `u`.
    Exact(Vec<Vec<Cost>>),
    Alt(Arc<LandmarkTable>),
}

/// Weighted lower-bound oracle for one instance's terminals.
#[derive(Clone, Debug)]
pub struct HeuristicProvider {
    kind: HeuristicKind,
    weight: Weight,
    graph: Arc<Graph>,
    terminals: Vec<NodeId>,
    tables: Tables,
}

impl HeuristicProvider {
    /// Builds a provider. `Alt` requires `landmarks` built on the same graph;
    /// `Octile` requires a grid graph.
    pub fn new(
        instance: &Instance,
        kind: HeuristicKind,
        weight: Weight,
        landmarks: Option<Arc<LandmarkTable>>,
    ) -> Result<Self> {
        let graph = instance.graph_arc().clone();
        let tables = match kind {
            HeuristicKind::Zero => Tables::None,
            HeuristicKind::Octile => {
                if graph.grid().is_none() {
                    return Err(Error::UnsupportedHeuristic("octile distance needs a grid graph".into()));
                }
                Tables::None
            }
            HeuristicKind::Exact => {
                use rayon::prelude::*;
                let rows = instance
                    .terminals()
                    .par_iter()
                    .map(|&t| shortest_path_oracle(&graph, t).dist)
                    .collect();
                Tables::Exact(rows)
            }
            HeuristicKind::Alt => {
                let table = landmarks
                    .ok_or_else(|| Error::UnsupportedHeuristic("alt heuristic needs a landmark table".into()))?;
                if table.node_count() != graph.node_count() {
                    return Err(Error::UnsupportedHeuristic(
                        "landmark table was built for a different graph".into(),
                    ));
                }
                Tables::Alt(table)
            }
        };
        Ok(HeuristicProvider {
            kind,
            weight,
            graph,
            terminals: instance.terminals().to_vec(),
            tables,
        })
    }

    pub fn zero(instance: &Instance) -> Self {
        Self::new(instance, HeuristicKind::Zero, Weight::ZERO, None).expect("zero heuristic is always available")
    }

    /// Same tables, different weight.
    pub fn with_weight(&self, weight: Weight) -> Self {
        HeuristicProvider { weight, ..self.clone() }
    }

    pub fn kind(&self) -> HeuristicKind {
        self.kind
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    /// Unweighted `h̄_t(u)`.
    pub fn raw_estimate(&self, u: NodeId, t: TerminalIdx) -> Cost {
        let target = self.terminals[t];
        match &self.tables {
            Tables::None => match (self.kind, self.graph.grid()) {
                (HeuristicKind::Octile, Some(grid)) => octile_cells(grid.coords(u), grid.coords(target)),
                _ => Cost::ZERO,
            },
            Tables::Exact(rows) => rows[t][u],
            Tables::Alt(table) => alt_estimate(&self.graph, table, u, target),
        }
    }

    /// `floor(w · h̄_t(u))`.
    pub fn estimate(&self, u: NodeId, t: TerminalIdx) -> Cost {
        if self.weight.is_zero() {
            return Cost::ZERO;
        }
        self.weight.apply(self.raw_estimate(u, t))
    }

    /// Weighted `min_{t ∈ set} h̄_t(u)`; zero for the empty set.
    pub fn h_to_set(&self, u: NodeId, set: &TerminalSet) -> Cost {
        if self.weight.is_zero() || self.kind == HeuristicKind::Zero {
            return Cost::ZERO;
        }
        let mut best = Cost::INFINITY;
        for t in set.iter() {
            best = best.min(self.raw_estimate(u, t));
            if best == Cost::ZERO {
                break;
            }
        }
        if best == Cost::INFINITY {
            // empty set, or every member unreachable from u
            return if set.is_empty() { Cost::ZERO } else { best };
        }
        self.weight.apply(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_map;

    fn open(n: usize) -> Arc<Graph> {
        let row = ".".repeat(n);
        let text = format!(
            "type octile\nheight {n}\nwidth {n}\nmap\n{}",
            format!("{row}\n").repeat(n)
        );
        Arc::new(parse_map(&text).unwrap())
    }

    #[test]
    fn weight_parsing_and_floor() {
        assert_eq!("1/4".parse::<Weight>().unwrap(), Weight::new(1, 4).unwrap());
        assert_eq!("0.25".parse::<Weight>().unwrap(), Weight::new(1, 4).unwrap());
        assert_eq!("1".parse::<Weight>().unwrap(), Weight::ONE);
        assert_eq!(".5".parse::<Weight>().unwrap(), Weight::new(1, 2).unwrap());
        assert!("3/2".parse::<Weight>().is_err());
        assert!("1/0".parse::<Weight>().is_err());
        assert!("x".parse::<Weight>().is_err());
        let third = Weight::new(1, 3).unwrap();
        assert_eq!(third.apply(Cost(1000)), Cost(333));
        assert_eq!(Weight::ZERO.apply(Cost::INFINITY), Cost::ZERO);
        assert_eq!(Weight::new(3, 4).unwrap().to_string(), "3/4");
    }

    #[test]
    fn octile_examples() {
        let g = open(5);
        let grid = g.grid().unwrap();
        let at = |r, c| grid.node_at(r, c).unwrap();
        assert_eq!(octile_estimate(&g, at(1, 1), at(1, 1)).unwrap(), Cost(0));
        assert_eq!(octile_estimate(&g, at(0, 0), at(0, 3)).unwrap(), Cost(3000));
        assert_eq!(octile_estimate(&g, at(0, 0), at(1, 2)).unwrap(), Cost(2414));
        // on an obstacle-free map the octile value is bounded by the true cost
        let sp = shortest_path_oracle(&g, at(0, 0));
        assert!(Cost(2414) <= sp.dist[at(1, 2)]);
        let line = Graph::from_edges(2, [(0, 1, Cost(1))]).unwrap();
        assert!(matches!(
            octile_estimate(&line, 0, 1),
            Err(Error::UnsupportedHeuristic(_))
        ));
    }

    #[test]
    fn h_to_set_examples() {
        let g = open(5);
        let inst = Instance::new(g.clone(), 0, 24, vec![12]).unwrap();
        let exact = HeuristicProvider::new(&inst, HeuristicKind::Exact, Weight::ONE, None).unwrap();
        let n = inst.terminal_count();
        // S = {u}
        assert_eq!(exact.h_to_set(0, &TerminalSet::from_indices(n, [0])), Cost(0));
        // two terminals: min of the oracle costs
        let u = 4;
        let sp = shortest_path_oracle(&g, u);
        let both = exact.h_to_set(u, &TerminalSet::from_indices(n, [1, 2]));
        assert_eq!(both, sp.dist[24].min(sp.dist[12]));
        // empty set
        assert_eq!(exact.h_to_set(u, &TerminalSet::empty(n)), Cost(0));
        // w = 0
        let w0 = exact.with_weight(Weight::ZERO);
        assert_eq!(w0.h_to_set(u, &TerminalSet::full(n)), Cost(0));
    }

    #[test]
    fn octile_provider_rejects_non_grid() {
        let g = Arc::new(Graph::from_edges(2, [(0, 1, Cost(1))]).unwrap());
        let inst = Instance::new(g, 0, 1, vec![]).unwrap();
        assert!(HeuristicProvider::new(&inst, HeuristicKind::Octile, Weight::ONE, None).is_err());
        assert!(HeuristicProvider::new(&inst, HeuristicKind::Alt, Weight::ONE, None).is_err());
    }
}
