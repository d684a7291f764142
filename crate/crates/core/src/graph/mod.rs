//! Immutable weighted graphs with exact fixed-point edge costs.
//!
//! Grid maps become 8-connected graphs: a cardinal step costs
//! [`Cost::CARDINAL`], a diagonal step [`Cost::DIAGONAL`], and a diagonal edge
//! exists only when both cells it cuts past are passable. Node ids are dense
//! and assigned in row-major order over passable cells.

mod dijkstra;
mod edge_list;
mod map;

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dijkstra::{shortest_path_oracle, ShortestPaths};
pub use edge_list::{parse_edge_list, to_edge_list};
pub use map::{parse_map, to_map_text};

pub type NodeId = usize;

/// Non-negative fixed-point path cost; one grid unit is 1000.
///
/// Addition saturates, so [`Cost::INFINITY`] absorbs anything added to it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cost(pub u64);

impl Cost {
    pub const ZERO: Cost = Cost(0);
    pub const INFINITY: Cost = Cost(u64::MAX);
    pub const CARDINAL: Cost = Cost(1000);
    pub const DIAGONAL: Cost = Cost(1414);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self != Cost::INFINITY
    }

    pub fn double(self) -> Cost {
        Cost(self.0.saturating_mul(2))
    }

    pub fn abs_diff(self, other: Cost) -> Cost {
        Cost(self.0.abs_diff(other.0))
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0.saturating_add(rhs.0))
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        *self = *self + rhs;
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

/// Cell geometry of a graph built from a grid map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridLayout {
    width: usize,
    height: usize,
    cells: Vec<Option<NodeId>>,
    coords: Vec<(usize, usize)>,
}

impl GridLayout {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `(row, col)` of a node.
    pub fn coords(&self, node: NodeId) -> (usize, usize) {
        self.coords[node]
    }

    pub fn node_at(&self, row: usize, col: usize) -> Option<NodeId> {
        if row >= self.height || col >= self.width {
            return None;
        }
        self.cells[row * self.width + col]
    }

    pub fn is_passable(&self, row: usize, col: usize) -> bool {
        self.node_at(row, col).is_some()
    }
}

/// Undirected graph in compressed adjacency form. Neighbor lists are sorted
/// by node id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<(NodeId, Cost)>,
    grid: Option<GridLayout>,
}

impl Graph {
    /// Builds a graph from undirected edges. Self loops and duplicate edges are
    /// rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Cost)>,
    {
        let mut lists: Vec<Vec<(NodeId, Cost)>> = vec![Vec::new(); node_count];
        for (u, v, cost) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self loop on node {u}")));
            }
            if !cost.is_finite() {
                return Err(Error::InvalidInstance(format!("edge ({u}, {v}) has infinite cost")));
            }
            if lists[u].iter().any(|&(w, _)| w == v) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({u}, {v})")));
            }
            lists[u].push((v, cost));
            lists[v].push((u, cost));
        }
        Ok(Self::from_lists(lists, None))
    }

    /// Builds the 8-connected graph of a `width × height` grid; `passable` is
    /// row-major.
    pub fn from_grid(width: usize, height: usize, passable: &[bool]) -> Graph {
        assert_eq!(passable.len(), width * height, "passable mask has wrong size");
        let mut cells = vec![None; width * height];
        let mut coords = Vec::new();
        for row in 0..height {
            for col in 0..width {
                if passable[row * width + col] {
                    cells[row * width + col] = Some(coords.len());
                    coords.push((row, col));
                }
            }
        }
        let open = |r: isize, c: isize| {
            r >= 0
                && c >= 0
                && (r as usize) < height
                && (c as usize) < width
                && passable[r as usize * width + c as usize]
        };
        let mut lists = vec![Vec::new(); coords.len()];
        for (node, &(row, col)) in coords.iter().enumerate() {
            let (r, c) = (row as isize, col as isize);
            for dr in -1..=1isize {
                for dc in -1..=1isize {
                    if (dr, dc) == (0, 0) || !open(r + dr, c + dc) {
                        continue;
                    }
                    let cost = if dr != 0 && dc != 0 {
                        // no corner cutting
                        if !open(r + dr, c) || !open(r, c + dc) {
                            continue;
                        }
                        Cost::DIAGONAL
                    } else {
                        Cost::CARDINAL
                    };
                    let other = cells[(r + dr) as usize * width + (c + dc) as usize].expect("passable cell has a node");
                    lists[node].push((other, cost));
                }
            }
        }
        let layout = GridLayout {
            width,
            height,
            cells,
            coords,
        };
        Self::from_lists(lists, Some(layout))
    }

    fn from_lists(mut lists: Vec<Vec<(NodeId, Cost)>>, grid: Option<GridLayout>) -> Graph {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut adjacency = Vec::new();
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable();
            adjacency.extend_from_slice(list);
            offsets.push(adjacency.len());
        }
        Graph {
            offsets,
            adjacency,
            grid,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, Cost)] {
        &self.adjacency[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn edge_cost(&self, u: NodeId, v: NodeId) -> Option<Cost> {
        let list = self.neighbors(u);
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    /// Each undirected edge once, as `(u, v, cost)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Cost)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, c)| (u, v, c))
        })
    }

    /// Smallest edge cost, or `None` for an edgeless graph.
    pub fn min_edge_cost(&self) -> Option<Cost> {
        self.adjacency.iter().map(|&(_, c)| c).min()
    }

    pub fn grid(&self) -> Option<&GridLayout> {
        self.grid.as_ref()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node < self.node_count()
    }

    /// Connected components as a label per node, labels dense from zero in
    /// order of their smallest node.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &(v, _) in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_addition_saturates() {
        assert_eq!(Cost::INFINITY + Cost(5), Cost::INFINITY);
        assert_eq!(Cost(2) + Cost(3), Cost(5));
        assert_eq!(Cost::INFINITY.double(), Cost::INFINITY);
        assert_eq!(Cost::INFINITY.to_string(), "inf");
    }

    #[test]
    fn diagonal_cost_is_below_root_two() {
        assert!((Cost::DIAGONAL.0 as f64) < 1000.0 * std::f64::consts::SQRT_2);
    }

    #[test]
    fn from_edges_rejects_duplicates_and_loops() {
        assert!(Graph::from_edges(2, [(0, 1, Cost(1)), (1, 0, Cost(2))]).is_err());
        assert!(Graph::from_edges(2, [(1, 1, Cost(1))]).is_err());
        assert!(Graph::from_edges(2, [(0, 2, Cost(1))]).is_err());
    }

    #[test]
    fn edge_lookup_is_symmetric() {
        let g = Graph::from_edges(3, [(0, 1, Cost(7)), (1, 2, Cost(9))]).unwrap();
        assert_eq!(g.edge_cost(0, 1), Some(Cost(7)));
        assert_eq!(g.edge_cost(1, 0), Some(Cost(7)));
        assert_eq!(g.edge_cost(0, 2), None);
        assert_eq!(g.edges().count(), 2);
    }

    #[test]
    fn component_labels_split_islands() {
        let g = Graph::from_edges(5, [(0, 1, Cost(1)), (3, 4, Cost(1))]).unwrap();
        assert_eq!(g.component_labels(), vec![0, 0, 1, 2, 2]);
    }
}
