//! Heuristic Steiner-tree search for multi-goal path finding (MGPF).
//!
//! Given a graph, an origin `s`, a destination `d` and a set of goals, the
//! crate builds a Steiner tree spanning `{s, d} ∪ goals` with one of the S*
//! search variants (or the naive metric-completion Kruskal baseline), then
//! doubles the tree and extracts an `s → d` walk that visits every goal. The
//! walk costs at most twice the optimum; the tree cost is reported as the
//! lower bound for an a-posteriori ratio.
//!
//! ```
//! use std::sync::Arc;
//! use mgpf_core::graph::parse_map;
//! use mgpf_core::heuristic::{HeuristicKind, HeuristicProvider, Weight};
//! use mgpf_core::instance::Instance;
//! use mgpf_core::pipeline::tree_to_walk;
//! use mgpf_core::steiner::{solve, Criterion, Solver, SolverConfig};
//!
//! let graph = Arc::new(parse_map("type octile\nheight 3\nwidth 5\nmap\n.....\n.@@@.\n.....\n").unwrap());
//! let instance = Instance::new(graph, 0, 4, vec![10]).unwrap();
//! let provider = HeuristicProvider::new(&instance, HeuristicKind::Octile, Weight::ONE, None).unwrap();
//! let config = SolverConfig::new(Solver::Merged(Criterion::Mm));
//! let run = solve(&instance, &provider, &config).unwrap();
//! let solution = tree_to_walk(&run.forest, &instance).unwrap();
//! assert_eq!(solution.walk.first(), Some(&0));
//! assert_eq!(solution.walk.last(), Some(&4));
//! ```

pub mod baseline;
pub mod error;
pub mod graph;
pub mod heuristic;
pub mod instance;
pub mod pipeline;
pub mod search;
pub mod steiner;
pub mod terminal_set;

pub use error::{Error, Result};
pub use graph::{Cost, Graph, NodeId};
pub use instance::{Instance, TerminalIdx};
