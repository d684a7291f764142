use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Position of a terminal in [`Instance::terminals`]: `0` is the origin, `1`
/// the destination, the rest are goals in the order given.
pub type TerminalIdx = usize;

/// An MGPF problem: a graph plus origin, destination and goals.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: Arc<Graph>,
    terminals: Vec<NodeId>,
    index: FxHashMap<NodeId, TerminalIdx>,
}

impl Instance {
    /// Validates that all terminals are distinct graph nodes in one connected
    /// component.
    pub fn new(graph: Arc<Graph>, origin: NodeId, destination: NodeId, goals: Vec<NodeId>) -> Result<Self> {
        let instance = Self::new_allow_disconnected(graph, origin, destination, goals)?;
        let labels = instance.graph.component_labels();
        let root = labels[instance.origin()];
        if let Some(&t) = instance.terminals.iter().find(|&&t| labels[t] != root) {
            return Err(Error::InvalidInstance(format!(
                "terminal {t} is not connected to the origin {}",
                instance.origin()
            )));
        }
        Ok(instance)
    }

    /// Like [`Instance::new`] but skips the connectivity check; solvers report
    /// [`Error::Unsolvable`] for such instances.
    pub fn new_allow_disconnected(
        graph: Arc<Graph>,
        origin: NodeId,
        destination: NodeId,
        goals: Vec<NodeId>,
    ) -> Result<Self> {
        let mut terminals = Vec::with_capacity(goals.len() + 2);
        terminals.push(origin);
        terminals.push(destination);
        terminals.extend(goals);
        let mut index = FxHashMap::default();
        for (i, &t) in terminals.iter().enumerate() {
            if !graph.contains(t) {
                return Err(Error::InvalidInstance(format!("terminal {t} is not a graph node")));
            }
            if index.insert(t, i).is_some() {
                return Err(Error::InvalidInstance(format!("terminal {t} appears twice")));
            }
        }
        Ok(Instance {
            graph,
            terminals,
            index,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn origin(&self) -> NodeId {
        self.terminals[0]
    }

    pub fn destination(&self) -> NodeId {
        self.terminals[1]
    }

    pub fn goals(&self) -> &[NodeId] {
        &self.terminals[2..]
    }

    /// `[s, d, goals..]`.
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn terminal_node(&self, t: TerminalIdx) -> NodeId {
        self.terminals[t]
    }

    pub fn terminal_index(&self, node: NodeId) -> Option<TerminalIdx> {
        self.index.get(&node).copied()
    }
}
