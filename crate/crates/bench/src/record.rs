use mgpf_core::pipeline::MgpfSolution;
use mgpf_core::steiner::{RunStats, Solver};
use mgpf_core::NodeId;
use serde::Serialize;

/// Key/value summary of one `solve`, written as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub map: String,
    pub solver: &'static str,
    pub criterion: Option<String>,
    pub heuristic: String,
    pub w: String,
    pub reprioritize: bool,
    pub bs_nominate_by_g: bool,
    pub seed: Option<u64>,
    pub terminals: Vec<NodeId>,
    pub expanded: u64,
    pub iterations: u64,
    pub confirmed: u64,
    pub time_ms: f64,
    pub tree_path_total: u64,
    pub tree_edge_cost: u64,
    pub path_cost: u64,
    pub ratio: String,
    pub landmarks_from_cache: Option<bool>,
    pub violations: Option<Vec<String>>,
}

pub struct RecordInput<'a> {
    pub map: &'a str,
    pub solver: Solver,
    pub heuristic: String,
    pub w: String,
    pub reprioritize: bool,
    pub bs_nominate_by_g: bool,
    pub seed: Option<u64>,
    pub terminals: &'a [NodeId],
    pub no_timing: bool,
}

impl RunRecord {
    pub fn new(input: RecordInput<'_>, stats: &RunStats, solution: &MgpfSolution) -> Self {
        RunRecord {
            map: input.map.to_string(),
            solver: input.solver.family(),
            criterion: input.solver.criterion().map(|c| c.to_string()),
            heuristic: input.heuristic,
            w: input.w,
            reprioritize: input.reprioritize,
            bs_nominate_by_g: input.bs_nominate_by_g,
            seed: input.seed,
            terminals: input.terminals.to_vec(),
            expanded: stats.expanded,
            iterations: stats.iterations,
            confirmed: stats.confirmed,
            time_ms: if input.no_timing {
                0.0
            } else {
                stats.elapsed.as_secs_f64() * 1e3
            },
            tree_path_total: solution.tree_path_total.value(),
            tree_edge_cost: solution.tree_edge_cost.value(),
            path_cost: solution.cost.value(),
            ratio: solution.ratio.to_string(),
            landmarks_from_cache: None,
            violations: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record fields always serialize")
    }
}
