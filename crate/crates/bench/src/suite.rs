//! Benchmark suite: the cross product of maps, terminal counts, weights,
//! solvers and reprioritization over seeded instances.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;
use std::time::Duration;

use mgpf_core::heuristic::{HeuristicKind, HeuristicProvider, LandmarkTable, Weight};
use mgpf_core::pipeline::{tree_to_walk, validate_solution};
use mgpf_core::steiner::{solve, Solver, SolverConfig};
use mgpf_core::{Error, Instance, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::instances::{generate_instance, instance_seed};
use crate::maps::{build_provider, load_map, HeuristicChoice, LandmarkConfig, MapSource, DEFAULT_LANDMARKS};

pub const CSV_HEADER: [&str; 14] = [
    "map",
    "solver",
    "criterion",
    "N",
    "w",
    "reprioritize",
    "seed",
    "expanded",
    "time_ms",
    "tree_path_total",
    "tree_edge_cost",
    "path_cost",
    "ratio",
    "error",
];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Map files or synthetic map names.
    pub maps: Vec<String>,
    pub ns: Vec<usize>,
    pub weights: Vec<Weight>,
    pub solvers: Vec<Solver>,
    pub reprioritize: Vec<bool>,
    pub instances: usize,
    pub seed: u64,
    pub heuristic: HeuristicChoice,
    pub landmarks: LandmarkConfig,
    pub bs_nominate_by_g: bool,
    /// Zero every `time_ms` so output is reproducible byte for byte.
    pub no_timing: bool,
    /// Validate every walk and record violations in the error column.
    pub verify: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            maps: Vec::new(),
            ns: vec![10, 20, 30, 40, 50],
            weights: [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
                .iter()
                .map(|&(p, q)| Weight::new(p, q).expect("valid weight"))
                .collect(),
            solvers: Solver::ALL.to_vec(),
            reprioritize: vec![false, true],
            instances: 10,
            seed: 1,
            heuristic: HeuristicChoice::Auto,
            landmarks: LandmarkConfig::new(DEFAULT_LANDMARKS, 1),
            bs_nominate_by_g: false,
            no_timing: false,
            verify: false,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidInstance(m.to_string()));
        if self.maps.is_empty() {
            return fail("no maps given");
        }
        if self.ns.is_empty() || self.ns.iter().any(|&n| n < 2) {
            return fail("terminal counts must be at least 2");
        }
        if self.weights.is_empty() || self.solvers.is_empty() || self.reprioritize.is_empty() {
            return fail("weights, solvers and reprioritization flags must be non-empty");
        }
        if self.instances == 0 {
            return fail("instances per cell must be positive");
        }
        if self.landmarks.count == 0 {
            return fail("landmark count must be positive");
        }
        Ok(())
    }
}

/// One CSV line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub map: String,
    pub solver: &'static str,
    pub criterion: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub w: String,
    pub reprioritize: bool,
    pub seed: u64,
    pub expanded: Option<u64>,
    pub time_ms: String,
    pub tree_path_total: Option<u64>,
    pub tree_edge_cost: Option<u64>,
    pub path_cost: Option<u64>,
    pub ratio: String,
    pub error: String,
    #[serde(skip)]
    pub key: RowKey,
    #[serde(skip)]
    pub ratio_value: Option<f64>,
    #[serde(skip)]
    pub time: Duration,
}

/// Position of a row in the config's cross product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowKey {
    pub map: usize,
    pub n: usize,
    pub weight: usize,
    pub solver: usize,
    pub reprioritize: bool,
    pub instance: usize,
}

impl Row {
    pub fn solver_label(&self) -> String {
        match (self.criterion.is_empty(), self.reprioritize) {
            (true, false) => self.solver.to_string(),
            (true, true) => format!("{}+r", self.solver),
            (false, false) => self.criterion.clone(),
            (false, true) => format!("{}+r", self.criterion),
        }
    }
}

struct Measured {
    expanded: u64,
    elapsed: Duration,
    path_total: u64,
    edge_cost: u64,
    path_cost: u64,
    ratio: String,
    ratio_value: f64,
    violations: Vec<String>,
}

fn measure(instance: &Instance, provider: &HeuristicProvider, config: &SolverConfig, verify: bool) -> Result<Measured> {
    let out = solve(instance, provider, config)?;
    let sol = tree_to_walk(&out.forest, instance)?;
    let violations = if verify {
        validate_solution(&sol, instance).1
    } else {
        Vec::new()
    };
    Ok(Measured {
        expanded: out.stats.expanded,
        elapsed: out.stats.elapsed,
        path_total: sol.tree_path_total.value(),
        edge_cost: sol.tree_edge_cost.value(),
        path_cost: sol.cost.value(),
        ratio: sol.ratio.to_string(),
        ratio_value: *sol.ratio.numer() as f64 / *sol.ratio.denom() as f64,
        violations,
    })
}

struct Task<'a> {
    map: &'a MapSource,
    map_idx: usize,
    kind: HeuristicKind,
    landmarks: Option<Arc<LandmarkTable>>,
    n: usize,
    index: usize,
    seed: u64,
}

fn run_task(task: &Task, config: &BenchConfig) -> Vec<Row> {
    let instance = generate_instance(&task.map.graph, task.n, task.seed).map_err(|e| e.to_string());
    let base = instance.as_ref().map_err(Clone::clone).and_then(|inst| {
        let table = task.landmarks.clone();
        build_provider(inst, task.kind, Weight::ONE, &mut || {
            table
                .clone()
                .ok_or_else(|| Error::UnsupportedHeuristic("landmarks were not loaded".into()))
        })
        .map_err(|e| e.to_string())
    });
    let mut kruskal: Option<std::result::Result<Arc<Measured>, String>> = None;
    let mut rows = Vec::new();
    for (wi, &w) in config.weights.iter().enumerate() {
        for (si, &solver) in config.solvers.iter().enumerate() {
            for &reprioritize in &config.reprioritize {
                let sc = SolverConfig::new(solver)
                    .reprioritize(reprioritize)
                    .bs_nominate_by_g(config.bs_nominate_by_g);
                let result: std::result::Result<Arc<Measured>, String> = match (&instance, &base) {
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                    // the baseline ignores w and reprioritization; run it once
                    (Ok(inst), Ok(p)) if solver == Solver::Kruskal => kruskal
                        .get_or_insert_with(|| {
                            measure(inst, p, &sc, config.verify)
                                .map(Arc::new)
                                .map_err(|e| e.to_string())
                        })
                        .clone(),
                    (Ok(inst), Ok(p)) => measure(inst, &p.with_weight(w), &sc, config.verify)
                        .map(Arc::new)
                        .map_err(|e| e.to_string()),
                };
                let key = RowKey {
                    map: task.map_idx,
                    n: task.n,
                    weight: wi,
                    solver: si,
                    reprioritize,
                    instance: task.index,
                };
                let mut row = Row {
                    map: task.map.name.clone(),
                    solver: solver.family(),
                    criterion: solver.criterion().map(|c| c.to_string()).unwrap_or_default(),
                    n: task.n,
                    w: w.to_string(),
                    reprioritize,
                    seed: task.seed,
                    expanded: None,
                    time_ms: String::new(),
                    tree_path_total: None,
                    tree_edge_cost: None,
                    path_cost: None,
                    ratio: String::new(),
                    error: String::new(),
                    key,
                    ratio_value: None,
                    time: Duration::ZERO,
                };
                match result {
                    Ok(m) => {
                        let time = if config.no_timing { Duration::ZERO } else { m.elapsed };
                        row.expanded = Some(m.expanded);
                        row.time_ms = format!("{:.3}", time.as_secs_f64() * 1e3);
                        row.tree_path_total = Some(m.path_total);
                        row.tree_edge_cost = Some(m.edge_cost);
                        row.path_cost = Some(m.path_cost);
                        row.ratio = m.ratio.clone();
                        row.ratio_value = Some(m.ratio_value);
                        row.error = m.violations.join("; ");
                        row.time = time;
                    }
                    Err(e) => row.error = e,
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// Landmark tables for every map whose heuristic resolves to ALT, loaded
/// up front so parallel runs never race on the cache.
fn load_tables(maps: &[MapSource], config: &BenchConfig) -> Result<Vec<Option<Arc<LandmarkTable>>>> {
    maps.iter()
        .map(|m| match config.heuristic.resolve(&m.graph) {
            HeuristicKind::Alt => config.landmarks.load(&m.graph).map(|(t, _)| Some(t)),
            _ => Ok(None),
        })
        .collect()
}

/// Runs every configuration in parallel and returns rows in cross-product
/// order.
pub fn run_suite(config: &BenchConfig) -> Result<Vec<Row>> {
    config.validate()?;
    let maps: Vec<MapSource> = config.maps.iter().map(|m| load_map(m)).collect::<Result<_>>()?;
    let tables = load_tables(&maps, config)?;
    let mut tasks = Vec::new();
    for (map_idx, map) in maps.iter().enumerate() {
        for &n in &config.ns {
            for index in 0..config.instances {
                tasks.push(Task {
                    map,
                    map_idx,
                    kind: config.heuristic.resolve(&map.graph),
                    landmarks: tables[map_idx].clone(),
                    n,
                    index,
                    seed: instance_seed(config.seed, map_idx, n, index),
                });
            }
        }
    }
    let mut rows: Vec<Row> = tasks.par_iter().flat_map_iter(|t| run_task(t, config)).collect();
    rows.sort_by_key(|r| r.key);
    Ok(rows)
}

pub fn write_csv(rows: &[Row], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Means over the instances of one configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub map: String,
    pub solver: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub w: String,
    pub reprioritize: bool,
    pub runs: usize,
    pub failures: usize,
    pub mean_expanded: f64,
    pub mean_time_ms: f64,
    pub mean_ratio: f64,
    #[serde(skip)]
    key: (usize, usize, usize, usize, bool),
}

pub fn cells(rows: &[Row]) -> Vec<Cell> {
    let mut groups: BTreeMap<(usize, usize, usize, usize, bool), Vec<&Row>> = BTreeMap::new();
    for r in rows {
        let k = r.key;
        groups
            .entry((k.map, k.n, k.weight, k.solver, k.reprioritize))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|(key, rs)| {
            let ok: Vec<&&Row> = rs
                .iter()
                .filter(|r| r.expanded.is_some() && r.error.is_empty())
                .collect();
            let mean = |f: &dyn Fn(&Row) -> f64| {
                if ok.is_empty() {
                    f64::NAN
                } else {
                    ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
                }
            };
            Cell {
                map: rs[0].map.clone(),
                solver: rs[0].solver_label(),
                n: rs[0].n,
                w: rs[0].w.clone(),
                reprioritize: rs[0].reprioritize,
                runs: rs.len(),
                failures: rs.len() - ok.len(),
                mean_expanded: mean(&|r| r.expanded.unwrap_or(0) as f64),
                mean_time_ms: mean(&|r| r.time.as_secs_f64() * 1e3),
                mean_ratio: mean(&|r| r.ratio_value.unwrap_or(f64::NAN)),
                key,
            }
        })
        .collect()
}

/// Text table per map and `N`: one line per solver, one column per `w`,
/// each cell `mean expanded (mean seconds)`.
pub fn summary_table(rows: &[Row]) -> String {
    let cells = cells(rows);
    let mut blocks: BTreeMap<(usize, usize), Vec<&Cell>> = BTreeMap::new();
    for c in &cells {
        blocks.entry((c.key.0, c.key.1)).or_default().push(c);
    }
    let mut out = String::new();
    for ((_, _), block) in blocks {
        let mut weights: Vec<(usize, &str)> = block.iter().map(|c| (c.key.2, c.w.as_str())).collect();
        weights.sort();
        weights.dedup();
        let _ = writeln!(out, "map {}  N={}", block[0].map, block[0].n);
        let _ = write!(out, "{:<12}", "solver");
        for (_, w) in &weights {
            let _ = write!(out, "{:>22}", format!("w={w}"));
        }
        out.push('\n');
        let mut lines: BTreeMap<(usize, bool), Vec<&Cell>> = BTreeMap::new();
        for c in &block {
            lines.entry((c.key.3, c.key.4)).or_default().push(c);
        }
        for (_, line) in lines {
            let _ = write!(out, "{:<12}", line[0].solver);
            for (wi, _) in &weights {
                let text = match line.iter().find(|c| c.key.2 == *wi) {
                    Some(c) if c.failures == c.runs => "failed".to_string(),
                    Some(c) => format!("{:.1} ({:.3}s)", c.mean_expanded, c.mean_time_ms / 1e3),
                    None => "-".to_string(),
                };
                let _ = write!(out, "{text:>22}");
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

fn write_cells<'a>(cells: impl Iterator<Item = &'a Cell>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    for c in cells {
        w.serialize(c).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Expanded nodes against `N` at the largest weight, and against `w` at the
/// largest `N` without reprioritization.
pub fn write_figures(rows: &[Row], vs_n: impl Write, vs_w: impl Write) -> Result<()> {
    let cells = cells(rows);
    let top_w = cells.iter().map(|c| c.key.2).max();
    let top_n = cells.iter().map(|c| c.key.1).max();
    let mut by_n: Vec<&Cell> = cells.iter().filter(|c| Some(c.key.2) == top_w).collect();
    by_n.sort_by_key(|c| (c.key.0, c.key.3, c.key.4, c.key.1));
    write_cells(by_n.into_iter(), vs_n)?;
    let mut by_w: Vec<&Cell> = cells
        .iter()
        .filter(|c| Some(c.key.1) == top_n && !c.reprioritize)
        .collect();
    by_w.sort_by_key(|c| (c.key.0, c.key.3, c.key.2));
    write_cells(by_w.into_iter(), vs_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchConfig {
        BenchConfig {
            maps: vec!["random-32".into()],
            ns: vec![4],
            weights: vec![Weight::ZERO, Weight::ONE],
            instances: 2,
            no_timing: true,
            verify: true,
            ..BenchConfig::default()
        }
    }

    #[test]
    fn one_row_per_configuration_in_order() {
        let rows = run_suite(&small()).unwrap();
        assert_eq!(rows.len(), 2 * 5 * 2 * 2);
        assert!(rows.windows(2).all(|w| w[0].key < w[1].key));
        assert!(rows.iter().all(|r| r.error.is_empty() && r.time_ms == "0.000"));
        // every solver agrees on the accepted total per instance
        for inst in 0..2 {
            let totals: std::collections::BTreeSet<_> = rows
                .iter()
                .filter(|r| r.key.instance == inst)
                .map(|r| r.tree_path_total)
                .collect();
            assert_eq!(totals.len(), 1);
        }
    }

    #[test]
    fn csv_header_and_shape() {
        let mut rows = run_suite(&BenchConfig {
            instances: 1,
            ..small()
        })
        .unwrap();
        rows.truncate(3);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 14);
        assert_eq!(&first[..6], ["random-32", "kruskal", "", "4", "0", "false"]);
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let config = BenchConfig {
            maps: vec!["open-4".into()],
            ns: vec![2, 40],
            ..small()
        };
        let rows = run_suite(&config).unwrap();
        assert!(rows
            .iter()
            .filter(|r| r.n == 40)
            .all(|r| r.expanded.is_none() && !r.error.is_empty()));
        assert!(rows.iter().filter(|r| r.n == 2).all(|r| r.error.is_empty()));
        let table = summary_table(&rows);
        assert!(table.contains("failed"));
    }

    #[test]
    fn bad_config_is_rejected() {
        assert!(run_suite(&BenchConfig::default()).is_err());
        assert!(run_suite(&BenchConfig { ns: vec![1], ..small() }).is_err());
    }

    #[test]
    fn figures_pick_their_slices() {
        let rows = run_suite(&small()).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        write_figures(&rows, &mut a, &mut b).unwrap();
        let a = String::from_utf8(a).unwrap();
        let b = String::from_utf8(b).unwrap();
        assert!(a.lines().skip(1).all(|l| l.contains(",1,")));
        assert!(b.lines().skip(1).all(|l| l.contains(",false,")));
        assert_eq!(b.lines().count(), 1 + 5 * 2);
    }
}
