//! Map loading, landmark cache location and heuristic selection.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use mgpf_core::graph::{parse_edge_list, parse_map};
use mgpf_core::heuristic::{HeuristicKind, HeuristicProvider, LandmarkTable, Weight};
use mgpf_core::{Error, Graph, Instance, Result};

use crate::synthetic::Synthetic;

/// Maps at or below this many nodes get the exact heuristic under `auto`.
pub const EXACT_NODE_LIMIT: usize = 64 * 64;

pub const DEFAULT_LANDMARKS: usize = 100;

#[derive(Clone, Debug)]
pub struct MapSource {
    /// File stem or synthetic map name.
    pub name: String,
    pub graph: Arc<Graph>,
}

/// Loads a MovingAI map or edge-list file, or generates a synthetic map
/// when no such file exists and `name` is a synthetic map name.
pub fn load_map(name: &str) -> Result<MapSource> {
    let path = Path::new(name);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let graph = if text.trim_start().starts_with("type") {
            parse_map(&text)?
        } else {
            parse_edge_list(&text)?
        };
        let name = path
            .file_stem()
            .map_or_else(|| name.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(MapSource {
            name,
            graph: Arc::new(graph),
        });
    }
    let synthetic: Synthetic = name
        .parse()
        .map_err(|e| Error::InvalidInstance(format!("{name:?} is neither a file nor a synthetic map ({e})")))?;
    let n = synthetic.size();
    Ok(MapSource {
        name: synthetic.to_string(),
        graph: Arc::new(Graph::from_grid(n, n, &synthetic.mask())),
    })
}

/// `MGPF_CACHE_DIR`, else `$XDG_CACHE_HOME/mgpf`, else `~/.cache/mgpf`, else
/// `.mgpf-cache` in the working directory.
pub fn cache_dir() -> PathBuf {
    let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    if let Some(dir) = var("MGPF_CACHE_DIR") {
        return dir;
    }
    if let Some(dir) = var("XDG_CACHE_HOME") {
        return dir.join("mgpf");
    }
    if let Some(home) = var("HOME") {
        return home.join(".cache").join("mgpf");
    }
    PathBuf::from(".mgpf-cache")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeuristicChoice {
    /// Exact on small maps, ALT elsewhere.
    #[default]
    Auto,
    Fixed(HeuristicKind),
}

impl HeuristicChoice {
    pub fn resolve(self, graph: &Graph) -> HeuristicKind {
        match self {
            HeuristicChoice::Fixed(k) => k,
            HeuristicChoice::Auto if graph.node_count() <= EXACT_NODE_LIMIT => HeuristicKind::Exact,
            HeuristicChoice::Auto => HeuristicKind::Alt,
        }
    }
}

impl fmt::Display for HeuristicChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeuristicChoice::Auto => f.write_str("auto"),
            HeuristicChoice::Fixed(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for HeuristicChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(HeuristicChoice::Auto)
        } else {
            s.parse().map(HeuristicChoice::Fixed)
        }
    }
}

#[derive(Clone, Debug)]
pub struct LandmarkConfig {
    pub count: usize,
    pub seed: u64,
    pub dir: PathBuf,
    pub force_rebuild: bool,
}

impl LandmarkConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        LandmarkConfig {
            count,
            seed,
            dir: cache_dir(),
            force_rebuild: false,
        }
    }

    /// Cached table for the graph and whether it was read from disk.
    pub fn load(&self, graph: &Graph) -> Result<(Arc<LandmarkTable>, bool)> {
        LandmarkTable::load_or_build(graph, self.count, self.seed, &self.dir, self.force_rebuild)
    }
}

/// Provider for `kind`, loading landmarks only when they are needed.
pub fn build_provider(
    instance: &Instance,
    kind: HeuristicKind,
    weight: Weight,
    landmarks: &mut dyn FnMut() -> Result<Arc<LandmarkTable>>,
) -> Result<HeuristicProvider> {
    let table = match kind {
        HeuristicKind::Alt => Some(landmarks()?),
        _ => None,
    };
    HeuristicProvider::new(instance, kind, weight, table)
}
