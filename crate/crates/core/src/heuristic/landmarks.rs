use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{shortest_path_oracle, Cost, Graph, NodeId};

const MAGIC: &[u8; 8] = b"MGPFLMK1";

/// Exact single-source costs from a set of landmark nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandmarkTable {
    landmarks: Vec<NodeId>,
    node_count: usize,
    /// node-major: `dists[u * k + i]` is the cost between landmark `i` and `u`
    dists: Vec<Cost>,
    requested: usize,
}

impl LandmarkTable {
    /// Runs the oracle from each landmark (in parallel; the result does not
    /// depend on scheduling).
    pub fn build(graph: &Graph, landmarks: Vec<NodeId>, requested: usize) -> Self {
        let n = graph.node_count();
        let k = landmarks.len();
        let rows: Vec<Vec<Cost>> = landmarks
            .par_iter()
            .map(|&l| shortest_path_oracle(graph, l).dist)
            .collect();
        let mut dists = vec![Cost::INFINITY; n * k];
        for (i, row) in rows.iter().enumerate() {
            for (u, &d) in row.iter().enumerate() {
                dists[u * k + i] = d;
            }
        }
        LandmarkTable {
            landmarks,
            node_count: n,
            dists,
            requested,
        }
    }

    pub fn landmarks(&self) -> &[NodeId] {
        &self.landmarks
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// How many landmarks were asked for but could not be placed.
    pub fn shortfall(&self) -> usize {
        self.requested.saturating_sub(self.landmarks.len())
    }

    pub fn dist(&self, landmark: usize, node: NodeId) -> Cost {
        self.dists[node * self.landmarks.len() + landmark]
    }

    /// `max_L |d(L, a) − d(L, b)|` over landmarks reaching both nodes.
    pub fn lower_bound(&self, a: NodeId, b: NodeId) -> Cost {
        let k = self.landmarks.len();
        if k == 0 || a == b {
            return Cost::ZERO;
        }
        let ra = &self.dists[a * k..(a + 1) * k];
        let rb = &self.dists[b * k..(b + 1) * k];
        let mut best = 0u64;
        for (&x, &y) in ra.iter().zip(rb) {
            if x.is_finite() && y.is_finite() {
                best = best.max(x.value().abs_diff(y.value()));
            }
        }
        Cost(best)
    }

    pub fn write_to(&self, out: &mut impl Write, fingerprint: &[u8; 32], seed: u64) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(fingerprint)?;
        for v in [
            seed,
            self.requested as u64,
            self.landmarks.len() as u64,
            self.node_count as u64,
        ] {
            out.write_all(&v.to_le_bytes())?;
        }
        for &l in &self.landmarks {
            out.write_all(&(l as u64).to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(self.dists.len() * 8);
        for d in &self.dists {
            buf.extend_from_slice(&d.value().to_le_bytes());
        }
        out.write_all(&buf)?;
        Ok(())
    }

    /// Reads a table written by [`LandmarkTable::write_to`], checking that it
    /// belongs to the given graph, seed and count.
    pub fn read_from(input: &mut impl Read, fingerprint: &[u8; 32], seed: u64, requested: usize) -> Result<Self> {
        let bad = |what: &str| Error::parse(0, format!("landmark file: {what}"));
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        let mut cursor = bytes.as_slice();
        let mut take = |n: usize| -> Result<&[u8]> {
            if cursor.len() < n {
                return Err(bad("truncated"));
            }
            let (head, tail) = cursor.split_at(n);
            cursor = tail;
            Ok(head)
        };
        if take(8)? != MAGIC {
            return Err(bad("bad magic"));
        }
        if take(32)? != fingerprint {
            return Err(bad("built for a different graph"));
        }
        let mut word = || -> Result<u64> { Ok(u64::from_le_bytes(take(8)?.try_into().unwrap())) };
        let (file_seed, file_requested, k, n) = (word()?, word()?, word()? as usize, word()? as usize);
        if file_seed != seed || file_requested != requested as u64 {
            return Err(bad("seed or count mismatch"));
        }
        let mut landmarks = Vec::with_capacity(k);
        for _ in 0..k {
            let l = word()? as usize;
            if l >= n {
                return Err(bad("landmark out of range"));
            }
            landmarks.push(l);
        }
        let cells = n.checked_mul(k).ok_or_else(|| bad("size overflow"))?;
        let mut dists = Vec::with_capacity(cells);
        for _ in 0..cells {
            dists.push(Cost(word()?));
        }
        if !cursor.is_empty() {
            return Err(bad("trailing bytes"));
        }
        Ok(LandmarkTable {
            landmarks,
            node_count: n,
            dists,
            requested,
        })
    }

    /// Sidecar file name for a graph, seed and count.
    pub fn cache_path(dir: &Path, fingerprint: &[u8; 32], seed: u64, count: usize) -> PathBuf {
        let hex: String = fingerprint[..12].iter().map(|b| format!("{b:02x}")).collect();
        dir.join(format!("landmarks-{hex}-s{seed}-n{count}.bin"))
    }

    /// Loads the cached table for `(graph, seed, count)` from `dir`, or builds
    /// and stores it. Returns the table and whether it came from the cache.
    /// An unreadable or mismatched cache file is rebuilt.
    pub fn load_or_build(
        graph: &Graph,
        count: usize,
        seed: u64,
        dir: &Path,
        force_rebuild: bool,
    ) -> Result<(Arc<LandmarkTable>, bool)> {
        let fingerprint = graph_fingerprint(graph);
        let path = Self::cache_path(dir, &fingerprint, seed, count);
        if !force_rebuild {
            if let Ok(mut file) = fs::File::open(&path) {
                if let Ok(table) = Self::read_from(&mut file, &fingerprint, seed, count) {
                    return Ok((Arc::new(table), true));
                }
            }
        }
        let table = select_landmarks(graph, count, seed);
        fs::create_dir_all(dir)?;
        // write to a temporary name first so concurrent readers never see a
        // partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut out = std::io::BufWriter::new(fs::File::create(&tmp)?);
            table.write_to(&mut out, &fingerprint, seed)?;
            out.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok((Arc::new(table), false))
    }
}

/// SHA-256 over the node count and sorted edge list.
pub fn graph_fingerprint(graph: &Graph) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update((graph.node_count() as u64).to_le_bytes());
    for (u, v, c) in graph.edges() {
        hasher.update((u as u64).to_le_bytes());
        hasher.update((v as u64).to_le_bytes());
        hasher.update(c.value().to_le_bytes());
    }
    if let Some(grid) = graph.grid() {
        hasher.update((grid.width() as u64).to_le_bytes());
        hasher.update((grid.height() as u64).to_le_bytes());
    }
    hasher.finalize().into()
}

/// Samples `count` distinct border nodes (degree < 8) with a seeded RNG; on
/// non-grid graphs every node is eligible. Fewer eligible nodes than `count`
/// yields all of them and a nonzero [`LandmarkTable::shortfall`].
pub fn select_landmarks(graph: &Graph, count: usize, seed: u64) -> LandmarkTable {
    let eligible: Vec<NodeId> = if graph.grid().is_some() {
        (0..graph.node_count()).filter(|&u| graph.degree(u) < 8).collect()
    } else {
        (0..graph.node_count()).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<NodeId> = eligible
        .choose_multiple(&mut rng, count.min(eligible.len()))
        .copied()
        .collect();
    chosen.sort_unstable();
    LandmarkTable::build(graph, chosen, count)
}
