//! Deterministic synthetic maps for CI runs.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fixed seed so a map name always denotes the same grid.
const MAP_SEED: u64 = 0x4d47_5046;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Synthetic {
    Open(usize),
    /// Perfect maze with one-cell corridors.
    Maze(usize),
    /// Each cell blocked independently with this percent probability.
    Random {
        size: usize,
        percent: u32,
    },
}

impl Synthetic {
    /// The maps shipped for CI.
    pub const SHIPPED: [Synthetic; 4] = [
        Synthetic::Open(32),
        Synthetic::Maze(32),
        Synthetic::Random { size: 32, percent: 20 },
        Synthetic::Random { size: 64, percent: 20 },
    ];

    pub fn size(self) -> usize {
        match self {
            Synthetic::Open(n) | Synthetic::Maze(n) | Synthetic::Random { size: n, .. } => n,
        }
    }

    /// Row-major passability mask.
    pub fn mask(self) -> Vec<bool> {
        let n = self.size();
        let mut rng = ChaCha8Rng::seed_from_u64(MAP_SEED ^ n as u64);
        match self {
            Synthetic::Open(_) => vec![true; n * n],
            Synthetic::Random { percent, .. } => {
                let p = f64::from(percent) / 100.0;
                (0..n * n).map(|_| !rng.gen_bool(p)).collect()
            }
            Synthetic::Maze(_) => maze(n, &mut rng),
        }
    }

    /// The map in MovingAI text form.
    pub fn map_text(self) -> String {
        let n = self.size();
        let mask = self.mask();
        let mut out = format!("type octile\nheight {n}\nwidth {n}\nmap\n");
        for row in mask.chunks(n) {
            out.extend(row.iter().map(|&p| if p { '.' } else { '@' }));
            out.push('\n');
        }
        out
    }
}

fn maze(n: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut open = vec![false; n * n];
    let cells = (n - 1) / 2;
    if cells == 0 {
        return vec![true; n * n];
    }
    let at = |r: usize, c: usize| (2 * r + 1) * n + 2 * c + 1;
    let mut seen = vec![false; cells * cells];
    let mut stack = vec![(0usize, 0usize)];
    seen[0] = true;
    open[at(0, 0)] = true;
    while let Some(&(r, c)) = stack.last() {
        let mut next: Vec<(usize, usize)> = [(0isize, 1isize), (1, 0), (0, -1), (-1, 0)]
            .iter()
            .filter_map(|&(dr, dc)| {
                let (nr, nc) = (r.checked_add_signed(dr)?, c.checked_add_signed(dc)?);
                (nr < cells && nc < cells && !seen[nr * cells + nc]).then_some((nr, nc))
            })
            .collect();
        if next.is_empty() {
            stack.pop();
            continue;
        }
        next.shuffle(rng);
        let (nr, nc) = next[0];
        seen[nr * cells + nc] = true;
        open[at(nr, nc)] = true;
        // knock out the wall between the two cells
        open[(r + nr + 1) * n + c + nc + 1] = true;
        stack.push((nr, nc));
    }
    open
}

/// `open-32`, `maze-32`, `random-32` (20% obstacles) and so on.
impl fmt::Display for Synthetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Synthetic::Open(n) => write!(f, "open-{n}"),
            Synthetic::Maze(n) => write!(f, "maze-{n}"),
            Synthetic::Random { size, percent: 20 } => write!(f, "random-{size}"),
            Synthetic::Random { size, percent } => write!(f, "random{percent}-{size}"),
        }
    }
}

impl FromStr for Synthetic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("unknown synthetic map {s:?}");
        let (kind, size) = s.rsplit_once('-').ok_or_else(bad)?;
        let size: usize = size.parse().map_err(|_| bad())?;
        if !(4..=4096).contains(&size) {
            return Err(format!("synthetic map size {size} outside 4..=4096"));
        }
        match kind {
            "open" => Ok(Synthetic::Open(size)),
            "maze" => Ok(Synthetic::Maze(size)),
            "random" => Ok(Synthetic::Random { size, percent: 20 }),
            _ => {
                let percent = kind
                    .strip_prefix("random")
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(bad)?;
                if percent >= 100 {
                    return Err(bad());
                }
                Ok(Synthetic::Random { size, percent })
            }
        }
    }
}
