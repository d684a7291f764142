use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Cost;

/// Path confirmation rule used by the merged solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Bidirectional heuristic search, the fmin condition.
    Hs,
    /// Bidirectional best-first search, the gmin rule.
    Bs,
    /// Meet in the middle.
    Mm,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Hs, Criterion::Bs, Criterion::Mm];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Hs => "hs",
            Criterion::Bs => "bs",
            Criterion::Mm => "mm",
        }
    }

    /// Whether a meeting cost `meet` between two components is confirmed.
    /// `c_min` is the smallest edge cost in the graph (MM only).
    pub fn confirms(self, meet: Cost, a: &FrontierBounds, b: &FrontierBounds, c_min: Cost) -> bool {
        match self {
            Criterion::Hs => confirm_hs(meet, a, b),
            Criterion::Bs => confirm_bs(meet, a, b),
            Criterion::Mm => confirm_mm(meet, a, b, c_min),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hs" => Ok(Criterion::Hs),
            "bs" => Ok(Criterion::Bs),
            "mm" => Ok(Criterion::Mm),
            _ => Err(Error::InvalidInstance(format!("unknown criterion {s:?}"))),
        }
    }
}

/// Frontier summaries of one component. An exhausted open set has every
/// field infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrontierBounds {
    /// `f` of the component's nomination.
    pub f_nom: Cost,
    pub gmin: Cost,
    pub prmin: Cost,
}

impl FrontierBounds {
    pub const EXHAUSTED: FrontierBounds = FrontierBounds {
        f_nom: Cost::INFINITY,
        gmin: Cost::INFINITY,
        prmin: Cost::INFINITY,
    };
}

pub fn confirm_hs(meet: Cost, a: &FrontierBounds, b: &FrontierBounds) -> bool {
    meet.is_finite() && meet <= a.f_nom.max(b.f_nom)
}

pub fn confirm_bs(meet: Cost, a: &FrontierBounds, b: &FrontierBounds) -> bool {
    meet.is_finite() && meet <= a.gmin + b.gmin
}

pub fn confirm_mm(meet: Cost, a: &FrontierBounds, b: &FrontierBounds, c_min: Cost) -> bool {
    let c = a.prmin.min(b.prmin);
    let bound = c.max(a.f_nom).max(b.f_nom).max(a.gmin + b.gmin + c_min);
    meet.is_finite() && meet <= bound
}
