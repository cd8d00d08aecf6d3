use std::collections::BTreeMap;

use serde::Serialize;

/// Which engine produced a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionSource {
    Analytic,
    Empirical,
    Mitigated,
    Qec,
}

impl RegionSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionSource::Analytic => "analytic",
            RegionSource::Empirical => "empirical",
            RegionSource::Mitigated => "mitigated",
            RegionSource::Qec => "qec",
        }
    }
}

impl std::fmt::Display for RegionSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Maximum reliable depth at one width, plus the engine-specific annotations
/// that travel with it into tables.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FrontierPoint {
    pub max_depth: u64,
    pub p_hat: Option<f64>,
    pub stderr: Option<f64>,
    pub d_code: Option<u64>,
}

impl FrontierPoint {
    pub fn depth(max_depth: u64) -> Self {
        Self {
            max_depth,
            ..Self::default()
        }
    }
}

/// Set of `(width, depth)` shapes meeting a success threshold, stored as a
/// frontier `width -> max_depth`. A shape `(w, d)` is a member iff
/// `1 <= d <= frontier(w)`, so membership is downward closed in depth by
/// construction. `max_depth == 0` means no depth passes at that width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapabilityRegion {
    pub label: String,
    pub source: RegionSource,
    pub threshold: f64,
    pub frontier: BTreeMap<u64, FrontierPoint>,
    pub metadata: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

impl CapabilityRegion {
    pub fn new(label: impl Into<String>, source: RegionSource, threshold: f64) -> Self {
        Self {
            label: label.into(),
            source,
            threshold,
            frontier: BTreeMap::new(),
            metadata: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn insert(&mut self, width: u64, point: FrontierPoint) {
        self.frontier.insert(width, point);
    }

    /// Frontier depth at `width`; 0 for widths that were not evaluated.
    pub fn max_depth(&self, width: u64) -> u64 {
        self.frontier.get(&width).map_or(0, |p| p.max_depth)
    }

    pub fn contains(&self, width: u64, depth: u64) -> bool {
        depth >= 1 && depth <= self.max_depth(width)
    }

    pub fn widths(&self) -> impl Iterator<Item = u64> + '_ {
        self.frontier.keys().copied()
    }

    /// Largest `width * max_depth` over the frontier (saturating).
    pub fn max_quops(&self) -> u64 {
        self.frontier
            .iter()
            .map(|(&w, p)| w.saturating_mul(p.max_depth))
            .max()
            .unwrap_or(0)
    }

    /// Pointwise frontier comparison over the widths evaluated in `self`.
    pub fn is_subset_of(&self, other: &CapabilityRegion) -> bool {
        self.frontier
            .iter()
            .all(|(&w, p)| p.max_depth <= other.max_depth(w))
    }

    /// True when the frontier never increases with width.
    pub fn is_non_increasing(&self) -> bool {
        self.frontier
            .values()
            .zip(self.frontier.values().skip(1))
            .all(|(a, b)| b.max_depth <= a.max_depth)
    }

    /// No shapes at all.
    pub fn is_empty(&self) -> bool {
        self.frontier.values().all(|p| p.max_depth == 0)
    }
}
