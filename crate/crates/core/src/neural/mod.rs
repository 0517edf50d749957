//! Assembly-calculus substrate: areas, fibers, inhibition, projection maps
//! and the bulk-synchronous Projection* step with Hebbian plasticity.

mod brain;
mod projection;
pub mod snapshot;
pub mod synapse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Weight;

pub use brain::{build_brain, Area, AreaSpec, Brain, Fiber, FiberSpec, MatrixRef};
pub use projection::{build_projection_map, project_star, select_winners, ProjectionConfig, ProjectionOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AreaId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiberId(pub u32);

/// A set of neuron indices within one area, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assembly(Vec<u32>);

impl Assembly {
    pub fn new(mut neurons: Vec<u32>) -> Self {
        neurons.sort_unstable();
        neurons.dedup();
        Assembly(neurons)
    }

    pub fn empty() -> Self {
        Assembly(Vec::new())
    }

    pub fn neurons(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, neuron: u32) -> bool {
        self.0.binary_search(&neuron).is_ok()
    }

    /// Number of shared neurons.
    pub fn overlap(&self, other: &Assembly) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Shared neurons as a fraction of `k`.
    pub fn overlap_fraction(&self, other: &Assembly, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.overlap(other) as f64 / k as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub beta: f64,
}

impl AreaParams {
    /// `n = 10⁴, k = 100, p = 0.01, β = 0.2`, the fast simulation setting.
    pub const FAST: AreaParams = AreaParams { n: 10_000, k: 100, p: 0.01, beta: 0.2 };

    pub fn new(n: usize, k: usize, p: f64, beta: f64) -> Result<Self, NeuralError> {
        let params = AreaParams { n, k, p, beta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        if self.k == 0 {
            return Err(NeuralError::InvalidParams("k must be at least 1".into()));
        }
        if self.n < 2 * self.k {
            return Err(NeuralError::InvalidParams(format!(
                "n = {} must be at least 2k = {}",
                self.n,
                2 * self.k
            )));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(NeuralError::InvalidParams(format!("p = {} must lie in (0, 1)", self.p)));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(NeuralError::InvalidParams(format!("beta = {} must be finite and >= 0", self.beta)));
        }
        Ok(())
    }
}

impl Default for AreaParams {
    fn default() -> Self {
        AreaParams::FAST
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeuralError {
    #[error("invalid area parameters: {0}")]
    InvalidParams(String),
    #[error("duplicate area `{0}`")]
    DuplicateArea(String),
    #[error("unknown area `{0}`")]
    UnknownArea(String),
    #[error("no fiber from `{0}` to `{1}`")]
    UnknownFiber(String, String),
    #[error("duplicate fiber between `{0}` and `{1}`")]
    DuplicateFiber(String, String),
    #[error("area `{0}` is not an explicit (lexicon) area")]
    NotExplicit(String),
    #[error("word `{0}` has no fixed assembly")]
    UnknownWord(String),
    #[error("source area `{0}` has no active assembly")]
    SilentSource(String),
    #[error("projection {0} -> {1} is not permitted by the current inhibition state")]
    InhibitedProjection(String, String),
    #[error("snapshot: {0}")]
    Snapshot(String),
}

/// Which areas and fibers are currently disinhibited. Everything starts inhibited.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InhibitionState {
    areas: BTreeSet<AreaId>,
    fibers: BTreeSet<FiberId>,
}

impl InhibitionState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn area_disinhibited(&self, a: AreaId) -> bool {
        self.areas.contains(&a)
    }

    pub fn fiber_disinhibited(&self, f: FiberId) -> bool {
        self.fibers.contains(&f)
    }

    pub fn set_area(&mut self, a: AreaId, disinhibited: bool) {
        if disinhibited {
            self.areas.insert(a);
        } else {
            self.areas.remove(&a);
        }
    }

    pub fn set_fiber(&mut self, f: FiberId, disinhibited: bool) {
        if disinhibited {
            self.fibers.insert(f);
        } else {
            self.fibers.remove(&f);
        }
    }

    pub fn disinhibited_areas(&self) -> impl Iterator<Item = AreaId> + '_ {
        self.areas.iter().copied()
    }

    pub fn disinhibited_fibers(&self) -> impl Iterator<Item = FiberId> + '_ {
        self.fibers.iter().copied()
    }
}

/// from-area → to-areas, in id order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionMap {
    entries: BTreeMap<AreaId, BTreeSet<AreaId>>,
}

impl ProjectionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: AreaId, to: AreaId) {
        self.entries.entry(from).or_default().insert(to);
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, from: AreaId, to: AreaId) -> bool {
        self.entries.get(&from).is_some_and(|s| s.contains(&to))
    }

    pub fn entries(&self) -> impl Iterator<Item = (AreaId, &BTreeSet<AreaId>)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (AreaId, AreaId)> + '_ {
        self.entries.iter().flat_map(|(k, v)| v.iter().map(move |t| (*k, *t)))
    }

    pub fn sources(&self) -> BTreeSet<AreaId> {
        self.entries.keys().copied().collect()
    }

    pub fn targets(&self) -> BTreeSet<AreaId> {
        self.entries.values().flatten().copied().collect()
    }

    pub fn sources_of(&self, target: AreaId) -> Vec<AreaId> {
        self.entries
            .iter()
            .filter(|(_, v)| v.contains(&target))
            .map(|(k, _)| *k)
            .collect()
    }

    /// Render as `{Lex:[Adj^1], Adj:[Adj^1]}` using area names.
    pub fn display<'a, T: Weight>(&'a self, brain: &'a Brain<T>) -> impl fmt::Display + 'a {
        MapDisplay { map: self, names: move |a| brain.area_name(a).to_string() }
    }

    /// Named form used by traces: `[(from, [to, ...]), ...]` in display order.
    pub fn named<T: Weight>(&self, brain: &Brain<T>) -> Vec<(String, Vec<String>)> {
        self.ordered_entries()
            .into_iter()
            .map(|(k, v)| (brain.area_name(k).to_string(), v.iter().map(|t| brain.area_name(*t).to_string()).collect()))
            .collect()
    }

    // By area id; the lexicon is declared first so it leads.
    fn ordered_entries(&self) -> Vec<(AreaId, Vec<AreaId>)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, s)| (*k, s.iter().copied().collect())).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }
}

struct MapDisplay<'a, F> {
    map: &'a ProjectionMap,
    names: F,
}

impl<F: Fn(AreaId) -> String> fmt::Display for MapDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (from, to)) in self.map.ordered_entries().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:[", (self.names)(from))?;
            for (j, t) in to.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", (self.names)(*t))?;
            }
            write!(f, "]")?;
        }
        write!(f, "}}")
    }
}
