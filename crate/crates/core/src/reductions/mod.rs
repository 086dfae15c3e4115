//! Forbidden configurations: detection, reduction surgery, and extension of
//! colorings back from the reduced graph. Chained together they give a
//! constructive 8-coloring for graphs with mad at most 18/7 and maximum
//! degree at most 7.

mod classify;
mod constructive;
mod detect;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{extend_exact, is_valid_2distance, list_extend, Coloring, ExtendMode, SearchOutcome};
use crate::graph::{Graph, GraphError, PathDescriptor, Vertex, VertexSet};
use crate::potential::{add_path, rho_star, PotentialParams};

pub use classify::{classify_vertices, ClassifyError, TwoVertexClass, VertexClasses};
pub use constructive::{constructive_color, constructive_color_with, ConstructiveError, ConstructiveOptions, ConstructiveReport};
pub use detect::{detect_configuration, detect_with, detect_with_params, DetectError};

/// Maximum degree the recipes are written for; the palette has `DELTA + 1` colors.
pub const DELTA: usize = 7;
pub const PALETTE: u32 = DELTA as u32 + 1;
/// Search budget for the exact extension of one reduction.
pub const EXTEND_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConfigKind {
    DegreeOne,
    CountingPair,
    FourPlusPath,
    ThreePathBadEnd,
    TwoPathBadEnds,
    TwoPathChord,
    ThreePathCycle,
    SmallVertex,
    WeirdSeven,
    WeirdSix,
    SevenSevenTwoPaths,
    TwoConsecutiveThreePaths,
    ThreeConsecutiveThreePaths,
    SponsorManyBridges,
    SponsorAllBadNeighbors,
    SponsorWithSmallX,
}

impl ConfigKind {
    /// Dispatch order: structural checks first, potential-based ones last.
    pub const DISPATCH: [ConfigKind; 16] = [
        ConfigKind::DegreeOne,
        ConfigKind::FourPlusPath,
        ConfigKind::ThreePathBadEnd,
        ConfigKind::TwoPathBadEnds,
        ConfigKind::TwoPathChord,
        ConfigKind::ThreePathCycle,
        ConfigKind::SmallVertex,
        ConfigKind::CountingPair,
        ConfigKind::WeirdSeven,
        ConfigKind::WeirdSix,
        ConfigKind::SevenSevenTwoPaths,
        ConfigKind::ThreeConsecutiveThreePaths,
        ConfigKind::TwoConsecutiveThreePaths,
        ConfigKind::SponsorManyBridges,
        ConfigKind::SponsorAllBadNeighbors,
        ConfigKind::SponsorWithSmallX,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConfigKind::DegreeOne => "DegreeOne",
            ConfigKind::CountingPair => "CountingPair",
            ConfigKind::FourPlusPath => "FourPlusPath",
            ConfigKind::ThreePathBadEnd => "ThreePathBadEnd",
            ConfigKind::TwoPathBadEnds => "TwoPathBadEnds",
            ConfigKind::TwoPathChord => "TwoPathChord",
            ConfigKind::ThreePathCycle => "ThreePathCycle",
            ConfigKind::SmallVertex => "SmallVertex",
            ConfigKind::WeirdSeven => "WeirdSeven",
            ConfigKind::WeirdSix => "WeirdSix",
            ConfigKind::SevenSevenTwoPaths => "SevenSevenTwoPaths",
            ConfigKind::TwoConsecutiveThreePaths => "TwoConsecutiveThreePaths",
            ConfigKind::ThreeConsecutiveThreePaths => "ThreeConsecutiveThreePaths",
            ConfigKind::SponsorManyBridges => "SponsorManyBridges",
            ConfigKind::SponsorAllBadNeighbors => "SponsorAllBadNeighbors",
            ConfigKind::SponsorWithSmallX => "SponsorWithSmallX",
        }
    }

    pub fn from_name(name: &str) -> Option<ConfigKind> {
        ConfigKind::DISPATCH.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A recorded `rho*` side-condition: `rho*_{G - removed}(set) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialQuery {
    pub label: String,
    pub set: Vec<Vertex>,
    pub removed: Vec<Vertex>,
    pub value: i64,
}

impl PotentialQuery {
    pub fn evaluate(g: &Graph, label: impl Into<String>, set: &[Vertex], removed: &[Vertex]) -> PotentialQuery {
        PotentialQuery { label: label.into(), set: set.to_vec(), removed: removed.to_vec(), value: rho_star_minus(g, set, removed) }
    }
}

/// `rho*_{G - removed}(set)` with the default coefficients.
pub(crate) fn rho_star_minus(g: &Graph, set: &[Vertex], removed: &[Vertex]) -> i64 {
    let (h, map) = g.remove_vertices(removed);
    let mapped: Vec<Vertex> = set.iter().map(|&x| map[x].expect("queried vertex survives the removal")).collect();
    let a = VertexSet::from_slice(h.n(), &mapped).expect("mapped into range");
    rho_star(&h, &a, PotentialParams::default()).expect("valid set").value
}

/// Where a pinned vertex takes its color from in the reduced graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PinSource {
    /// The `index`-th internal vertex (from the `u` end) of addition `addition`.
    Added { addition: usize, index: usize },
    /// A vertex of the original graph that survives into the reduced graph.
    Kept(Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pin {
    pub vertex: Vertex,
    pub source: PinSource,
}

/// A path with `k` new internal vertices joining two surviving vertices,
/// given by their ids in the original graph. `k = 0` is an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Addition {
    pub u: Vertex,
    pub v: Vertex,
    pub k: usize,
}

impl Addition {
    pub fn required_potential(&self) -> i64 {
        7 - 2 * self.k as i64
    }
}

/// One way to reduce a configuration: the surgery, plus how to color the
/// vertices it frees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub tag: String,
    pub remove_vertices: Vec<Vertex>,
    pub remove_edges: Vec<(Vertex, Vertex)>,
    /// Survivors whose color in the reduced graph is discarded.
    pub recolor: Vec<Vertex>,
    /// Applied in order; each needs `rho* >= 7 - 2k` in the graph built so far.
    pub additions: Vec<Addition>,
    pub pins: Vec<Pin>,
    /// Greedy order covering every freed vertex, when one is known to work.
    pub order: Option<Vec<Vertex>>,
}

impl Recipe {
    pub fn new(tag: impl Into<String>) -> Self {
        Recipe { tag: tag.into(), ..Recipe::default() }
    }

    /// Vertices colored during extension: removed and recolored ones.
    pub fn free(&self) -> Vec<Vertex> {
        let mut f: Vec<Vertex> = self.remove_vertices.iter().chain(&self.recolor).copied().collect();
        f.sort_unstable();
        f.dedup();
        f
    }

    /// Same surgery without path additions or the pins that read from them.
    pub fn plain(&self) -> Recipe {
        Recipe {
            tag: format!("{}/plain", self.tag),
            remove_vertices: self.remove_vertices.clone(),
            remove_edges: self.remove_edges.clone(),
            recolor: self.recolor.clone(),
            additions: Vec::new(),
            pins: self.pins.iter().filter(|p| matches!(p.source, PinSource::Kept(_))).cloned().collect(),
            order: None,
        }
    }
}

/// A detected instance of a forbidden configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub kind: ConfigKind,
    /// Role name to vertices.
    pub witness: BTreeMap<String, Vec<Vertex>>,
    pub paths: Vec<PathDescriptor>,
    pub potentials: Vec<PotentialQuery>,
    /// Candidate surgeries, tried in order by `apply_reduction`.
    pub recipes: Vec<Recipe>,
}

impl Configuration {
    pub(crate) fn new(kind: ConfigKind) -> Self {
        Configuration { kind, witness: BTreeMap::new(), paths: Vec::new(), potentials: Vec::new(), recipes: Vec::new() }
    }

    pub(crate) fn role(mut self, name: &str, vs: impl IntoIterator<Item = Vertex>) -> Self {
        self.witness.insert(name.to_string(), vs.into_iter().collect());
        self
    }

    pub(crate) fn path(mut self, p: PathDescriptor) -> Self {
        self.paths.push(p);
        self
    }

    pub(crate) fn recipe(mut self, r: Recipe) -> Self {
        self.recipes.push(r);
        self
    }

    /// Structural re-check: witness ids exist, recorded paths are still runs
    /// of 2-vertices, and every recorded potential recomputes to its value.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        for (role, vs) in &self.witness {
            if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
                return Err(format!("witness {role} names vertex {v} outside the graph"));
            }
        }
        for p in &self.paths {
            if !p.validate(g) {
                return Err(format!("path {p:?} is not a run of 2-vertices"));
            }
        }
        for q in &self.potentials {
            let now = rho_star_minus(g, &q.set, &q.removed);
            if now != q.value {
                return Err(format!("potential {} recomputes to {now}, recorded {}", q.label, q.value));
            }
        }
        if self.recipes.is_empty() {
            return Err("no reduction recipe".into());
        }
        Ok(())
    }

    /// JSON shape used by the command line: kind, witness, potentials.
    pub fn summary_json(&self) -> serde_json::Value {
        let potentials: serde_json::Map<String, serde_json::Value> =
            self.potentials.iter().map(|q| (q.label.clone(), q.value.into())).collect();
        let mut witness = serde_json::Map::new();
        for (role, vs) in &self.witness {
            witness.insert(role.clone(), serde_json::json!(vs));
        }
        if !self.paths.is_empty() {
            witness.insert("paths".into(), serde_json::to_value(&self.paths).expect("paths serialize"));
        }
        serde_json::json!({ "kind": self.kind.name(), "witness": witness, "potentials": potentials })
    }
}

/// An added path as it sits in the reduced graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedPath {
    pub addition: Addition,
    /// Internal vertices in the reduced graph, in order from `u`.
    pub internal: Vec<Vertex>,
    /// `rho*({u, v})` measured just before adding the path.
    pub potential: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub h: Graph,
    pub removed: Vec<Vertex>,
    pub added: Vec<AddedPath>,
    /// `to_h[x]` is the id of original vertex `x` in the reduced graph.
    pub to_h: Vec<Option<Vertex>>,
    pub recipe: Recipe,
    /// Index of the recipe used among the configuration's candidates.
    pub candidate: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("configuration does not validate: {0}")]
    Invalid(String),
    #[error("addition {u}-{v} with {k} internal vertices needs rho* >= {need}, found {found}")]
    Precondition { u: Vertex, v: Vertex, k: usize, need: i64, found: i64 },
    #[error("addition endpoint {0} does not survive the surgery")]
    MissingEndpoint(Vertex),
    #[error("addition would create a loop or parallel edge at {0}-{1}")]
    Parallel(Vertex, Vertex),
    #[error("reduced graph has maximum degree {0}")]
    DegreeTooLarge(usize),
    #[error("reduced graph is not smaller ({0} >= {1})")]
    NotSmaller(usize, usize),
    #[error("no candidate recipe applies")]
    NoCandidate,
}

/// Performs one candidate surgery, checking every addition's potential
/// precondition in the graph built so far.
pub fn build_reduction(g: &Graph, recipe: &Recipe) -> Result<Reduction, ReductionError> {
    let mut removed = recipe.remove_vertices.clone();
    removed.sort_unstable();
    removed.dedup();
    for &v in &removed {
        g.check_vertex(v)?;
    }
    let (h, to_h) = g.remove_vertices(&removed);
    let mapped: Vec<(Vertex, Vertex)> = recipe
        .remove_edges
        .iter()
        .map(|&(a, b)| match (to_h[a], to_h[b]) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(ReductionError::MissingEndpoint(if to_h[a].is_none() { a } else { b })),
        })
        .collect::<Result<_, _>>()?;
    let mut h = h.without_edges(&mapped)?;
    let mut added = Vec::new();
    for add in &recipe.additions {
        let a = to_h.get(add.u).copied().flatten().ok_or(ReductionError::MissingEndpoint(add.u))?;
        let b = to_h.get(add.v).copied().flatten().ok_or(ReductionError::MissingEndpoint(add.v))?;
        if a == b || (add.k == 0 && h.has_edge(a, b)) {
            return Err(ReductionError::Parallel(add.u, add.v));
        }
        let set = VertexSet::from_slice(h.n(), &[a, b])?;
        let found = rho_star(&h, &set, PotentialParams::default())?.value;
        let need = add.required_potential();
        if found < need {
            return Err(ReductionError::Precondition { u: add.u, v: add.v, k: add.k, need, found });
        }
        let first = h.n();
        h = add_path(&h, a, b, add.k).map_err(|e| ReductionError::Invalid(e.to_string()))?;
        added.push(AddedPath { addition: add.clone(), internal: (first..first + add.k).collect(), potential: found });
    }
    if h.max_degree() > DELTA {
        return Err(ReductionError::DegreeTooLarge(h.max_degree()));
    }
    if h.size() >= g.size() {
        return Err(ReductionError::NotSmaller(h.size(), g.size()));
    }
    Ok(Reduction { h, removed, added, to_h, recipe: recipe.clone(), candidate: 0 })
}

/// First candidate recipe of `cfg` whose surgery goes through.
pub fn apply_reduction(g: &Graph, cfg: &Configuration) -> Result<Reduction, ReductionError> {
    let mut last = ReductionError::NoCandidate;
    for (i, r) in cfg.recipes.iter().enumerate() {
        match build_reduction(g, r) {
            Ok(mut red) => {
                red.candidate = i;
                return Ok(red);
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtendError {
    #[error("coloring of the reduced graph is not a valid {PALETTE}-coloring")]
    BadInput,
    #[error("extension of {kind} failed on free vertices {free:?} (outcome: {outcome})")]
    Failed { kind: ConfigKind, free: Vec<Vertex>, outcome: String },
}

/// How an extension finished.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtendRoute {
    Greedy,
    PinnedSearch,
    Search,
}

/// Colors `g` from a coloring `ch` of the reduced graph: survivors keep
/// their colors, pins copy colors from the reduced graph, and the freed
/// vertices are colored greedily when the recipe gives an order, otherwise
/// by exact search over the freed vertices only.
pub fn extend_coloring(g: &Graph, cfg: &Configuration, red: &Reduction, ch: &Coloring) -> Result<Coloring, ExtendError> {
    extend_coloring_traced(g, cfg, red, ch).map(|(c, _)| c)
}

pub fn extend_coloring_traced(
    g: &Graph,
    cfg: &Configuration,
    red: &Reduction,
    ch: &Coloring,
) -> Result<(Coloring, ExtendRoute), ExtendError> {
    if ch.k > PALETTE || !matches!(is_valid_2distance(&red.h, ch), Ok(None)) {
        return Err(ExtendError::BadInput);
    }
    let free = red.recipe.free();
    let mut base = Coloring::empty(g.n(), PALETTE);
    for x in g.vertices() {
        if let Some(y) = red.to_h[x] {
            base.colors[x] = ch.colors[y];
        }
    }
    for &x in &free {
        base.colors[x] = None;
    }

    if let Some(order) = &red.recipe.order {
        if let Ok(c) = list_extend(g, &base, order, ExtendMode::Greedy) {
            if c.is_total() {
                return Ok((c, ExtendRoute::Greedy));
            }
        }
    }
    let pinned = apply_pins(g, red, ch, &base);
    if let Some(p) = pinned {
        if let SearchOutcome::Colored(c) = extend_exact(g, &p, EXTEND_BUDGET) {
            return Ok((c, ExtendRoute::PinnedSearch));
        }
    }
    match extend_exact(g, &base, EXTEND_BUDGET) {
        SearchOutcome::Colored(c) => Ok((c, ExtendRoute::Search)),
        other => Err(ExtendError::Failed { kind: cfg.kind, free, outcome: format!("{other:?}") }),
    }
}

/// `base` with the recipe's pins applied, or `None` when the recipe has no
/// pins or they clash with each other or with survivors.
fn apply_pins(g: &Graph, red: &Reduction, ch: &Coloring, base: &Coloring) -> Option<Coloring> {
    if red.recipe.pins.is_empty() {
        return None;
    }
    let mut c = base.clone();
    for pin in &red.recipe.pins {
        let color = match pin.source {
            PinSource::Added { addition, index } => ch.colors[*red.added.get(addition)?.internal.get(index)?],
            PinSource::Kept(x) => ch.colors[red.to_h[x]?],
        }?;
        if c.colors[pin.vertex].is_some_and(|old| old != color) || c.seen_by(g, pin.vertex).contains(&color) {
            return None;
        }
        c.colors[pin.vertex] = Some(color);
    }
    Some(c)
}

#[cfg(test)]
mod tests;
