//! Seeded random graph families with exact mad control, and their
//! persisted records.

use std::fs;
use std::path::Path;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{chi2_with_hint, Chi2};
use crate::fixtures;
use crate::graph::{girth, Graph, Vertex};
use crate::io::{parse_graph6, write_graph6, ParseError};
use crate::potential::{mad_exact, potential_nonnegative, PotentialParams};
use crate::reductions::{constructive_color_with, ConstructiveOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Generator {
    /// Random multigraph skeleton, every edge replaced by a path with
    /// 0..=`max_subdivision` internal vertices.
    Skeleton { min_vertices: usize, max_vertices: usize, max_subdivision: usize },
    /// Skeleton dominated by maximum-degree vertices whose edges become
    /// mostly 2- and 3-paths, so mad sits close to 18/7.
    Tight { min_vertices: usize, max_vertices: usize },
    /// Maximum-degree vertices joined by 2-paths, with 3-paths kept to a
    /// forest of stars and optional lower-degree vertices; built to avoid
    /// the cheap configurations.
    Extremal { min_vertices: usize, max_vertices: usize, fork_share: u8, max_star: usize },
    /// Random tree with pendant paths and a few long chords.
    TreeChords { min_vertices: usize, max_vertices: usize, chords: usize },
    /// Skeleton `K4` with every edge subdivided `t` times.
    SubdividedK4 { t: usize },
    /// Star `K1,d` with legs of random length and leg ends tied together.
    Spider { legs: usize },
    Fixture { name: String },
}

impl Generator {
    pub fn label(&self) -> String {
        match self {
            Generator::Skeleton { .. } => "skeleton".into(),
            Generator::Tight { .. } => "tight".into(),
            Generator::Extremal { .. } => "extremal".into(),
            Generator::TreeChords { .. } => "tree-chords".into(),
            Generator::SubdividedK4 { t } => format!("k4-subdivided-{t}"),
            Generator::Spider { legs } => format!("spider-{legs}"),
            Generator::Fixture { name } => format!("fixture-{name}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub generator: Generator,
    /// Required maximum degree, if any.
    pub max_degree: Option<usize>,
    /// Reject graphs with mad above 18/7.
    pub mad_at_most_threshold: bool,
    pub retries: usize,
}

impl CorpusSpec {
    pub fn new(generator: Generator) -> Self {
        CorpusSpec { generator, max_degree: None, mad_at_most_threshold: true, retries: 400 }
    }

    pub fn with_max_degree(mut self, d: usize) -> Self {
        self.max_degree = Some(d);
        self
    }

    /// The mixed corpus used by the acceptance run for a given maximum degree.
    pub fn standard(max_degree: usize) -> Vec<CorpusSpec> {
        vec![
            CorpusSpec::new(Generator::Skeleton { min_vertices: 4, max_vertices: 14, max_subdivision: 3 }).with_max_degree(max_degree),
            CorpusSpec::new(Generator::Tight { min_vertices: 3, max_vertices: 10 }).with_max_degree(max_degree),
            CorpusSpec::new(Generator::Extremal { min_vertices: 4, max_vertices: 12, fork_share: 0, max_star: 3 })
                .with_max_degree(max_degree),
            CorpusSpec::new(Generator::Extremal { min_vertices: 4, max_vertices: 12, fork_share: 40, max_star: 1 })
                .with_max_degree(max_degree),
            CorpusSpec::new(Generator::Extremal { min_vertices: 4, max_vertices: 12, fork_share: 40, max_star: 2 })
                .with_max_degree(max_degree),
            CorpusSpec::new(Generator::TreeChords { min_vertices: 6, max_vertices: 30, chords: 6 }).with_max_degree(max_degree),
            CorpusSpec::new(Generator::Spider { legs: max_degree }).with_max_degree(max_degree),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
    pub index: u64,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Chi2Fact {
    Exact { value: u32 },
    Interval { lower: u32, upper: u32 },
}

impl From<&Chi2> for Chi2Fact {
    fn from(c: &Chi2) -> Self {
        match c {
            Chi2::Exact { value, .. } => Chi2Fact::Exact { value: *value },
            Chi2::Interval { lower, upper, .. } => Chi2Fact::Interval { lower: *lower, upper: *upper },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub graph6: String,
    pub provenance: Provenance,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub girth: Option<usize>,
    /// Reduced fraction `p/q`.
    pub mad: String,
    pub chi2: Option<Chi2Fact>,
    pub constructive: Option<String>,
}

impl CorpusRecord {
    pub fn from_graph(g: &Graph, provenance: Provenance) -> Self {
        let mad = if g.n() == 0 { "0".to_string() } else { format_ratio(mad_exact(g).expect("nonempty").value) };
        CorpusRecord {
            graph6: write_graph6(g),
            provenance,
            n: g.n(),
            m: g.m(),
            max_degree: g.max_degree(),
            girth: girth(g),
            mad,
            chi2: None,
            constructive: None,
        }
    }

    /// Fills in `chi2` and, for maximum degree at most 7 under the mad
    /// threshold, the constructive-coloring status.
    pub fn compute_facts(&mut self, budget: u64) -> Result<(), ParseError> {
        let g = self.graph()?;
        let mut hint = None;
        if g.max_degree() <= 7 && potential_nonnegative(&g, PotentialParams::default()) {
            let opts = ConstructiveOptions { budget, ..ConstructiveOptions::default() };
            self.constructive = Some(match constructive_color_with(&g, &opts) {
                Ok(r) if r.audit_failures.is_empty() => {
                    hint = r.coloring;
                    "valid".to_string()
                }
                Ok(r) => format!("audit: {}", r.audit_failures.join("; ")),
                Err(e) => e.to_string(),
            });
        }
        self.chi2 = Some(Chi2Fact::from(&chi2_with_hint(&g, budget, hint.as_ref())));
        Ok(())
    }

    pub fn graph(&self) -> Result<Graph, ParseError> {
        parse_graph6(&self.graph6)
    }

    pub fn file_stem(&self) -> String {
        format!("{}-{}-{:05}", self.provenance.generator, self.provenance.seed, self.provenance.index)
    }
}

pub fn format_ratio(r: Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("{generator}: no graph met the constraints in {retries} attempts (index {index})")]
    Exhausted { generator: String, retries: usize, index: u64 },
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
}

/// Independent generator for record `index` of a run seeded with `seed`.
pub fn record_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `count` records, generated in parallel; each record depends only on
/// `(seed, index)`.
pub fn generate_corpus(spec: &CorpusSpec, count: usize, seed: u64) -> Result<Vec<CorpusRecord>, CorpusError> {
    (0..count as u64)
        .into_par_iter()
        .map(|index| {
            let (g, attempts) = generate_one(spec, seed, index)?;
            let prov = Provenance { generator: spec.generator.label(), seed, index, attempts };
            Ok(CorpusRecord::from_graph(&g, prov))
        })
        .collect()
}

/// One graph meeting the spec, with the number of attempts used.
pub fn generate_one(spec: &CorpusSpec, seed: u64, index: u64) -> Result<(Graph, usize), CorpusError> {
    if let Generator::Fixture { name } = &spec.generator {
        return fixture(name).map(|g| (g, 1));
    }
    let mut rng = record_rng(seed, index);
    for attempt in 1..=spec.retries.max(1) {
        let target = spec.max_degree.unwrap_or(7);
        let g = match &spec.generator {
            Generator::Skeleton { min_vertices, max_vertices, max_subdivision } => {
                skeleton(&mut rng, *min_vertices, *max_vertices, *max_subdivision, target)
            }
            Generator::Tight { min_vertices, max_vertices } => tight(&mut rng, *min_vertices, *max_vertices, target),
            Generator::Extremal { min_vertices, max_vertices, fork_share, max_star } => {
                extremal(&mut rng, (*min_vertices, *max_vertices), *fork_share, *max_star, target)
            }
            Generator::TreeChords { min_vertices, max_vertices, chords } => {
                tree_chords(&mut rng, *min_vertices, *max_vertices, *chords, target)
            }
            Generator::SubdividedK4 { t } => crate::graph::subdivide(&fixtures::complete(4), *t),
            Generator::Spider { legs } => spider(&mut rng, *legs),
            Generator::Fixture { .. } => unreachable!("handled above"),
        };
        let degree_ok = spec.max_degree.is_none_or(|d| g.max_degree() == d);
        if degree_ok && g.n() > 0 && (!spec.mad_at_most_threshold || potential_nonnegative(&g, PotentialParams::default())) {
            return Ok((g, attempt));
        }
    }
    Err(CorpusError::Exhausted { generator: spec.generator.label(), retries: spec.retries, index })
}

pub fn fixture(name: &str) -> Result<Graph, CorpusError> {
    Ok(match name {
        "c5" => fixtures::cycle(5),
        "c9" => fixtures::cycle(9),
        "petersen" => fixtures::petersen(),
        "hoffman-singleton" => fixtures::hoffman_singleton(),
        "spider7" => fixtures::spider(7, 2),
        other => {
            if let Some(d) = other.strip_prefix("gadget").and_then(|s| s.parse().ok()) {
                fixtures::close_triangle_gadget(d)
            } else {
                return Err(CorpusError::UnknownFixture(other.to_string()));
            }
        }
    })
}

/// Path with `t` new internal vertices between `a` and `b`.
fn push_path(edges: &mut Vec<(Vertex, Vertex)>, next: &mut Vertex, a: Vertex, b: Vertex, t: usize) {
    let mut prev = a;
    for _ in 0..t {
        edges.push((prev, *next));
        prev = *next;
        *next += 1;
    }
    edges.push((prev, b));
}

fn subdivision_weights<R: Rng>(rng: &mut R, max_t: usize) -> Vec<u32> {
    (0..=max_t).map(|t| if t == 0 { rng.gen_range(0..3) } else { rng.gen_range(1..6) }).collect()
}

fn pick_weighted<R: Rng>(rng: &mut R, weights: &[u32]) -> usize {
    let total: u32 = weights.iter().sum();
    let mut x = rng.gen_range(0..total.max(1));
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

fn skeleton<R: Rng>(rng: &mut R, min_v: usize, max_v: usize, max_t: usize, delta: usize) -> Graph {
    let s = rng.gen_range(min_v.max(2)..=max_v.max(min_v.max(2)));
    let mut stubs: Vec<Vertex> = Vec::new();
    for v in 0..s {
        let d = if v == 0 || rng.gen_bool(0.35) { delta } else { rng.gen_range(3.min(delta)..=delta) };
        stubs.extend(std::iter::repeat_n(v, d));
    }
    stubs.shuffle(rng);
    let weights = subdivision_weights(rng, max_t);
    let mut edges = Vec::new();
    let mut next = s;
    let mut direct = std::collections::HashSet::new();
    for pair in stubs.chunks(2) {
        let [a, b] = pair else { continue };
        let (a, b) = (*a.min(b), *a.max(b));
        let mut t = pick_weighted(rng, &weights);
        if a == b {
            t = t.max(2);
        } else if t == 0 && !direct.insert((a, b)) {
            t = 1;
        }
        push_path(&mut edges, &mut next, a, b, t);
    }
    Graph::from_edges(next, edges).expect("parallel and loop edges are subdivided")
}

fn tight<R: Rng>(rng: &mut R, min_v: usize, max_v: usize, delta: usize) -> Graph {
    let s = rng.gen_range(min_v.max(2)..=max_v.max(min_v.max(2)));
    let mut stubs: Vec<Vertex> = Vec::new();
    for v in 0..s {
        let d = if v == 0 || rng.gen_bool(0.7) { delta } else { rng.gen_range(3.min(delta)..=delta) };
        stubs.extend(std::iter::repeat_n(v, d));
    }
    stubs.shuffle(rng);
    let weights = [rng.gen_range(0..2), rng.gen_range(0..3), rng.gen_range(4..9), rng.gen_range(1..5)];
    let mut edges = Vec::new();
    let mut next = s;
    let mut direct = std::collections::HashSet::new();
    for pair in stubs.chunks(2) {
        let [a, b] = pair else { continue };
        let (a, b) = (*a.min(b), *a.max(b));
        let mut t = pick_weighted(rng, &weights);
        if a == b {
            t = t.max(2);
        } else if t == 0 && !direct.insert((a, b)) {
            t = 1;
        }
        push_path(&mut edges, &mut next, a, b, t);
    }
    Graph::from_edges(next, edges).expect("parallel and loop edges are subdivided")
}

/// Forest of 3-paths that stays a union of stars.
struct StarForest {
    count: Vec<usize>,
    partner: Vec<Vertex>,
}

impl StarForest {
    fn allows(&self, a: Vertex, b: Vertex, max_star: usize) -> bool {
        let ok = |x: Vertex, leaf: Vertex| {
            self.count[leaf] == 0
                && self.count[x] < max_star
                && (self.count[x] != 1 || self.count[self.partner[x]] == 1)
        };
        a != b && (ok(a, b) || ok(b, a))
    }

    fn add(&mut self, a: Vertex, b: Vertex) {
        self.count[a] += 1;
        self.count[b] += 1;
        self.partner[a] = b;
        self.partner[b] = a;
    }
}

/// Forks are 3-vertices with one direct edge to a maximum-degree vertex
/// and 2-paths elsewhere.
fn extremal<R: Rng>(rng: &mut R, size: (usize, usize), fork_share: u8, max_star: usize, delta: usize) -> Graph {
    let s = rng.gen_range(size.0.max(2)..=size.1.max(size.0.max(2)));
    let mut degree = vec![delta; s];
    for d in degree.iter_mut().skip(1) {
        if rng.gen_range(0..100) < fork_share {
            *d = 3;
        }
    }
    if degree.iter().sum::<usize>() % 2 == 1 {
        degree.push(delta);
    }
    let s = degree.len();
    let mut stubs: Vec<Vertex> = (0..s).flat_map(|v| std::iter::repeat_n(v, degree[v])).collect();
    stubs.shuffle(rng);
    // Break up loops and fork pairs by swapping with random stubs.
    let bad = |a: Vertex, b: Vertex| a == b || degree[a] + degree[b] == 6;
    for _ in 0..4 * stubs.len() {
        let Some(i) = (0..stubs.len() / 2).find(|&i| bad(stubs[2 * i], stubs[2 * i + 1])) else { break };
        let j = rng.gen_range(0..stubs.len());
        stubs.swap(2 * i, j);
    }
    let three_share = rng.gen_range(0.3..0.9);
    let mut forest = StarForest { count: vec![0; s], partner: vec![0; s] };
    let pairs: Vec<(Vertex, Vertex)> =
        stubs.chunks(2).filter_map(|p| match p { [a, b] => Some((*a.min(b), *a.max(b))), _ => None }).collect();
    // Each fork takes its direct edge to a partner it meets only once, so
    // no 2-path doubles the edge.
    let mut direct = std::collections::HashSet::new();
    for f in (0..s).filter(|&f| degree[f] == 3) {
        let partners: Vec<Vertex> =
            pairs.iter().filter_map(|&(a, b)| if a == f { Some(b) } else if b == f { Some(a) } else { None }).collect();
        let once = partners.iter().find(|&&x| degree[x] == delta && partners.iter().filter(|&&y| y == x).count() == 1);
        if let Some(&x) = once {
            direct.insert((f.min(x), f.max(x)));
        }
    }
    let mut edges = Vec::new();
    let mut next = s;
    for &(a, b) in &pairs {
        let (da, db) = (degree[a], degree[b]);
        let t = if a == b {
            2
        } else if direct.contains(&(a, b)) {
            0
        } else if da == delta && db == delta && rng.gen_bool(three_share) && forest.allows(a, b, max_star) {
            forest.add(a, b);
            3
        } else if da == delta && db == delta && rng.gen_bool(0.1) {
            1
        } else {
            2
        };
        push_path(&mut edges, &mut next, a, b, t);
    }
    Graph::from_edges(next, edges).expect("paths through fresh vertices keep it simple")
}

fn tree_chords<R: Rng>(rng: &mut R, min_v: usize, max_v: usize, chords: usize, delta: usize) -> Graph {
    let s = rng.gen_range(min_v.max(2)..=max_v.max(min_v.max(2)));
    let mut deg = vec![0usize; s];
    let mut tree = Vec::new();
    for v in 1..s {
        // Vertex 0 is filled first so some vertex reaches the target degree.
        let parent = if deg[0] < delta - 1 && rng.gen_bool(0.5) {
            0
        } else {
            let open: Vec<Vertex> = (0..v).filter(|&u| deg[u] < delta - 1).collect();
            *open.choose(rng).unwrap_or(&0)
        };
        deg[parent] += 1;
        deg[v] += 1;
        tree.push((parent, v));
    }
    let weights = subdivision_weights(rng, 3);
    let mut edges = Vec::new();
    let mut next = s;
    for (a, b) in tree {
        let t = pick_weighted(rng, &weights);
        push_path(&mut edges, &mut next, a, b, t);
    }
    let chord_count = rng.gen_range(0..=chords);
    for _ in 0..chord_count {
        let a = rng.gen_range(0..s);
        let b = rng.gen_range(0..s);
        if a == b || deg[a] >= delta || deg[b] >= delta {
            continue;
        }
        deg[a] += 1;
        deg[b] += 1;
        let t = rng.gen_range(1..=4);
        push_path(&mut edges, &mut next, a, b, t);
    }
    // Pendant paths top up some vertices, vertex 0 to exactly the target.
    for (v, d) in deg.iter_mut().enumerate().take(s) {
        let want = if v == 0 { delta } else { rng.gen_range(*d..=delta.min(*d + 2)) };
        while *d < want {
            *d += 1;
            let len = rng.gen_range(1..=3);
            let mut prev = v;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
    }
    Graph::from_edges(next, edges).expect("tree plus fresh paths is simple")
}

/// A hub with `legs` 2- or 3-paths to outer vertices, which are then tied
/// into a cycle through further short paths.
fn spider<R: Rng>(rng: &mut R, legs: usize) -> Graph {
    let mut edges = Vec::new();
    let mut next = 1 + legs;
    for i in 0..legs {
        let t = rng.gen_range(1..=3);
        push_path(&mut edges, &mut next, 0, 1 + i, t);
    }
    for i in 0..legs {
        if rng.gen_bool(0.7) {
            let j = (i + 1) % legs;
            let t = rng.gen_range(1..=3);
            push_path(&mut edges, &mut next, 1 + i, 1 + j, t);
        }
    }
    Graph::from_edges(next, edges).expect("fresh internal vertices keep it simple")
}

/// Writes `dir/<stem>.g6` and `dir/<stem>.json` for each record.
pub fn persist(dir: &Path, records: &[CorpusRecord]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for r in records {
        let stem = r.file_stem();
        fs::write(dir.join(format!("{stem}.g6")), format!("{}\n", r.graph6))?;
        let json = serde_json::to_string_pretty(r).expect("record serializes");
        fs::write(dir.join(format!("{stem}.json")), json + "\n")?;
    }
    Ok(())
}
