//! Simple undirected graphs, vertex sets, and the path/run structure of
//! degree-2 vertices.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {0}-{1} not present")]
    MissingEdge(Vertex, Vertex),
    #[error("vertex set over {set} vertices used with graph on {graph} vertices")]
    UniverseMismatch { set: usize, graph: usize },
}

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
///
/// Immutable once built; every "mutation" returns a fresh graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n(), self.m, self.edge_list())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Graph { adj, m })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// `|V| + |E|`, the size measure that every reduction strictly decreases.
    pub fn size(&self) -> usize {
        self.n() + self.m
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_list(&self) -> Vec<(Vertex, Vertex)> {
        self.edges().collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        if set.universe() == self.n() {
            Ok(())
        } else {
            Err(GraphError::UniverseMismatch { set: set.universe(), graph: self.n() })
        }
    }

    /// Number of edges with both endpoints in `set`.
    pub fn induced_edge_count(&self, set: &VertexSet) -> usize {
        let mask = set.to_mask();
        set.iter()
            .map(|u| self.adj[u].iter().filter(|&&v| v > u && mask[v]).count())
            .sum()
    }

    /// Number of edges with one endpoint in `a` and the other in `b`
    /// (the sets are expected to be disjoint).
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        let mask = b.to_mask();
        a.iter().map(|u| self.adj[u].iter().filter(|&&v| mask[v]).count()).sum()
    }

    /// Deletes `removed` and renumbers the survivors in increasing order.
    /// Returns the new graph and the old-to-new id map.
    pub fn remove_vertices(&self, removed: &[Vertex]) -> (Graph, Vec<Option<Vertex>>) {
        let mut gone = vec![false; self.n()];
        for &v in removed {
            gone[v] = true;
        }
        let mut map = vec![None; self.n()];
        let mut next = 0;
        for v in self.vertices() {
            if !gone[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut adj = vec![Vec::new(); next];
        let mut m = 0;
        for u in self.vertices() {
            if let Some(nu) = map[u] {
                for &v in &self.adj[u] {
                    if let Some(nv) = map[v] {
                        adj[nu].push(nv);
                        if nv > nu {
                            m += 1;
                        }
                    }
                }
            }
        }
        (Graph { adj, m }, map)
    }

    /// Induced subgraph on `keep` (any order); returns the graph and the
    /// new-to-old id map, which is `keep` sorted.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut kept = vec![false; self.n()];
        for &v in keep {
            kept[v] = true;
        }
        let removed: Vec<Vertex> = self.vertices().filter(|&v| !kept[v]).collect();
        let (h, _) = self.remove_vertices(&removed);
        let back: Vec<Vertex> = self.vertices().filter(|&v| kept[v]).collect();
        (h, back)
    }

    pub fn without_edges(&self, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut adj = self.adj.clone();
        for &(u, v) in edges {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
            let pu = adj[u].binary_search(&v).map_err(|_| GraphError::MissingEdge(u, v))?;
            adj[u].remove(pu);
            let pv = adj[v].binary_search(&u).map_err(|_| GraphError::MissingEdge(u, v))?;
            adj[v].remove(pv);
        }
        Ok(Graph { adj, m: self.m - edges.len() })
    }

    /// Appends `count` isolated vertices with ids `n..n+count`.
    pub fn with_new_vertices(&self, count: usize) -> Graph {
        let mut adj = self.adj.clone();
        adj.extend(std::iter::repeat_with(Vec::new).take(count));
        Graph { adj, m: self.m }
    }

    pub fn with_edges(&self, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        Graph::from_edges(self.n(), self.edges().chain(edges.iter().copied()))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// BFS distances from `s`, `usize::MAX` for unreachable vertices.
    pub fn bfs_distances(&self, s: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

/// A subset of `0..universe`, kept as a sorted list of members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    universe: usize,
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet { universe, members: Vec::new() }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet { universe, members: (0..universe).collect() }
    }

    pub fn from_slice(universe: usize, members: &[Vertex]) -> Result<Self, GraphError> {
        if let Some(&v) = members.iter().find(|&&v| v >= universe) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: universe });
        }
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        Ok(VertexSet { universe, members })
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet {
            universe: mask.len(),
            members: mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    pub fn to_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }

    pub fn insert(&mut self, v: Vertex) -> Result<bool, GraphError> {
        if v >= self.universe {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.universe });
        }
        match self.members.binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.members.insert(pos, v);
                Ok(true)
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut members: Vec<Vertex> = self.members.iter().chain(&other.members).copied().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { universe: self.universe.max(other.universe), members }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            universe: self.universe,
            members: self.members.iter().copied().filter(|&v| other.contains(v)).collect(),
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            universe: self.universe,
            members: self.members.iter().copied().filter(|&v| !other.contains(v)).collect(),
        }
    }

    pub fn complement(&self) -> VertexSet {
        let mask = self.to_mask();
        VertexSet {
            universe: self.universe,
            members: (0..self.universe).filter(|&v| !mask[v]).collect(),
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    /// Re-express the set in another graph through an id map (`None` drops
    /// the vertex).
    pub fn mapped(&self, map: &[Option<Vertex>], universe: usize) -> VertexSet {
        let mut members: Vec<Vertex> = self.members.iter().filter_map(|&v| map[v]).collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { universe, members }
    }
}

/// A maximal run of degree-2 vertices `u - internal... - v`.
///
/// For open runs `u <= v`; a run that leaves and returns to the same vertex
/// has `u == v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathDescriptor {
    pub u: Vertex,
    pub v: Vertex,
    pub internal: Vec<Vertex>,
}

impl PathDescriptor {
    pub fn k(&self) -> usize {
        self.internal.len()
    }

    pub fn is_closed(&self) -> bool {
        self.u == self.v
    }

    /// Runs of four or more 2-vertices are only ever compared against the
    /// threshold.
    pub fn is_four_plus(&self) -> bool {
        self.k() >= 4
    }

    pub fn length_label(&self) -> String {
        if self.is_four_plus() {
            "4+".to_string()
        } else {
            self.k().to_string()
        }
    }

    /// Same run, listed from the other end.
    pub fn reversed(&self) -> PathDescriptor {
        let mut internal = self.internal.clone();
        internal.reverse();
        PathDescriptor { u: self.v, v: self.u, internal }
    }

    /// Oriented so that `u == start`. Panics if `start` is not an endpoint.
    pub fn from_end(&self, start: Vertex) -> PathDescriptor {
        if self.u == start {
            self.clone()
        } else {
            assert_eq!(self.v, start, "vertex {start} is not an endpoint");
            self.reversed()
        }
    }

    pub fn other_end(&self, end: Vertex) -> Vertex {
        if self.u == end {
            self.v
        } else {
            self.u
        }
    }

    /// Checks the path against the host graph: internal vertices have degree
    /// exactly two and consecutive listed vertices are adjacent.
    pub fn validate(&self, g: &Graph) -> bool {
        let mut seq = Vec::with_capacity(self.k() + 2);
        seq.push(self.u);
        seq.extend(&self.internal);
        seq.push(self.v);
        if seq.iter().any(|&x| x >= g.n()) {
            return false;
        }
        self.internal.iter().all(|&x| g.degree(x) == 2)
            && seq.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

/// The run of 2-vertices entered from `start` through its neighbor `first`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidentRun {
    pub start: Vertex,
    pub first: Vertex,
    pub internal: Vec<Vertex>,
    /// First vertex of degree other than two reached, or `start` itself when
    /// the walk closes up.
    pub end: Vertex,
}

impl IncidentRun {
    pub fn k(&self) -> usize {
        self.internal.len()
    }

    pub fn is_closed(&self) -> bool {
        self.end == self.start
    }

    pub fn descriptor(&self) -> PathDescriptor {
        PathDescriptor { u: self.start, v: self.end, internal: self.internal.clone() }
    }
}

/// Walks from `start` into `first` and keeps going while the current vertex
/// has degree two.
pub fn walk_run(g: &Graph, start: Vertex, first: Vertex) -> IncidentRun {
    let mut internal = Vec::new();
    let mut prev = start;
    let mut cur = first;
    while cur != start && g.degree(cur) == 2 && internal.len() <= g.n() {
        internal.push(cur);
        let nb = g.neighbors(cur);
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    IncidentRun { start, first, internal, end: cur }
}

/// One run per incident edge of `v`, in neighbor order.
pub fn incident_runs(g: &Graph, v: Vertex) -> Vec<IncidentRun> {
    g.neighbors(v).iter().map(|&w| walk_run(g, v, w)).collect()
}

/// Degree plus the lengths of the runs of 2-vertices leaving `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSignature {
    pub degree: usize,
    /// Run lengths, sorted in descending order.
    pub lengths: Vec<usize>,
    /// Some walk came back to `v`.
    pub closed_walk: bool,
    /// Some run has four or more 2-vertices.
    pub four_plus: bool,
}

impl VertexSignature {
    /// True when the signature is exactly `pattern` (given in any order).
    pub fn is(&self, pattern: &[usize]) -> bool {
        let mut p = pattern.to_vec();
        p.sort_unstable_by(|a, b| b.cmp(a));
        !self.closed_walk && self.lengths == p
    }
}

impl fmt::Display for VertexSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))?;
        if self.closed_walk {
            write!(f, "[closed]")?;
        }
        Ok(())
    }
}

pub fn vertex_signature(g: &Graph, v: Vertex) -> VertexSignature {
    let runs = incident_runs(g, v);
    let mut lengths: Vec<usize> = runs.iter().map(IncidentRun::k).collect();
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    VertexSignature {
        degree: g.degree(v),
        four_plus: lengths.iter().any(|&k| k >= 4),
        closed_walk: runs.iter().any(|r| r.k() > 0 && r.is_closed()),
        lengths,
    }
}

/// Every maximal run of at least one 2-vertex whose ends have degree other
/// than two, each reported once in canonical orientation.
pub fn all_runs(g: &Graph) -> Vec<PathDescriptor> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for v in g.vertices() {
        if g.degree(v) == 2 {
            continue;
        }
        for &w in g.neighbors(v) {
            if g.degree(w) != 2 || seen[w] {
                continue;
            }
            let run = walk_run(g, v, w);
            for &x in &run.internal {
                seen[x] = true;
            }
            out.push(canonical(run.descriptor()));
        }
    }
    out.sort_by(|a, b| (a.u, a.v, &a.internal).cmp(&(b.u, b.v, &b.internal)));
    out
}

fn canonical(p: PathDescriptor) -> PathDescriptor {
    if p.u > p.v || (p.u == p.v && p.internal.first() > p.internal.last()) {
        p.reversed()
    } else {
        p
    }
}

/// Runs with exactly `k` internal 2-vertices. For `k = 0` these are the
/// edges joining two vertices of degree other than two.
pub fn find_k_paths(g: &Graph, k: usize) -> Vec<PathDescriptor> {
    if k == 0 {
        return g
            .edges()
            .filter(|&(u, v)| g.degree(u) != 2 && g.degree(v) != 2)
            .map(|(u, v)| PathDescriptor { u, v, internal: Vec::new() })
            .collect();
    }
    all_runs(g).into_iter().filter(|p| p.k() == k).collect()
}

/// How a connected component is shaped with respect to 2-vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    /// Every vertex has degree two.
    PureCycle,
    General,
}

pub fn component_kind(g: &Graph, component: &[Vertex]) -> ComponentKind {
    if !component.is_empty() && component.iter().all(|&v| g.degree(v) == 2) {
        ComponentKind::PureCycle
    } else {
        ComponentKind::General
    }
}

/// Components consisting only of 2-vertices.
pub fn cycle_components(g: &Graph) -> Vec<Vec<Vertex>> {
    g.components()
        .into_iter()
        .filter(|c| component_kind(g, c) == ComponentKind::PureCycle)
        .collect()
}

pub fn two_distance_neighborhood(g: &Graph, v: Vertex) -> VertexSet {
    let mut members = Vec::new();
    for &w in g.neighbors(v) {
        members.push(w);
        members.extend(g.neighbors(w).iter().copied().filter(|&x| x != v));
    }
    members.sort_unstable();
    members.dedup();
    VertexSet { universe: g.n(), members }
}

/// `|N*(v)|`, the number of vertices at distance one or two.
pub fn d_star(g: &Graph, v: Vertex) -> usize {
    two_distance_neighborhood(g, v).len()
}

/// The square: same vertices, `u ~ v` iff `1 <= dist(u, v) <= 2`.
pub fn square(g: &Graph) -> Graph {
    let adj: Vec<Vec<Vertex>> = g.vertices().map(|v| two_distance_neighborhood(g, v).members).collect();
    let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
    Graph { adj, m }
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; g.n()];
    let mut parent = vec![usize::MAX; g.n()];
    for s in g.vertices() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[x] + 1 >= b {
                    break;
                }
            }
            for &y in g.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = dist[x] + dist[y] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Replaces every edge by a path with `t` new internal vertices.
/// New vertices for edge `i` (in `edges()` order) are `n + i*t .. n + (i+1)*t`.
pub fn subdivide(g: &Graph, t: usize) -> Graph {
    let n = g.n();
    let mut edges = Vec::with_capacity(g.m() * (t + 1));
    for (i, (u, v)) in g.edges().enumerate() {
        let mut prev = u;
        for j in 0..t {
            let x = n + i * t + j;
            edges.push((prev, x));
            prev = x;
        }
        edges.push((prev, v));
    }
    Graph::from_edges(n + t * g.m(), edges).expect("subdivision of a simple graph is simple")
}

/// `(mad - 2)(g - 2) < 4`, evaluated exactly.
pub fn check_girth_mad_bound(mad: Ratio<i64>, girth: usize) -> bool {
    (mad - Ratio::from_integer(2)) * Ratio::from_integer(girth as i64 - 2) < Ratio::from_integer(4)
}
