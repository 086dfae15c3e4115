//! 2-distance colorings: validity, exact search on the square, and list
//! extension of partial colorings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{square, two_distance_neighborhood, Graph, Vertex};
use crate::matching::hopcroft_karp;

pub type Color = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring covers {got} vertices, graph has {want}")]
    WrongSize { got: usize, want: usize },
    #[error("vertex {0} is uncolored")]
    Partial(Vertex),
    #[error("vertex {vertex} has color {color} outside 1..={k}")]
    OutOfPalette { vertex: Vertex, color: Color, k: u32 },
}

/// Partial map from vertices to colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    pub k: u32,
    pub colors: Vec<Option<Color>>,
}

impl Coloring {
    pub fn empty(n: usize, k: u32) -> Self {
        Coloring { k, colors: vec![None; n] }
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.colors[v]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        debug_assert!((1..=self.k).contains(&c));
        self.colors[v] = Some(c);
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    /// Number of distinct colors in use.
    pub fn used(&self) -> usize {
        let mut seen: Vec<Color> = self.colors.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Colors of already-colored vertices at distance one or two from `v`.
    pub fn seen_by(&self, g: &Graph, v: Vertex) -> Vec<Color> {
        let mut out = Vec::new();
        for &w in g.neighbors(v) {
            out.extend(self.colors[w]);
            for &x in g.neighbors(w) {
                if x != v {
                    out.extend(self.colors[x]);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Palette colors not seen by `v`.
    pub fn available(&self, g: &Graph, v: Vertex) -> Vec<Color> {
        let seen = self.seen_by(g, v);
        (1..=self.k).filter(|c| seen.binary_search(c).is_err()).collect()
    }

    /// Total coloring as plain 1-based colors.
    pub fn to_vec(&self) -> Option<Vec<Color>> {
        self.colors.iter().copied().collect()
    }
}

/// Two vertices at distance `distance` sharing a color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub u: Vertex,
    pub v: Vertex,
    pub distance: usize,
    pub color: Color,
}

/// `Ok(None)` when the total coloring is a valid 2-distance coloring,
/// `Ok(Some(_))` with the first conflicting pair otherwise.
pub fn is_valid_2distance(g: &Graph, c: &Coloring) -> Result<Option<Violation>, ColoringError> {
    if c.colors.len() != g.n() {
        return Err(ColoringError::WrongSize { got: c.colors.len(), want: g.n() });
    }
    for v in g.vertices() {
        let color = c.colors[v].ok_or(ColoringError::Partial(v))?;
        if !(1..=c.k).contains(&color) {
            return Err(ColoringError::OutOfPalette { vertex: v, color, k: c.k });
        }
    }
    let col = |v: Vertex| c.colors[v].expect("checked total");
    for v in g.vertices() {
        let nb = g.neighbors(v);
        for (i, &a) in nb.iter().enumerate() {
            if col(a) == col(v) {
                return Ok(Some(Violation { u: v.min(a), v: v.max(a), distance: 1, color: col(v) }));
            }
            for &b in &nb[i + 1..] {
                if col(a) == col(b) && !g.has_edge(a, b) {
                    return Ok(Some(Violation { u: a, v: b, distance: 2, color: col(a) }));
                }
            }
        }
    }
    Ok(None)
}

/// Result of a budgeted decision search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Colored(Coloring),
    /// The search space was exhausted: no coloring exists.
    Impossible,
    BudgetExhausted,
}

/// DSATUR backtracking on a conflict graph (the square), optionally
/// starting from a partial coloring which is kept fixed.
struct Dsatur<'a> {
    conflict: &'a Graph,
    k: usize,
    color: Vec<Option<usize>>,
    /// `count[v * k + c]`: colored conflict-neighbours of `v` with color `c`.
    count: Vec<u32>,
    sat: Vec<usize>,
    per_color: Vec<usize>,
    symmetry: bool,
}

impl<'a> Dsatur<'a> {
    fn new(conflict: &'a Graph, k: usize, fixed: &[Option<usize>]) -> Option<Self> {
        let n = conflict.n();
        let mut s = Dsatur {
            conflict,
            k,
            color: vec![None; n],
            count: vec![0; n * k],
            sat: vec![0; n],
            per_color: vec![0; k],
            symmetry: fixed.iter().all(Option::is_none),
        };
        for (v, c) in fixed.iter().enumerate() {
            if let Some(c) = *c {
                if c >= k || s.count[v * k + c] > 0 {
                    return None;
                }
                s.assign(v, c);
            }
        }
        Some(s)
    }

    /// No symmetry breaking; `forbidden[v]` lists colors `v` must avoid.
    fn with_forbidden(conflict: &'a Graph, k: usize, forbidden: &[Vec<usize>]) -> Option<Self> {
        let mut s = Self::new(conflict, k, &[])?;
        s.symmetry = false;
        for (v, cs) in forbidden.iter().enumerate() {
            for &c in cs {
                if c < k && s.count[v * k + c] == 0 {
                    s.count[v * k + c] = 1;
                    s.sat[v] += 1;
                }
            }
        }
        Some(s)
    }

    fn assign(&mut self, v: Vertex, c: usize) {
        self.color[v] = Some(c);
        self.per_color[c] += 1;
        for &w in self.conflict.neighbors(v) {
            let slot = &mut self.count[w * self.k + c];
            if *slot == 0 {
                self.sat[w] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: Vertex) {
        let c = self.color[v].take().expect("vertex was colored");
        self.per_color[c] -= 1;
        for &w in self.conflict.neighbors(v) {
            let slot = &mut self.count[w * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[w] -= 1;
            }
        }
    }

    fn pick(&self) -> Option<Vertex> {
        let mut best: Option<(usize, usize, Vertex)> = None;
        for v in self.conflict.vertices() {
            if self.color[v].is_some() {
                continue;
            }
            let key = (self.sat[v], self.conflict.degree(v));
            if best.is_none_or(|(s, d, _)| key > (s, d)) {
                best = Some((key.0, key.1, v));
            }
        }
        best.map(|b| b.2)
    }

    fn color_limit(&self) -> usize {
        if !self.symmetry {
            return self.k;
        }
        let top = self.per_color.iter().rposition(|&x| x > 0).map_or(0, |c| c + 1);
        (top + 1).min(self.k)
    }

    fn next_color(&self, v: Vertex, from: usize) -> Option<usize> {
        (from..self.color_limit()).find(|&c| self.count[v * self.k + c] == 0)
    }

    /// Exhaustive search; `budget` counts color assignments.
    fn run(&mut self, budget: &mut u64) -> SearchOutcome {
        let mut stack: Vec<(Vertex, usize)> = Vec::new();
        'descend: loop {
            let Some(v) = self.pick() else {
                let colors = self.color.iter().map(|c| c.map(|c| c as Color + 1)).collect();
                return SearchOutcome::Colored(Coloring { k: self.k as u32, colors });
            };
            let mut frame = (v, 0);
            loop {
                if let Some(c) = self.next_color(frame.0, frame.1) {
                    if *budget == 0 {
                        return SearchOutcome::BudgetExhausted;
                    }
                    *budget -= 1;
                    self.assign(frame.0, c);
                    stack.push((frame.0, c + 1));
                    continue 'descend;
                }
                match stack.pop() {
                    None => return SearchOutcome::Impossible,
                    Some(prev) => {
                        self.unassign(prev.0);
                        frame = prev;
                    }
                }
            }
        }
    }
}

fn search(conflict: &Graph, k: usize, fixed: &[Option<usize>], budget: &mut u64) -> SearchOutcome {
    if k == 0 {
        return if conflict.n() == 0 {
            SearchOutcome::Colored(Coloring::empty(0, 0))
        } else {
            SearchOutcome::Impossible
        };
    }
    match Dsatur::new(conflict, k, fixed) {
        None => SearchOutcome::Impossible,
        Some(mut s) => s.run(budget),
    }
}

/// Decision version: a valid 2-distance coloring with at most `k` colors,
/// or a proof that none exists within `budget` assignments.
pub fn color_2distance(g: &Graph, k: u32, budget: u64) -> SearchOutcome {
    let sq = square(g);
    let mut budget = budget;
    search(&sq, k as usize, &vec![None; g.n()], &mut budget)
}

/// Extends `partial` (valid on its domain) to all vertices by exact search;
/// colored vertices keep their colors. Only the uncolored vertices enter
/// the search, each starting with the colors it already sees forbidden.
pub fn extend_exact(g: &Graph, partial: &Coloring, budget: u64) -> SearchOutcome {
    let free: Vec<Vertex> = g.vertices().filter(|&v| partial.colors[v].is_none()).collect();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in free.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    let mut forbidden = Vec::with_capacity(free.len());
    for (i, &v) in free.iter().enumerate() {
        for w in two_distance_neighborhood(g, v).iter() {
            if local[w] != usize::MAX && local[w] > i {
                edges.push((i, local[w]));
            }
        }
        forbidden.push(partial.seen_by(g, v).into_iter().map(|c| c as usize - 1).collect::<Vec<_>>());
    }
    let conflict = Graph::from_edges(free.len(), edges).expect("distance-2 pairs are simple");
    let mut budget = budget;
    let k = partial.k as usize;
    let outcome = match Dsatur::with_forbidden(&conflict, k, &forbidden) {
        None => SearchOutcome::Impossible,
        Some(mut s) => s.run(&mut budget),
    };
    match outcome {
        SearchOutcome::Colored(local_colors) => {
            let mut out = partial.clone();
            for (i, &v) in free.iter().enumerate() {
                out.colors[v] = local_colors.colors[i];
            }
            SearchOutcome::Colored(out)
        }
        other => other,
    }
}

/// Greedy clique in the conflict graph, grown from every vertex.
fn clique_lower_bound(conflict: &Graph) -> usize {
    let mut best = usize::from(conflict.n() > 0);
    for v in conflict.vertices() {
        if conflict.degree(v) < best {
            continue;
        }
        let mut cand: Vec<Vertex> = conflict.neighbors(v).to_vec();
        cand.sort_by_key(|&w| std::cmp::Reverse(conflict.degree(w)));
        let mut clique = vec![v];
        for w in cand {
            if clique.iter().all(|&x| conflict.has_edge(x, w)) {
                clique.push(w);
            }
        }
        best = best.max(clique.len());
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chi2 {
    Exact { value: u32, witness: Coloring },
    /// Budget ran out; `lower <= chi2 <= upper` and `witness` uses `upper` colors.
    Interval { lower: u32, upper: u32, witness: Coloring },
}

impl Chi2 {
    pub fn exact(&self) -> Option<u32> {
        match self {
            Chi2::Exact { value, .. } => Some(*value),
            Chi2::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (u32, u32) {
        match self {
            Chi2::Exact { value, .. } => (*value, *value),
            Chi2::Interval { lower, upper, .. } => (*lower, *upper),
        }
    }

    pub fn witness(&self) -> &Coloring {
        match self {
            Chi2::Exact { witness, .. } | Chi2::Interval { witness, .. } => witness,
        }
    }
}

/// Chromatic number of the square: clique lower bound, greedy upper bound,
/// then exact decisions upward from the lower bound.
pub fn chi2_exact(g: &Graph, budget: u64) -> Chi2 {
    chi2_with_hint(g, budget, None)
}

/// As [`chi2_exact`], with an optional known valid coloring that caps the
/// upper bound.
pub fn chi2_with_hint(g: &Graph, budget: u64, hint: Option<&Coloring>) -> Chi2 {
    let sq = square(g);
    let n = g.n();
    let lower = clique_lower_bound(&sq) as u32;
    let mut budget_left = budget;
    let greedy = {
        // One DSATUR pass with an ample palette never backtracks.
        let mut free = u64::MAX;
        match search(&sq, sq.max_degree() + 1, &vec![None; n], &mut free) {
            SearchOutcome::Colored(c) => compact(c),
            _ => unreachable!("max degree + 1 colors always suffice"),
        }
    };
    let mut best = greedy;
    if let Some(h) = hint {
        if h.is_total() && (h.used() as u32) < best.k && is_valid_2distance(g, h) == Ok(None) {
            best = compact(h.clone());
        }
    }
    let mut k = lower;
    while k < best.k {
        match search(&sq, k as usize, &vec![None; n], &mut budget_left) {
            SearchOutcome::Colored(c) => {
                return Chi2::Exact { value: k, witness: c };
            }
            SearchOutcome::Impossible => k += 1,
            SearchOutcome::BudgetExhausted => {
                return Chi2::Interval { lower: k, upper: best.k, witness: best };
            }
        }
    }
    Chi2::Exact { value: best.k, witness: best }
}

/// Renumbers colors to `1..=used` and sets `k = used`.
fn compact(c: Coloring) -> Coloring {
    let mut map = std::collections::BTreeMap::new();
    for col in c.colors.iter().flatten() {
        let next = map.len() as Color + 1;
        map.entry(*col).or_insert(next);
    }
    let k = map.len() as u32;
    Coloring { k, colors: c.colors.iter().map(|x| x.map(|x| map[&x])).collect() }
}

/// A system of distinct representatives for `lists`, if one exists.
pub fn sdr(lists: &[Vec<Color>]) -> Option<Vec<Color>> {
    let mut palette: Vec<Color> = lists.iter().flatten().copied().collect();
    palette.sort_unstable();
    palette.dedup();
    let adj: Vec<Vec<usize>> = lists
        .iter()
        .map(|l| l.iter().map(|c| palette.binary_search(c).expect("color in palette")).collect())
        .collect();
    let mate = hopcroft_karp(&adj, palette.len());
    mate.into_iter().map(|m| m.map(|r| palette[r])).collect()
}

/// Hall's condition for lists of mutually conflicting vertices, decided by
/// bipartite matching.
pub fn hall_check(lists: &[Vec<Color>]) -> bool {
    sdr(lists).is_some()
}

/// Exhaustive Hall condition: every subfamily's union is at least as large
/// as the subfamily. Exponential; for testing.
pub fn hall_check_bruteforce(lists: &[Vec<Color>]) -> bool {
    let l = lists.len();
    assert!(l <= 20, "too many lists for exhaustive check");
    (1u32..(1 << l)).all(|mask| {
        let mut union: Vec<Color> = (0..l).filter(|i| mask >> i & 1 == 1).flat_map(|i| lists[i].iter().copied()).collect();
        union.sort_unstable();
        union.dedup();
        union.len() >= mask.count_ones() as usize
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtendMode {
    /// Color targets one by one in the given order.
    Greedy,
    /// Color all targets at once through a system of distinct representatives.
    Simultaneous,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("vertex {vertex} cannot be colored: sees {seen:?} out of {k} colors")]
pub struct ExtendFailure {
    pub vertex: Vertex,
    pub seen: Vec<Color>,
    pub k: u32,
}

/// Colors `targets` on top of `partial`, each avoiding everything it sees.
pub fn list_extend(g: &Graph, partial: &Coloring, targets: &[Vertex], mode: ExtendMode) -> Result<Coloring, ExtendFailure> {
    let mut c = partial.clone();
    match mode {
        ExtendMode::Greedy => {
            for &v in targets {
                match c.available(g, v).first() {
                    Some(&col) => c.set(v, col),
                    None => return Err(ExtendFailure { vertex: v, seen: c.seen_by(g, v), k: c.k }),
                }
            }
        }
        ExtendMode::Simultaneous => {
            let lists: Vec<Vec<Color>> = targets.iter().map(|&v| c.available(g, v)).collect();
            if let Some(i) = lists.iter().position(Vec::is_empty) {
                return Err(ExtendFailure { vertex: targets[i], seen: c.seen_by(g, targets[i]), k: c.k });
            }
            let Some(pick) = sdr(&lists) else {
                let v = targets[0];
                return Err(ExtendFailure { vertex: v, seen: c.seen_by(g, v), k: c.k });
            };
            for (&v, col) in targets.iter().zip(pick) {
                c.set(v, col);
            }
        }
    }
    Ok(c)
}
