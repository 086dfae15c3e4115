//! One detector per configuration kind, run in dispatch order.

use thiserror::Error;

use super::{Addition, ConfigKind, Configuration, Pin, PinSource, PotentialQuery, Recipe, DELTA};
use crate::graph::{all_runs, cycle_components, d_star, incident_runs, two_distance_neighborhood, Graph, IncidentRun, PathDescriptor, Vertex};
use crate::potential::PotentialParams;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("detectors are written for the potential (9, 7), got ({0}, {1})")]
    Params(i64, i64),
}

/// First configuration in dispatch order, or `None`.
pub fn detect_configuration(g: &Graph) -> Option<Configuration> {
    detect_with(g, &ConfigKind::DISPATCH)
}

pub fn detect_with_params(g: &Graph, params: PotentialParams) -> Result<Option<Configuration>, DetectError> {
    if !params.is_default() {
        return Err(DetectError::Params(params.vertex, params.edge));
    }
    Ok(detect_configuration(g))
}

/// Runs only the detectors in `enabled`, still in dispatch order.
pub fn detect_with(g: &Graph, enabled: &[ConfigKind]) -> Option<Configuration> {
    let ctx = Ctx::new(g);
    ConfigKind::DISPATCH.into_iter().filter(|k| enabled.contains(k)).find_map(|k| ctx.detect(k))
}

struct Ctx<'a> {
    g: &'a Graph,
    /// Incident runs of every vertex of degree other than two.
    runs: Vec<Vec<IncidentRun>>,
    paths: Vec<PathDescriptor>,
    dstar: Vec<usize>,
    /// Vertices of components made only of 2-vertices; those are base cases.
    on_cycle: Vec<bool>,
}

/// A neighbor of a sponsor candidate, by shape.
enum Shape<'r> {
    /// First vertex of a 2-path; the run leads to the far end.
    Bridge(&'r IncidentRun),
    /// A (2,2,0)-vertex with the first vertices of its two 2-paths.
    Fork { w: Vertex, r: Vertex, s: Vertex },
    Other(Vertex),
}

fn counting(tag: &str, w: Vertex, us: &[Vertex]) -> Recipe {
    let mut r = Recipe::new(tag);
    r.remove_edges = us.iter().map(|&u| (w, u)).collect();
    r.recolor = std::iter::once(w).chain(us.iter().copied()).collect();
    r.order = Some(std::iter::once(w).chain(us.iter().rev().copied()).collect());
    r
}

fn removal(tag: &str, vs: impl IntoIterator<Item = Vertex>, order: Option<Vec<Vertex>>) -> Recipe {
    let mut r = Recipe::new(tag);
    r.remove_vertices = vs.into_iter().collect();
    r.order = order;
    r
}

fn pin(vertex: Vertex, source: PinSource) -> Pin {
    Pin { vertex, source }
}

fn added(addition: usize, index: usize) -> PinSource {
    PinSource::Added { addition, index }
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Graph) -> Self {
        let runs = g.vertices().map(|v| if g.degree(v) == 2 { Vec::new() } else { incident_runs(g, v) }).collect();
        let mut on_cycle = vec![false; g.n()];
        for c in cycle_components(g) {
            for v in c {
                on_cycle[v] = true;
            }
        }
        Ctx { g, runs, paths: all_runs(g), dstar: g.vertices().map(|v| d_star(g, v)).collect(), on_cycle }
    }

    fn d(&self, v: Vertex) -> usize {
        self.g.degree(v)
    }

    fn run_via(&self, u: Vertex, y: Vertex) -> &IncidentRun {
        self.runs[u].iter().find(|r| r.first == y).expect("y is a neighbor of u")
    }

    fn open_with(&self, r: &IncidentRun, k: usize) -> bool {
        r.k() == k && !r.is_closed()
    }

    /// Degree 3 with two open 2-paths and a third neighbor of degree other
    /// than two.
    fn fork(&self, w: Vertex) -> Option<(Vertex, Vertex)> {
        if self.d(w) != 3 || self.runs[w].is_empty() {
            return None;
        }
        let twos: Vec<&IncidentRun> = self.runs[w].iter().filter(|r| self.open_with(r, 2)).collect();
        let zero = self.runs[w].iter().filter(|r| r.k() == 0).count();
        (twos.len() == 2 && zero == 1).then(|| (twos[0].first, twos[1].first))
    }

    fn detect(&self, kind: ConfigKind) -> Option<Configuration> {
        match kind {
            ConfigKind::DegreeOne => self.degree_one(),
            ConfigKind::FourPlusPath => self.four_plus_path(),
            ConfigKind::ThreePathBadEnd => self.three_path_bad_end(),
            ConfigKind::TwoPathBadEnds => self.two_path_bad_ends(),
            ConfigKind::TwoPathChord => self.two_path_chord(),
            ConfigKind::ThreePathCycle => self.three_path_cycle(),
            ConfigKind::SmallVertex => self.small_vertex(),
            ConfigKind::CountingPair => self.counting_pair(),
            ConfigKind::WeirdSeven => self.weird_seven(),
            ConfigKind::WeirdSix => self.weird_six(),
            ConfigKind::SevenSevenTwoPaths => self.seven_seven_two_paths(),
            ConfigKind::ThreeConsecutiveThreePaths => self.three_consecutive(),
            ConfigKind::TwoConsecutiveThreePaths => self.two_consecutive(),
            ConfigKind::SponsorManyBridges | ConfigKind::SponsorAllBadNeighbors | ConfigKind::SponsorWithSmallX => {
                self.sponsor(kind)
            }
        }
    }

    fn degree_one(&self) -> Option<Configuration> {
        let v = self.g.vertices().find(|&v| self.d(v) == 1)?;
        let w = self.g.neighbors(v)[0];
        let mut r = Recipe::new("pendant-edge");
        r.remove_edges = vec![(v, w)];
        r.recolor = vec![v];
        r.order = Some(vec![v]);
        Some(Configuration::new(ConfigKind::DegreeOne).role("v", [v]).role("neighbor", [w]).recipe(r))
    }

    fn four_plus_path(&self) -> Option<Configuration> {
        let p = self.paths.iter().find(|p| p.k() >= 4)?;
        let (w, u) = (p.internal[1], p.internal[2]);
        Some(
            Configuration::new(ConfigKind::FourPlusPath)
                .role("w", [w])
                .role("u", [u])
                .path(p.clone())
                .recipe(counting("counting", w, &[u])),
        )
    }

    fn three_path_bad_end(&self) -> Option<Configuration> {
        for p in self.paths.iter().filter(|p| p.k() == 3) {
            let cfg = Configuration::new(ConfigKind::ThreePathBadEnd).path(p.clone());
            let i = &p.internal;
            if p.is_closed() {
                let r = removal("closed", i.clone(), Some(vec![i[0], i[2], i[1]]));
                return Some(cfg.role("end", [p.u]).recipe(r));
            }
            if self.d(p.u) < DELTA || self.d(p.v) < DELTA {
                let (low, w) = if self.d(p.u) < DELTA { (p.u, i[0]) } else { (p.v, i[2]) };
                return Some(cfg.role("low_end", [low]).role("w", [w]).role("u", [i[1]]).recipe(counting("counting", w, &[i[1]])));
            }
        }
        None
    }

    fn two_path_bad_ends(&self) -> Option<Configuration> {
        for p in self.paths.iter().filter(|p| p.k() == 2) {
            let cfg = Configuration::new(ConfigKind::TwoPathBadEnds).path(p.clone());
            let i = &p.internal;
            if p.is_closed() {
                return Some(cfg.role("end", [p.u]).recipe(removal("closed", i.clone(), Some(i.clone()))));
            }
            // a is the lower-degree end, b the other.
            let (a, b, near_a, near_b) =
                if self.d(p.u) <= self.d(p.v) { (p.u, p.v, i[0], i[1]) } else { (p.v, p.u, i[1], i[0]) };
            if self.d(b) < DELTA && self.d(a) + 1 < DELTA {
                return Some(
                    cfg.role("ends", [a, b]).role("w", [near_b]).role("u", [near_a]).recipe(counting("counting", near_b, &[near_a])),
                );
            }
        }
        None
    }

    fn two_path_chord(&self) -> Option<Configuration> {
        for p in self.paths.iter().filter(|p| p.k() == 2 && !p.is_closed()) {
            for q in [p.clone(), p.reversed()] {
                let (u, x) = (q.u, q.v);
                if self.d(u) == DELTA && self.d(x) < DELTA && self.g.has_edge(u, x) {
                    let i = q.internal.clone();
                    return Some(
                        Configuration::new(ConfigKind::TwoPathChord)
                            .role("u", [u])
                            .role("x", [x])
                            .path(q)
                            .recipe(removal("remove-internal", i.clone(), Some(i))),
                    );
                }
            }
        }
        None
    }

    fn three_path_cycle(&self) -> Option<Configuration> {
        let threes: Vec<&PathDescriptor> = self.paths.iter().filter(|p| p.k() == 3 && !p.is_closed()).collect();
        let n = self.g.n();
        let mut parent: Vec<Vertex> = (0..n).collect();
        fn find(parent: &mut [Vertex], mut x: Vertex) -> Vertex {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut forest: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n];
        for (idx, p) in threes.iter().enumerate() {
            let (a, b) = (find(&mut parent, p.u), find(&mut parent, p.v));
            if a != b {
                parent[a] = b;
                forest[p.u].push((p.v, idx));
                forest[p.v].push((p.u, idx));
                continue;
            }
            // Closing path: walk the forest from p.v back to p.u.
            let mut via: Vec<Option<(Vertex, usize)>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[p.u] = true;
            let mut stack = vec![p.u];
            while let Some(x) = stack.pop() {
                for &(y, e) in &forest[x] {
                    if !seen[y] {
                        seen[y] = true;
                        via[y] = Some((x, e));
                        stack.push(y);
                    }
                }
            }
            let mut cycle = vec![idx];
            let mut x = p.v;
            while let Some((prev, e)) = via[x] {
                cycle.push(e);
                x = prev;
            }
            cycle.sort_unstable();
            let mut cfg = Configuration::new(ConfigKind::ThreePathCycle);
            let mut internal = Vec::new();
            for &e in &cycle {
                internal.extend(threes[e].internal.iter().copied());
                cfg = cfg.path(threes[e].clone());
            }
            let ends: Vec<Vertex> = cycle.iter().flat_map(|&e| [threes[e].u, threes[e].v]).collect();
            let mut ends = ends;
            ends.sort_unstable();
            ends.dedup();
            return Some(cfg.role("ends", ends).recipe(removal("remove-internal", internal, None)));
        }
        None
    }

    fn small_vertex(&self) -> Option<Configuration> {
        for v in self.g.vertices().filter(|&v| (3..=4).contains(&self.d(v))) {
            let runs = &self.runs[v];
            if runs.iter().any(|r| r.k() == 0 || (r.k() > 0 && r.is_closed())) {
                continue;
            }
            if let Some(r) = runs.iter().find(|r| r.k() == 2) {
                let u = r.first;
                return Some(
                    Configuration::new(ConfigKind::SmallVertex)
                        .role("v", [v])
                        .role("u", [u])
                        .path(r.descriptor())
                        .recipe(counting("counting", v, &[u])),
                );
            }
        }
        None
    }

    fn counting_pair(&self) -> Option<Configuration> {
        for w in self.g.vertices().filter(|&w| !self.on_cycle[w]) {
            let mut nb: Vec<(usize, Vertex)> = self.g.neighbors(w).iter().map(|&u| (self.dstar[u], u)).collect();
            nb.sort_unstable();
            let k = nb.iter().enumerate().take_while(|(i, (ds, _))| *ds <= DELTA + i).count();
            if k >= 1 && self.dstar[w] <= DELTA + k {
                let us: Vec<Vertex> = nb[..k].iter().map(|&(_, u)| u).collect();
                return Some(
                    Configuration::new(ConfigKind::CountingPair)
                        .role("w", [w])
                        .role("u", us.iter().copied())
                        .recipe(counting("counting", w, &us)),
                );
            }
        }
        None
    }

    fn weird_seven(&self) -> Option<Configuration> {
        for u in self.g.vertices().filter(|&u| self.d(u) == DELTA) {
            let mut bad: Vec<&IncidentRun> =
                self.runs[u].iter().filter(|r| self.open_with(r, 2) && self.d(r.end) <= 5).collect();
            if bad.len() < 6 {
                continue;
            }
            bad.sort_by_key(|r| r.first);
            let y = if bad.len() == 7 {
                bad[6].first
            } else {
                *self.g.neighbors(u).iter().find(|&&y| bad.iter().all(|r| r.first != y)).expect("seventh neighbor")
            };
            let ry = self.run_via(u, y);
            let fires = self.open_with(ry, 3) || self.fork(y).is_some() || (self.open_with(ry, 2) && self.d(ry.end) < DELTA);
            if !fires {
                continue;
            }
            let mut removed = two_distance_neighborhood(self.g, u).as_slice().to_vec();
            removed.push(u);
            let mut cfg = Configuration::new(ConfigKind::WeirdSeven).role("u", [u]).role("seventh", [y]);
            for r in &bad[..6] {
                cfg = cfg.path(r.descriptor());
            }
            return Some(cfg.recipe(removal("remove-ball", removed, None)));
        }
        None
    }

    fn weird_six(&self) -> Option<Configuration> {
        for u in self.g.vertices().filter(|&u| self.d(u) == 6) {
            if self.runs[u].iter().all(|r| self.open_with(r, 2) && self.d(r.end) == 6) {
                let mut removed = vec![u];
                let mut cfg = Configuration::new(ConfigKind::WeirdSix).role("u", [u]);
                for r in &self.runs[u] {
                    removed.extend(&r.internal);
                    cfg = cfg.path(r.descriptor());
                }
                return Some(cfg.recipe(removal("remove-star", removed, None)));
            }
        }
        None
    }

    fn seven_seven_two_paths(&self) -> Option<Configuration> {
        for u in self.g.vertices().filter(|&u| self.d(u) == DELTA) {
            let runs = &self.runs[u];
            if !runs.iter().all(|r| self.open_with(r, 2)) {
                continue;
            }
            let mut order: Vec<&IncidentRun> = runs.iter().collect();
            order.sort_by_key(|r| r.first);
            for p in &order {
                let others: Vec<&&IncidentRun> = order.iter().filter(|r| r.first != p.first).collect();
                if !others.iter().all(|r| self.d(r.end) <= 5) {
                    continue;
                }
                let v = p.end;
                let ru = PotentialQuery::evaluate(self.g, "rho*_{G-P}(u)", &[u], &p.internal);
                let rv = PotentialQuery::evaluate(self.g, "rho*_{G-P}(v)", &[v], &p.internal);
                if ru.value > rv.value {
                    continue;
                }
                let removed: Vec<Vertex> = order.iter().flat_map(|r| r.internal.iter().copied()).collect();
                let mut base = removal("remove-two-paths", removed, None);
                base.recolor = vec![u];
                let mut cfg = Configuration::new(ConfigKind::SevenSevenTwoPaths).role("u", [u]).role("v", [v]).path(p.descriptor());
                for r in &others {
                    if r.end == v {
                        continue;
                    }
                    let mut c = base.clone();
                    c.tag = format!("two-path {v}-{}", r.end);
                    c.additions = vec![Addition { u: v, v: r.end, k: 2 }];
                    c.pins = vec![pin(p.internal[1], added(0, 0))];
                    cfg = cfg.recipe(c);
                }
                cfg.potentials = vec![ru, rv];
                return Some(cfg.recipe(base.plain()).role("far_ends", others.iter().map(|r| r.end)));
            }
        }
        None
    }

    /// Open 3-paths at `v`, oriented away from `v`.
    fn threes_at(&self, v: Vertex) -> Vec<PathDescriptor> {
        self.runs[v].iter().filter(|r| self.open_with(r, 3)).map(IncidentRun::descriptor).collect()
    }

    /// Remove two consecutive 3-paths `a -A- b -B- c` and join `a`, `c` by a
    /// new 3-path whose end colors are copied onto the far ends.
    fn consecutive_recipe(a: &PathDescriptor, b: &PathDescriptor) -> Recipe {
        // a runs from its far end to the shared vertex, b from the shared vertex on.
        let mut r = removal(
            &format!("three-path {}-{}", a.u, b.v),
            a.internal.iter().chain(&b.internal).copied(),
            None,
        );
        r.additions = vec![Addition { u: a.u, v: b.v, k: 3 }];
        r.pins = vec![pin(a.internal[0], added(0, 0)), pin(b.internal[2], added(0, 2))];
        r
    }

    fn three_consecutive(&self) -> Option<Configuration> {
        for mid in self.paths.iter().filter(|p| p.k() == 3 && !p.is_closed()) {
            let (v, w) = (mid.u, mid.v);
            let left = self.threes_at(v).into_iter().find(|p| p.internal != mid.internal && p.v != w);
            let right = self.threes_at(w).into_iter().find(|p| p.internal.iter().rev().ne(mid.internal.iter()) && p.v != v);
            let (Some(left), Some(right)) = (left, right) else { continue };
            // left: v -> u, right: w -> x.
            let first = left.reversed();
            let first_pair = Self::consecutive_recipe(&first, mid);
            let second_pair = Self::consecutive_recipe(mid, &right);
            let cfg = Configuration::new(ConfigKind::ThreeConsecutiveThreePaths)
                .role("ends", [left.v, v, w, right.v])
                .path(first)
                .path(mid.clone())
                .path(right)
                .recipe(first_pair.clone())
                .recipe(second_pair.clone())
                .recipe(first_pair.plain())
                .recipe(second_pair.plain());
            return Some(cfg);
        }
        None
    }

    fn two_consecutive(&self) -> Option<Configuration> {
        for v in self.g.vertices() {
            let threes = self.threes_at(v);
            for i in 0..threes.len() {
                for j in i + 1..threes.len() {
                    let (p, q) = (&threes[i], &threes[j]);
                    let (u, w) = (p.v, q.v);
                    if u == w {
                        continue;
                    }
                    let removed: Vec<Vertex> = p.internal.iter().chain(&q.internal).copied().collect();
                    let query = PotentialQuery::evaluate(self.g, "rho*_H(uw)", &[u, w], &removed);
                    if query.value < 1 {
                        continue;
                    }
                    let first = p.reversed();
                    let r = Self::consecutive_recipe(&first, q);
                    let mut cfg = Configuration::new(ConfigKind::TwoConsecutiveThreePaths)
                        .role("u", [u])
                        .role("v", [v])
                        .role("w", [w])
                        .path(first)
                        .path(q.clone())
                        .recipe(r.clone())
                        .recipe(r.plain());
                    cfg.potentials.push(query);
                    return Some(cfg);
                }
            }
        }
        None
    }

    fn shape(&self, u: Vertex, y: Vertex) -> Shape<'_> {
        let r = self.run_via(u, y);
        if self.open_with(r, 2) {
            return Shape::Bridge(r);
        }
        match self.fork(y) {
            Some((a, b)) => Shape::Fork { w: y, r: a, s: b },
            None => Shape::Other(y),
        }
    }

    fn sponsor(&self, kind: ConfigKind) -> Option<Configuration> {
        for p in self.paths.iter().filter(|p| p.k() == 3 && !p.is_closed()) {
            for oriented in [p.clone(), p.reversed()] {
                if let Some(cfg) = self.sponsor_at(kind, &oriented) {
                    return Some(cfg);
                }
            }
        }
        None
    }

    /// `path` runs from the sponsor candidate `u` to the other end `v`.
    fn sponsor_at(&self, kind: ConfigKind, path: &PathDescriptor) -> Option<Configuration> {
        let (u, v) = (path.u, path.v);
        if self.d(u) != DELTA || self.threes_at(u).len() != 1 {
            return None;
        }
        let p1 = path.internal[0];
        let mut bridges: Vec<&IncidentRun> = Vec::new();
        let mut forks: Vec<(Vertex, Vertex, Vertex)> = Vec::new();
        let mut others: Vec<Vertex> = Vec::new();
        let mut nb: Vec<Vertex> = self.g.neighbors(u).iter().copied().filter(|&y| y != p1).collect();
        nb.sort_unstable();
        for y in nb {
            match self.shape(u, y) {
                Shape::Bridge(r) => bridges.push(r),
                Shape::Fork { w, r, s } => forks.push((w, r, s)),
                Shape::Other(x) => others.push(x),
            }
        }
        let low: Vec<&IncidentRun> = bridges.iter().copied().filter(|r| self.d(r.end) <= 5).collect();
        let structural = match kind {
            ConfigKind::SponsorManyBridges => low.len() >= 3,
            ConfigKind::SponsorAllBadNeighbors => others.is_empty(),
            ConfigKind::SponsorWithSmallX => others.len() == 1 && self.dstar[others[0]] <= 12 && !low.is_empty(),
            _ => unreachable!("not a sponsor kind"),
        };
        if !structural {
            return None;
        }
        let ru = PotentialQuery::evaluate(self.g, "rho*_{G-P}(u)", &[u], &path.internal);
        let rv = PotentialQuery::evaluate(self.g, "rho*_{G-P}(v)", &[v], &path.internal);
        if ru.value > rv.value {
            return None;
        }
        let mut cfg = Configuration::new(kind).role("u", [u]).role("v", [v]).path(path.clone());
        cfg.potentials = vec![ru, rv];
        let cfg = match kind {
            ConfigKind::SponsorManyBridges => self.many_bridges(cfg, path, &low[..3]),
            ConfigKind::SponsorAllBadNeighbors => self.all_bad(cfg, path, &bridges, &forks),
            _ => {
                // The designated bridge with a 5- end goes first.
                let lead = low[0].first;
                let mut ordered: Vec<&IncidentRun> = vec![low[0]];
                ordered.extend(bridges.iter().copied().filter(|r| r.first != lead));
                self.small_x(cfg, path, &ordered, &forks, others[0])
            }
        };
        Some(cfg)
    }

    fn many_bridges(&self, mut cfg: Configuration, path: &PathDescriptor, qs: &[&IncidentRun]) -> Configuration {
        let (u, v, p3) = (path.u, path.v, path.internal[2]);
        let mut base = removal("sponsor-bridges", path.internal.iter().copied(), None);
        for r in qs {
            base.remove_vertices.extend(&r.internal);
            cfg = cfg.path(r.descriptor());
        }
        for r in qs {
            let mut c = base.clone();
            c.tag = format!("two-path {v}-{}", r.end);
            c.additions = vec![Addition { u: v, v: r.end, k: 2 }];
            c.pins = vec![pin(p3, added(0, 0))];
            cfg = cfg.recipe(c);
        }
        let mut c = base.clone();
        c.tag = format!("edge {u}-{v}");
        c.additions = vec![Addition { u, v, k: 0 }];
        c.pins = vec![pin(p3, PinSource::Kept(u))];
        cfg.recipe(c).recipe(base.plain()).role("far_ends", qs.iter().map(|r| r.end))
    }

    fn all_bad(
        &self,
        mut cfg: Configuration,
        path: &PathDescriptor,
        qs: &[&IncidentRun],
        ws: &[(Vertex, Vertex, Vertex)],
    ) -> Configuration {
        let (u, v) = (path.u, path.v);
        let [p1, p2, p3] = [path.internal[0], path.internal[1], path.internal[2]];
        for r in qs {
            cfg = cfg.path(r.descriptor());
        }
        cfg = cfg.role("forks", ws.iter().map(|w| w.0)).role("far_ends", qs.iter().map(|r| r.end));
        let fork_vertices: Vec<Vertex> = ws.iter().flat_map(|&(w, r, s)| [w, r, s]).collect();
        match qs.len() {
            0 => {
                let r = removal("sponsor-forks", [u, p1, p2].into_iter().chain(fork_vertices), None);
                cfg.recipe(r)
            }
            1 => {
                let q = qs[0];
                let removed = [u, p1, p2, p3, q.internal[0], q.internal[1]].into_iter().chain(fork_vertices);
                let mut r = removal(&format!("three-path {v}-{}", q.end), removed, None);
                r.additions = vec![Addition { u: v, v: q.end, k: 3 }];
                r.pins = vec![pin(p3, added(0, 0)), pin(q.internal[1], added(0, 2))];
                let plain = r.plain();
                cfg.recipe(r).recipe(plain)
            }
            _ => {
                let mut base = removal("sponsor-double", [u, p1, p2, p3], None);
                for q in qs {
                    base.remove_vertices.extend(&q.internal);
                }
                base.recolor = fork_vertices;
                for c in self.double_additions(&base, v, p3, qs, ws) {
                    cfg = cfg.recipe(c);
                }
                cfg.recipe(base.plain())
            }
        }
    }

    /// Pairs of additions that each kill one obstruction to coloring the
    /// closed neighborhood of the sponsor.
    fn double_additions(
        &self,
        base: &Recipe,
        v: Vertex,
        p3: Vertex,
        qs: &[&IncidentRun],
        ws: &[(Vertex, Vertex, Vertex)],
    ) -> Vec<Recipe> {
        let mut out = Vec::new();
        let make = |tag: String, additions: Vec<Addition>, pins: Vec<Pin>| {
            let mut c = base.clone();
            c.tag = tag;
            c.additions = additions;
            c.pins = pins;
            c
        };
        let far = |i: usize| qs[i].end;
        let qq = |i: usize| qs[i].internal[1];
        let k = qs.len();
        // Two-path between two far ends, then an edge from v to a fork.
        for i in 0..k {
            for i2 in i + 1..k {
                for &(w, _, _) in ws {
                    out.push(make(
                        format!("two-path {}-{} + edge {v}-{w}", far(i), far(i2)),
                        vec![Addition { u: far(i), v: far(i2), k: 2 }, Addition { u: v, v: w, k: 0 }],
                        vec![
                            pin(p3, PinSource::Kept(w)),
                            pin(w, PinSource::Kept(w)),
                            pin(qq(i), added(0, 0)),
                            pin(qq(i2), added(0, 1)),
                        ],
                    ));
                }
            }
        }
        // Edge from v to one fork, then an edge from a far end to another fork.
        for i in 0..k {
            for &(w, _, _) in ws {
                for &(w2, _, _) in ws.iter().filter(|x| x.0 != w) {
                    out.push(make(
                        format!("edge {v}-{w2} + edge {}-{w}", far(i)),
                        vec![Addition { u: v, v: w2, k: 0 }, Addition { u: far(i), v: w, k: 0 }],
                        vec![
                            pin(p3, PinSource::Kept(w2)),
                            pin(w2, PinSource::Kept(w2)),
                            pin(w, PinSource::Kept(w)),
                            pin(qq(i), PinSource::Kept(w)),
                        ],
                    ));
                }
            }
        }
        // Two-path between two far ends, then a two-path from v to a third.
        for i in 0..k {
            for i2 in i + 1..k {
                for i3 in (0..k).filter(|&x| x != i && x != i2) {
                    out.push(make(
                        format!("two-path {}-{} + two-path {v}-{}", far(i), far(i2), far(i3)),
                        vec![Addition { u: far(i), v: far(i2), k: 2 }, Addition { u: v, v: far(i3), k: 2 }],
                        vec![
                            pin(p3, added(1, 0)),
                            pin(qq(i3), added(1, 1)),
                            pin(qq(i), added(0, 0)),
                            pin(qq(i2), added(0, 1)),
                        ],
                    ));
                }
            }
        }
        // Two-path from v to a far end, then an edge from another far end to a fork.
        for i in 0..k {
            for i2 in (0..k).filter(|&x| x != i) {
                for &(w, _, _) in ws {
                    out.push(make(
                        format!("two-path {v}-{} + edge {}-{w}", far(i2), far(i)),
                        vec![Addition { u: v, v: far(i2), k: 2 }, Addition { u: far(i), v: w, k: 0 }],
                        vec![
                            pin(p3, added(0, 0)),
                            pin(qq(i2), added(0, 1)),
                            pin(qq(i), PinSource::Kept(w)),
                            pin(w, PinSource::Kept(w)),
                        ],
                    ));
                }
            }
        }
        out
    }

    fn small_x(
        &self,
        mut cfg: Configuration,
        path: &PathDescriptor,
        qs: &[&IncidentRun],
        ws: &[(Vertex, Vertex, Vertex)],
        x: Vertex,
    ) -> Configuration {
        let (u, v) = (path.u, path.v);
        let p3 = path.internal[2];
        let mut base = removal("sponsor-small-x", [u].into_iter().chain(path.internal.iter().copied()), None);
        for q in qs {
            base.remove_vertices.extend(&q.internal);
            cfg = cfg.path(q.descriptor());
        }
        base.recolor = std::iter::once(x).chain(ws.iter().flat_map(|&(w, r, s)| [w, r, s])).collect();
        for (i, q) in qs.iter().enumerate() {
            let mut c = base.clone();
            c.tag = format!("two-path {v}-{}", q.end);
            c.additions = vec![Addition { u: v, v: q.end, k: 2 }];
            c.pins = vec![pin(p3, added(0, 0))];
            if i > 0 {
                c.pins.push(pin(q.internal[1], added(0, 1)));
            }
            cfg = cfg.recipe(c);
        }
        for z in std::iter::once(x).chain(ws.iter().map(|w| w.0)) {
            let mut c = base.clone();
            c.tag = format!("edge {v}-{z}");
            c.additions = vec![Addition { u: v, v: z, k: 0 }];
            c.pins = vec![pin(p3, PinSource::Kept(z)), pin(z, PinSource::Kept(z))];
            cfg = cfg.recipe(c);
        }
        cfg.recipe(base.plain())
            .role("x", [x])
            .role("forks", ws.iter().map(|w| w.0))
            .role("far_ends", qs.iter().map(|r| r.end))
    }
}
