//! The potential `rho(A) = a|A| - b|E(A)|`, its superset minimum `rho*`,
//! and exact maximum average degree, all through one closure min-cut.

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotentialError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("brute force refused on {0} vertices (limit 20)")]
    TooLarge(usize),
    #[error("mad of the graph on zero vertices is undefined")]
    EmptyGraph,
    #[error("path endpoints must differ (got {0} twice)")]
    SameEndpoints(Vertex),
    #[error("path length {0} outside 0..=3")]
    PathTooLong(usize),
}

/// Coefficients of the potential. `(9, 7)` matches the `18/7` threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PotentialParams {
    pub vertex: i64,
    pub edge: i64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        PotentialParams { vertex: 9, edge: 7 }
    }
}

impl PotentialParams {
    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }

    /// The mad threshold `2a/b` these coefficients certify.
    pub fn threshold(&self) -> Ratio<i64> {
        Ratio::new(2 * self.vertex, self.edge)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialResult {
    pub value: i64,
    pub witness: VertexSet,
    pub params: PotentialParams,
}

pub fn rho(g: &Graph, a: &VertexSet, params: PotentialParams) -> Result<i64, GraphError> {
    g.check_set(a)?;
    Ok(rho_unchecked(g, a, params))
}

fn rho_unchecked(g: &Graph, a: &VertexSet, params: PotentialParams) -> i64 {
    params.vertex * a.len() as i64 - params.edge * g.induced_edge_count(a) as i64
}

/// Min-cut network minimising `a|S| - b|E(S)|` over `S ⊇ forced`.
///
/// Node layout: source, sink, one node per vertex, one node per edge. The
/// source feeds each edge node with capacity `b`; each edge node needs both
/// endpoints (infinite arcs); each vertex drains `a` into the sink. Forced
/// vertices hang off the source with an infinite arc.
#[derive(Clone, Debug)]
pub struct FlowInstance {
    network: FlowNetwork,
    n: usize,
    edge_weight: i64,
    m: usize,
}

impl FlowInstance {
    const SOURCE: usize = 0;
    const SINK: usize = 1;

    pub fn closure(g: &Graph, forced: &[Vertex], vertex_weight: i64, edge_weight: i64) -> Self {
        assert!(vertex_weight > 0 && edge_weight > 0, "weights must be positive");
        let (n, m) = (g.n(), g.m());
        let finite = (m as i64)
            .checked_mul(edge_weight)
            .and_then(|x| x.checked_add((n as i64).checked_mul(vertex_weight)?))
            .expect("capacity overflow");
        let inf = finite + 1;
        let mut network = FlowNetwork::new(2 + n + m);
        for v in 0..n {
            network.add_arc(2 + v, Self::SINK, vertex_weight);
        }
        for (i, (u, v)) in g.edges().enumerate() {
            let e = 2 + n + i;
            network.add_arc(Self::SOURCE, e, edge_weight);
            network.add_arc(e, 2 + u, inf);
            network.add_arc(e, 2 + v, inf);
        }
        for &x in forced {
            network.add_arc(Self::SOURCE, 2 + x, inf);
        }
        FlowInstance { network, n, edge_weight, m }
    }

    /// Minimum value and the smallest minimising set.
    pub fn solve(mut self) -> (i64, Vec<Vertex>) {
        let cut = self.network.max_flow(Self::SOURCE, Self::SINK);
        let side = self.network.source_side(Self::SOURCE);
        let witness = (0..self.n).filter(|&v| side[2 + v]).collect();
        (cut - self.edge_weight * self.m as i64, witness)
    }
}

pub fn rho_star(g: &Graph, a: &VertexSet, params: PotentialParams) -> Result<PotentialResult, GraphError> {
    g.check_set(a)?;
    let (value, witness) = FlowInstance::closure(g, a.as_slice(), params.vertex, params.edge).solve();
    let witness = VertexSet::from_slice(g.n(), &witness)?;
    debug_assert_eq!(value, rho_unchecked(g, &witness, params));
    Ok(PotentialResult { value, witness, params })
}

/// `rho*` of a set given as a slice of vertices.
pub fn rho_star_of(g: &Graph, a: &[Vertex]) -> Result<i64, GraphError> {
    Ok(rho_star(g, &VertexSet::from_slice(g.n(), a)?, PotentialParams::default())?.value)
}

/// Exhaustive oracle over all supersets of `a`.
pub fn rho_star_bruteforce(g: &Graph, a: &VertexSet, params: PotentialParams) -> Result<PotentialResult, PotentialError> {
    g.check_set(a)?;
    let n = g.n();
    if n > 20 {
        return Err(PotentialError::TooLarge(n));
    }
    let forced: u32 = a.iter().fold(0, |acc, v| acc | 1 << v);
    let nbr: Vec<u32> = g.vertices().map(|v| g.neighbors(v).iter().fold(0, |acc, &w| acc | 1 << w)).collect();
    let mut best: Option<(i64, u32)> = None;
    for mask in 0u32..(1 << n) {
        if mask & forced != forced {
            continue;
        }
        let mut edges2 = 0u32;
        for (v, nb) in nbr.iter().enumerate() {
            if mask >> v & 1 == 1 {
                edges2 += (nb & mask).count_ones();
            }
        }
        let value = params.vertex * mask.count_ones() as i64 - params.edge * (edges2 / 2) as i64;
        if best.is_none_or(|(b, _)| value < b) {
            best = Some((value, mask));
        }
    }
    let (value, mask) = best.expect("at least the full set is feasible");
    let members: Vec<Vertex> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
    Ok(PotentialResult { value, witness: VertexSet::from_slice(n, &members)?, params })
}

/// True when every vertex set has non-negative potential, i.e.
/// `mad(g) <= 2a/b`.
pub fn potential_nonnegative(g: &Graph, params: PotentialParams) -> bool {
    FlowInstance::closure(g, &[], params.vertex, params.edge).solve().0 >= 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MadResult {
    pub value: Ratio<i64>,
    /// Vertex set whose induced subgraph attains the maximum.
    pub witness: VertexSet,
    pub iterations: usize,
}

/// Exact maximum average degree by Dinkelbach iteration on the density
/// threshold, starting from the whole graph.
pub fn mad_exact(g: &Graph) -> Result<MadResult, PotentialError> {
    let n = g.n();
    if n == 0 {
        return Err(PotentialError::EmptyGraph);
    }
    let mut value = Ratio::new(2 * g.m() as i64, n as i64);
    let mut witness: Vec<Vertex> = g.vertices().collect();
    let mut iterations = 0;
    if g.m() > 0 {
        loop {
            iterations += 1;
            let (p, q) = (*value.numer(), *value.denom());
            // min over S of p|S| - 2q|E(S)| is negative iff some S is denser.
            let (min, set) = FlowInstance::closure(g, &[], p, 2 * q).solve();
            if min >= 0 {
                break;
            }
            let set = VertexSet::from_slice(n, &set)?;
            value = Ratio::new(2 * g.induced_edge_count(&set) as i64, set.len() as i64);
            witness = set.as_slice().to_vec();
        }
    } else {
        witness.truncate(1);
    }
    Ok(MadResult { value, witness: VertexSet::from_slice(n, &witness)?, iterations })
}

/// Exhaustive oracle: max over nonempty `S` of `2|E(S)|/|S|`.
pub fn mad_bruteforce(g: &Graph) -> Result<Ratio<i64>, PotentialError> {
    let n = g.n();
    if n == 0 {
        return Err(PotentialError::EmptyGraph);
    }
    if n > 20 {
        return Err(PotentialError::TooLarge(n));
    }
    let nbr: Vec<u32> = g.vertices().map(|v| g.neighbors(v).iter().fold(0, |acc, &w| acc | 1 << w)).collect();
    let mut best = Ratio::from_integer(0);
    for mask in 1u32..(1 << n) {
        let edges2: u32 = (0..n).filter(|v| mask >> v & 1 == 1).map(|v| (nbr[v] & mask).count_ones()).sum();
        best = best.max(Ratio::new(edges2 as i64, mask.count_ones() as i64));
    }
    Ok(best)
}

/// Adds a path with `k` new internal vertices between `u` and `v`
/// (a plain edge when `k = 0`). New vertices are `n..n+k` in path order
/// from `u`.
pub fn add_path(g: &Graph, u: Vertex, v: Vertex, k: usize) -> Result<Graph, PotentialError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(PotentialError::SameEndpoints(u));
    }
    if k > 3 {
        return Err(PotentialError::PathTooLong(k));
    }
    let n = g.n();
    let mut seq = vec![u];
    seq.extend(n..n + k);
    seq.push(v);
    let edges: Vec<(Vertex, Vertex)> = seq.windows(2).map(|w| (w[0], w[1])).collect();
    Ok(g.with_new_vertices(k).with_edges(&edges)?)
}

/// Which potential law a sampled instance exercised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PotentialLaw {
    /// `rho*(S) >= rho*(A)` for `A ⊆ S`.
    Superset,
    /// `rho*_H(A) >= rho*_G(A)` for a subgraph `H`.
    Subgraph,
    /// `rho(A) + rho(B) >= rho(A∪B) + rho(A∩B)`.
    SubmodularRho,
    /// The same for `rho*`.
    SubmodularRhoStar,
    /// `rho*_{G-A}(S) >= 7|E(A,S)| - rho(A)` for `S ⊇ N(A)` disjoint from `A`.
    NeighborhoodBound,
    /// Adding a path when `rho*(uv) >= 7-2k` keeps every potential non-negative.
    PathAddition,
    /// Adding a path lowers `rho*` of a set containing `u,v` by at most `7-2k`.
    PathDecrease,
    /// `rho*_H(A) = rho*_{H+P}(A)` or the four-term chain holds.
    PathChain,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LawViolation {
    pub law: PotentialLaw,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LawReport {
    pub checked: std::collections::BTreeMap<String, usize>,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn total(&self) -> usize {
        self.checked.values().sum()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, law: PotentialLaw, holds: bool, detail: impl FnOnce() -> String) {
        *self.checked.entry(format!("{law:?}")).or_default() += 1;
        if !holds {
            self.violations.push(LawViolation { law, detail: detail() });
        }
    }
}

fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> VertexSet {
    let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(p)).collect();
    VertexSet::from_mask(&mask)
}

/// Samples random sets, subgraphs and path additions on `g` and checks
/// every potential law. `trials` rounds each check all laws once.
pub fn verify_potential_laws<R: Rng>(g: &Graph, trials: usize, rng: &mut R) -> LawReport {
    let params = PotentialParams::default();
    let n = g.n();
    let mut report = LawReport::default();
    if n == 0 {
        return report;
    }
    let rs = |h: &Graph, s: &VertexSet| rho_star(h, s, params).expect("set within range").value;
    let bounded = potential_nonnegative(g, params);
    for _ in 0..trials {
        let p = rng.gen_range(0.1..0.6);
        let a = random_subset(rng, n, p);
        let b = random_subset(rng, n, p);
        let s = a.union(&random_subset(rng, n, p));

        let (ra, rs_s) = (rs(g, &a), rs(g, &s));
        report.record(PotentialLaw::Superset, rs_s >= ra, || format!("A={:?} S={:?}: {rs_s} < {ra}", a.as_slice(), s.as_slice()));

        if g.m() > 0 {
            let edges = g.edge_list();
            let e = edges[rng.gen_range(0..edges.len())];
            let h = g.without_edges(&[e]).expect("edge exists");
            let rh = rs(&h, &a);
            report.record(PotentialLaw::Subgraph, rh >= ra, || format!("A={:?} minus edge {e:?}: {rh} < {ra}", a.as_slice()));
        }

        let (u, i) = (a.union(&b), a.intersection(&b));
        let lhs = rho_unchecked(g, &a, params) + rho_unchecked(g, &b, params);
        let rhs = rho_unchecked(g, &u, params) + rho_unchecked(g, &i, params);
        report.record(PotentialLaw::SubmodularRho, lhs >= rhs, || format!("A={:?} B={:?}: {lhs} < {rhs}", a.as_slice(), b.as_slice()));
        let lhs = ra + rs(g, &b);
        let rhs = rs(g, &u) + rs(g, &i);
        report.record(PotentialLaw::SubmodularRhoStar, lhs >= rhs, || format!("A={:?} B={:?}: {lhs} < {rhs}", a.as_slice(), b.as_slice()));

        if bounded && !a.is_empty() && a.len() < n {
            check_neighborhood_bound(g, &a, rng, &mut report);
        }
        if bounded && n >= 2 {
            check_path_laws(g, rng, &mut report);
        }
    }
    report
}

fn check_neighborhood_bound<R: Rng>(g: &Graph, a: &VertexSet, rng: &mut R, report: &mut LawReport) {
    let params = PotentialParams::default();
    let n = g.n();
    let mut s_mask = vec![false; n];
    for x in a.iter() {
        for &y in g.neighbors(x) {
            s_mask[y] = !a.contains(y);
        }
    }
    for (v, slot) in s_mask.iter_mut().enumerate() {
        if !a.contains(v) && rng.gen_bool(0.2) {
            *slot = true;
        }
    }
    let s = VertexSet::from_mask(&s_mask);
    let e_as = g.edges_between(a, &s) as i64;
    let (h, map) = g.remove_vertices(a.as_slice());
    let s_h = s.mapped(&map, h.n());
    let lhs = rho_star(&h, &s_h, params).expect("mapped set in range").value;
    let rhs = 7 * e_as - rho_unchecked(g, a, params);
    report.record(PotentialLaw::NeighborhoodBound, lhs >= rhs, || {
        format!("A={:?} S={:?}: {lhs} < {rhs}", a.as_slice(), s.as_slice())
    });
}

fn check_path_laws<R: Rng>(g: &Graph, rng: &mut R, report: &mut LawReport) {
    let params = PotentialParams::default();
    let n = g.n();
    let u = rng.gen_range(0..n);
    let mut v = rng.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    let k = rng.gen_range(0..=3usize);
    if k == 0 && g.has_edge(u, v) {
        return;
    }
    let h2 = add_path(g, u, v, k).expect("valid path");
    let slack = 7 - 2 * k as i64;
    let uv = VertexSet::from_slice(n, &[u, v]).expect("in range");
    let r_uv = rho_star(g, &uv, params).expect("in range").value;
    if r_uv >= slack {
        let ok = potential_nonnegative(&h2, params);
        report.record(PotentialLaw::PathAddition, ok, || format!("u={u} v={v} k={k} rho*(uv)={r_uv}"));
    }

    // Sets of the enlarged graph containing u and v.
    let mut mask: Vec<bool> = (0..h2.n()).map(|_| rng.gen_bool(0.3)).collect();
    mask[u] = true;
    mask[v] = true;
    let s2 = VertexSet::from_mask(&mask);
    let s_h = VertexSet::from_mask(&mask[..n]);
    let lhs = rho_star(&h2, &s2, params).expect("in range").value;
    let rhs = rho_star(g, &s_h, params).expect("in range").value - slack;
    report.record(PotentialLaw::PathDecrease, lhs >= rhs, || format!("u={u} v={v} k={k} S={:?}: {lhs} < {rhs}", s2.as_slice()));

    let a = random_subset(rng, n, 0.3);
    let a2 = VertexSet::from_slice(h2.n(), a.as_slice()).expect("in range");
    let r_h = rho_star(g, &a, params).expect("in range").value;
    let r_h2 = rho_star(&h2, &a2, params).expect("in range").value;
    let r_huv = rho_star(g, &a.union(&uv), params).expect("in range").value;
    let holds = r_h == r_h2 || (r_h2 <= r_h && r_h <= r_huv && r_huv <= r_h2 + slack);
    report.record(PotentialLaw::PathChain, holds, || {
        format!("u={u} v={v} k={k} A={:?}: H={r_h} H+P={r_h2} H(A+uv)={r_huv}", a.as_slice())
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{subdivide, Graph};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(g: &Graph, xs: &[Vertex]) -> VertexSet {
        VertexSet::from_slice(g.n(), xs).unwrap()
    }

    #[test]
    fn rho_values() {
        let p = PotentialParams::default();
        let g = fixtures::cycle(5);
        assert_eq!(rho(&g, &set(&g, &[0]), p).unwrap(), 9);
        assert_eq!(rho(&g, &VertexSet::full(5), p).unwrap(), 10);
        let g = fixtures::path_between_hubs(3, 3);
        assert_eq!(rho(&g, &set(&g, &[2, 3, 4]), p).unwrap(), 13);
        assert!(rho(&g, &VertexSet::full(99), p).is_err());
    }

    #[test]
    fn rho_star_small_cases() {
        let p = PotentialParams::default();
        let g = fixtures::petersen();
        let r = rho_star(&g, &VertexSet::new(10), p).unwrap();
        // Petersen is too dense: whole graph has 90 - 105 < 0.
        assert_eq!(r.value, -15);
        let g = fixtures::path(2);
        assert_eq!(rho_star(&g, &VertexSet::new(2), p).unwrap().value, 0);
        assert!(rho_star(&g, &VertexSet::new(2), p).unwrap().witness.is_empty());
        assert_eq!(rho_star(&g, &VertexSet::full(2), p).unwrap().value, 11);
        assert_eq!(rho_star_bruteforce(&g, &VertexSet::full(2), p).unwrap().value, 11);
        assert!(matches!(
            rho_star_bruteforce(&fixtures::path(21), &VertexSet::new(21), p),
            Err(PotentialError::TooLarge(21))
        ));
    }

    #[test]
    fn mad_values() {
        assert_eq!(mad_exact(&fixtures::cycle(7)).unwrap().value, Ratio::from_integer(2));
        assert_eq!(mad_exact(&fixtures::path(6)).unwrap().value, Ratio::new(10, 6));
        assert_eq!(mad_exact(&fixtures::petersen()).unwrap().value, Ratio::from_integer(3));
        assert_eq!(mad_bruteforce(&fixtures::petersen()).unwrap(), Ratio::from_integer(3));
        assert_eq!(mad_exact(&Graph::empty(3)).unwrap().value, Ratio::from_integer(0));
        assert_eq!(mad_exact(&Graph::empty(0)), Err(PotentialError::EmptyGraph));
        // Spider with 7 legs of length 2: 14 edges on 15 vertices.
        let s = fixtures::spider(7, 1);
        assert_eq!(mad_exact(&s).unwrap().value, Ratio::new(28, 15));
        // K4 plus a pendant path: densest part is the K4.
        let g = fixtures::complete(4).with_new_vertices(2).with_edges(&[(3, 4), (4, 5)]).unwrap();
        let r = mad_exact(&g).unwrap();
        assert_eq!(r.value, Ratio::from_integer(3));
        assert_eq!(r.witness.as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn add_path_accounting() {
        let g = fixtures::path(3);
        let h = add_path(&g, 0, 2, 3).unwrap();
        assert_eq!((h.n(), h.m()), (6, 6));
        assert!(h.has_edge(0, 3) && h.has_edge(5, 2));
        assert_eq!(add_path(&g, 0, 2, 0).unwrap().m(), 3);
        assert!(matches!(add_path(&g, 0, 1, 0), Err(PotentialError::Graph(GraphError::DuplicateEdge(..)))));
        assert_eq!(add_path(&g, 1, 1, 2), Err(PotentialError::SameEndpoints(1)));
    }

    #[test]
    fn mad_threshold_agrees_with_potential_sign() {
        let p = PotentialParams::default();
        for g in [fixtures::petersen(), fixtures::cycle(9), fixtures::spider(7, 1), subdivide(&fixtures::complete(4), 1)] {
            let mad = mad_exact(&g).unwrap().value;
            assert_eq!(mad <= p.threshold(), potential_nonnegative(&g, p));
        }
    }

    #[test]
    fn laws_hold_on_fixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in [fixtures::spider(7, 2), subdivide(&fixtures::complete(4), 1), fixtures::petersen()] {
            let rep = verify_potential_laws(&g, 30, &mut rng);
            assert!(rep.ok(), "{:?}", rep.violations);
        }
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                let edges = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e);
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rho_star_matches_bruteforce(g in arb_graph(10), bits in proptest::collection::vec(any::<bool>(), 10)) {
            let p = PotentialParams::default();
            let a = VertexSet::from_mask(&bits[..g.n()]);
            let fast = rho_star(&g, &a, p).unwrap();
            let slow = rho_star_bruteforce(&g, &a, p).unwrap();
            prop_assert_eq!(fast.value, slow.value);
            prop_assert!(a.is_subset(&fast.witness));
            prop_assert_eq!(rho(&g, &fast.witness, p).unwrap(), fast.value);
        }

        #[test]
        fn mad_matches_bruteforce(g in arb_graph(9)) {
            prop_assert_eq!(mad_exact(&g).unwrap().value, mad_bruteforce(&g).unwrap());
        }

        #[test]
        fn rho_is_submodular(g in arb_graph(10), a in proptest::collection::vec(any::<bool>(), 10), b in proptest::collection::vec(any::<bool>(), 10)) {
            let p = PotentialParams::default();
            let (a, b) = (VertexSet::from_mask(&a[..g.n()]), VertexSet::from_mask(&b[..g.n()]));
            let lhs = rho(&g, &a, p).unwrap() + rho(&g, &b, p).unwrap();
            let rhs = rho(&g, &a.union(&b), p).unwrap() + rho(&g, &a.intersection(&b), p).unwrap();
            prop_assert!(lhs >= rhs);
        }
    }
}
