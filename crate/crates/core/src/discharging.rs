//! Charges `7 d(v) - 18`, the redistribution rules between vertices, and
//! checks of the per-degree floors and of the zero-charge endgame.
//!
//! All amounts are integer half-units.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixtures::{hubs, Padding};
use crate::graph::{cycle_components, incident_runs, vertex_signature, Graph, Vertex, VertexSignature};
use crate::potential::{potential_nonnegative, PotentialParams};
use crate::reductions::{classify_vertices, detect_configuration, ClassifyError, TwoVertexClass, VertexClasses, DELTA};

pub type Halves = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    R0i,
    R0ii,
    R0iii,
    R0iv,
    R1i,
    R1ii,
    R1iii,
    R1iv,
    R2i,
    R2ii,
    /// Moves the credit of a 2-path bridge across the pair.
    #[serde(rename = "BRIDGE-EQ")]
    BridgeEq,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::BridgeEq => f.write_str("BRIDGE-EQ"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Amount of every rule, in half-units. Editable so that mutants can be
/// run against the floor fixtures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleAmounts {
    pub large_two: Halves,
    pub medium_two: Halves,
    pub sponsor: Halves,
    pub one_path_bridge: Halves,
    pub two_path_bridge: Halves,
    pub fork: Halves,
    pub two_one_zero: Halves,
    pub one_one_zero: Halves,
    pub two_zero_zero: Halves,
    pub bridge_to_three: Halves,
    pub two_two_two_zero: Halves,
    pub bridge_to_low: Halves,
    pub bridge_eq: Halves,
}

impl Default for RuleAmounts {
    fn default() -> Self {
        RuleAmounts {
            large_two: 4,
            medium_two: 8,
            sponsor: 8,
            one_path_bridge: 2,
            two_path_bridge: 1,
            fork: 8,
            two_one_zero: 5,
            one_one_zero: 2,
            two_zero_zero: 1,
            bridge_to_three: 2,
            two_two_two_zero: 1,
            bridge_to_low: 1,
            bridge_eq: 1,
        }
    }
}

impl RuleAmounts {
    /// The rule amounts proper, without the bridge plumbing, with the rule
    /// each belongs to.
    pub fn rule_amounts_mut(&mut self) -> [(Rule, &'static str, &mut Halves); 12] {
        [
            (Rule::R0i, "large_two", &mut self.large_two),
            (Rule::R0i, "medium_two", &mut self.medium_two),
            (Rule::R0ii, "sponsor", &mut self.sponsor),
            (Rule::R0iii, "one_path_bridge", &mut self.one_path_bridge),
            (Rule::R0iv, "two_path_bridge", &mut self.two_path_bridge),
            (Rule::R1i, "fork", &mut self.fork),
            (Rule::R1ii, "two_one_zero", &mut self.two_one_zero),
            (Rule::R1iii, "one_one_zero", &mut self.one_one_zero),
            (Rule::R1iii, "two_zero_zero", &mut self.two_zero_zero),
            (Rule::R1iv, "bridge_to_three", &mut self.bridge_to_three),
            (Rule::R2i, "two_two_two_zero", &mut self.two_two_two_zero),
            (Rule::R2ii, "bridge_to_low", &mut self.bridge_to_low),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub rule: Rule,
    pub from: Vertex,
    pub to: Vertex,
    pub halves: Halves,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeLedger {
    pub initial: Vec<Halves>,
    pub transfers: Vec<Transfer>,
    #[serde(rename = "final")]
    pub final_charge: Vec<Halves>,
    pub sum_halves: Halves,
}

impl ChargeLedger {
    /// Final charges recomputed from the initial ones and the transfers.
    pub fn replay(&self) -> Vec<Halves> {
        let mut out = self.initial.clone();
        for t in &self.transfers {
            out[t.from] -= t.halves;
            out[t.to] += t.halves;
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DischargeError {
    #[error("maximum degree {0} exceeds {DELTA}")]
    DegreeTooLarge(usize),
    #[error("vertex {0} has degree below two")]
    MinDegree(Vertex),
    #[error("3-paths do not form a forest of stars: {0}")]
    Precheck(#[from] ClassifyError),
}

/// Initial charge of a vertex of degree `d`.
pub fn initial_charge(d: usize) -> Halves {
    2 * (7 * d as Halves - 18)
}

pub fn run_discharge(g: &Graph) -> Result<ChargeLedger, DischargeError> {
    run_discharge_with(g, &RuleAmounts::default())
}

pub fn run_discharge_with(g: &Graph, amounts: &RuleAmounts) -> Result<ChargeLedger, DischargeError> {
    if g.max_degree() > DELTA {
        return Err(DischargeError::DegreeTooLarge(g.max_degree()));
    }
    if let Some(v) = g.vertices().find(|&v| g.degree(v) < 2) {
        return Err(DischargeError::MinDegree(v));
    }
    let classes = classify_vertices(g)?;
    let d = |v: Vertex| g.degree(v);
    let sig: Vec<VertexSignature> = g.vertices().map(|v| vertex_signature(g, v)).collect();
    let mut transfers = Vec::new();
    let mut give = |rule, from, to, halves| transfers.push(Transfer { rule, from, to, halves });

    for v in g.vertices().filter(|&v| d(v) >= 3) {
        for &x in g.neighbors(v) {
            if d(x) == 2 {
                match classes.two[x] {
                    Some(TwoVertexClass::Large) => give(Rule::R0i, v, x, amounts.large_two),
                    Some(TwoVertexClass::Medium) => give(Rule::R0i, v, x, amounts.medium_two),
                    _ => {}
                }
                if d(v) >= 6 && classes.one_path_bridge[x] {
                    give(Rule::R0iii, v, x, amounts.one_path_bridge);
                }
                if d(v) == 7 && classes.two_path_bridge[x].is_some() {
                    give(Rule::R0iv, v, x, amounts.two_path_bridge);
                }
                continue;
            }
            let s = &sig[x];
            if d(v) >= 6 && s.is(&[2, 2, 0]) {
                give(Rule::R1i, v, x, amounts.fork);
            }
            if d(v) >= 5 && s.is(&[2, 1, 0]) {
                give(Rule::R1ii, v, x, amounts.two_one_zero);
            }
            if d(v) >= 4 && s.is(&[1, 1, 0]) {
                give(Rule::R1iii, v, x, amounts.one_one_zero);
            }
            if d(v) >= 4 && s.is(&[2, 0, 0]) {
                give(Rule::R1iii, v, x, amounts.two_zero_zero);
            }
            if d(v) >= 5 && s.is(&[2, 2, 2, 0]) {
                give(Rule::R2i, v, x, amounts.two_two_two_zero);
            }
        }
        if let Some(p2) = classes.sponsor[v] {
            give(Rule::R0ii, v, p2, amounts.sponsor);
        }
    }
    for x in g.vertices().filter(|&x| d(x) == 2) {
        if classes.one_path_bridge[x] {
            let three = *g.neighbors(x).iter().find(|&&y| d(y) == 3).expect("bridge has a 3-neighbor");
            give(Rule::R1iv, x, three, amounts.bridge_to_three);
        }
        // The member next to the 5- end pays; its partner hands over the credit.
        if let Some(partner) = classes.two_path_bridge[x] {
            if let Some(&low) = g.neighbors(x).iter().find(|&&y| d(y) != 2 && d(y) <= 5) {
                give(Rule::R2ii, x, low, amounts.bridge_to_low);
                give(Rule::BridgeEq, partner, x, amounts.bridge_eq);
            }
        }
    }

    let initial: Vec<Halves> = g.vertices().map(|v| initial_charge(d(v))).collect();
    let mut ledger = ChargeLedger { initial, transfers, final_charge: Vec::new(), sum_halves: 0 };
    ledger.final_charge = ledger.replay();
    ledger.sum_halves = ledger.final_charge.iter().sum();
    Ok(ledger)
}

/// The per-degree case a vertex falls in and the least final charge that
/// case guarantees once no configuration is present. `floor` is `None` for
/// signatures the configurations rule out altogether.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseFloor {
    pub case: String,
    pub floor: Option<Halves>,
}

pub fn case_floor(g: &Graph, classes: &VertexClasses, v: Vertex) -> CaseFloor {
    let s = vertex_signature(g, v);
    let d = s.degree;
    let case = |label: String, floor: Option<Halves>| CaseFloor { case: label, floor };
    if d == 2 {
        return case("2-vertex".into(), Some(0));
    }
    if !(2..=DELTA).contains(&d) || s.closed_walk {
        return case(format!("{d}-vertex {s}"), None);
    }
    let longest = s.lengths[0];
    let twos = s.lengths.iter().filter(|&&k| k == 2).count();
    let zeros = s.lengths.iter().filter(|&&k| k == 0).count();
    let label = format!("{d}-vertex {s}");
    let floor = match d {
        3 => match s.lengths.as_slice() {
            [2, 2, 0] | [2, 1, 0] | [2, 0, 0] | [1, 1, 1] => Some(0),
            [1, 1, 0] => {
                let u = incident_runs(g, v).into_iter().find(|r| r.k() == 0).map(|r| r.end).expect("one direct neighbor");
                Some(if g.degree(u) == 3 { 2 } else { 0 })
            }
            [1, 0, 0] | [0, 0, 0] => Some(2),
            _ => None,
        },
        4 if longest <= 2 => match (twos, zeros) {
            (0, _) => Some(4),
            (3, 1) => Some(0),
            (1 | 2, z) if z >= 1 => Some(2),
            _ => None,
        },
        5 if longest <= 2 => match twos {
            0 => Some(9),
            1..=3 => Some(0),
            4 if zeros == 1 => Some(1),
            _ => None,
        },
        6 if longest <= 2 => Some(0),
        7 if longest <= 3 => {
            if longest < 3 || classes.sponsor[v].is_some() {
                Some(0)
            } else {
                return case(format!("{label}, 3-path end that is not a sponsor"), Some(1));
            }
        }
        _ => None,
    };
    case(label, floor)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeNote {
    pub vertex: Vertex,
    pub halves: Halves,
    pub case: String,
    pub floor: Option<Halves>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerReport {
    /// Sum of final charges equals `14 m - 18 n`.
    pub conserved: bool,
    /// Final charges match a replay of the transfers.
    pub consistent: bool,
    pub sum_halves: Halves,
    pub expected_halves: Halves,
    pub mad_at_most_threshold: bool,
    pub sum_nonpositive: bool,
    /// Vertices outside pure-cycle components with negative final charge.
    pub negative: Vec<ChargeNote>,
    pub positive: Vec<ChargeNote>,
    /// Vertices below the floor of their case, or in a ruled-out case.
    pub below_floor: Vec<ChargeNote>,
    /// Configuration found when some vertex is below its floor.
    pub configuration: Option<String>,
}

impl LedgerReport {
    pub fn ok(&self) -> bool {
        self.conserved
            && self.consistent
            && (!self.mad_at_most_threshold || self.sum_nonpositive)
            && (self.below_floor.is_empty() || self.configuration.is_some())
    }
}

pub fn verify_ledger(g: &Graph, ledger: &ChargeLedger) -> Result<LedgerReport, DischargeError> {
    let classes = classify_vertices(g)?;
    let expected_halves = 2 * (14 * g.m() as Halves - 18 * g.n() as Halves);
    let sum_halves: Halves = ledger.final_charge.iter().sum();
    let mad_ok = potential_nonnegative(g, PotentialParams::default());
    let mut on_cycle = vec![false; g.n()];
    for c in cycle_components(g) {
        for v in c {
            on_cycle[v] = true;
        }
    }
    let mut negative = Vec::new();
    let mut positive = Vec::new();
    let mut below_floor = Vec::new();
    for v in g.vertices().filter(|&v| !on_cycle[v]) {
        let halves = ledger.final_charge[v];
        let cf = case_floor(g, &classes, v);
        let note = ChargeNote { vertex: v, halves, case: cf.case, floor: cf.floor };
        if cf.floor.is_none_or(|f| halves < f) {
            below_floor.push(note.clone());
        }
        match halves.signum() {
            -1 => negative.push(note),
            1 => positive.push(note),
            _ => {}
        }
    }
    let configuration = if below_floor.is_empty() {
        None
    } else {
        detect_configuration(g).map(|c| c.kind.name().to_string())
    };
    Ok(LedgerReport {
        conserved: sum_halves == expected_halves,
        consistent: ledger.replay() == ledger.final_charge,
        sum_halves,
        expected_halves,
        mad_at_most_threshold: mad_ok,
        sum_nonpositive: sum_halves <= 0,
        negative,
        positive,
        below_floor,
        configuration,
    })
}

/// Steps that rule out each kind of vertex once every charge is zero, in
/// the order they are argued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndgameStep {
    NoThreePaths,
    NoSevenVertices,
    NoFourOrFiveVertices,
    NoSixVertices,
    NoThreeVertices,
}

impl EndgameStep {
    pub const ORDER: [EndgameStep; 5] = [
        EndgameStep::NoThreePaths,
        EndgameStep::NoSevenVertices,
        EndgameStep::NoFourOrFiveVertices,
        EndgameStep::NoSixVertices,
        EndgameStep::NoThreeVertices,
    ];

    pub fn reason(self) -> &'static str {
        match self {
            EndgameStep::NoThreePaths => "the end of a 3-path that is not a sponsor keeps at least 1/2",
            EndgameStep::NoSevenVertices => {
                "a 7-vertex at zero needs six 2-path bridges plus one more full transfer (WeirdSeven, SevenSevenTwoPaths)"
            }
            EndgameStep::NoFourOrFiveVertices => {
                "without 7-vertices a 4- or 5-vertex has no 2-path (TwoPathBadEnds) and keeps at least 2"
            }
            EndgameStep::NoSixVertices => "a 6-vertex at zero has six 2-paths to 6-vertices (WeirdSix)",
            EndgameStep::NoThreeVertices => "every kind of 3-vertex is excluded or keeps charge",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub step: EndgameStep,
    pub holds: bool,
    pub reason: String,
    /// Offending vertices, each with the sub-case it falls in.
    pub witnesses: Vec<(Vertex, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndgameReport {
    pub steps: Vec<StepOutcome>,
    pub first_violation: Option<EndgameStep>,
    /// Every component is a cycle.
    pub cycles_only: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndgameError {
    #[error("ledger has {found} vertices, graph has {expected}")]
    Mismatch { expected: usize, found: usize },
    #[error("vertex {vertex} ends with {halves} half-units, not zero")]
    NonZero { vertex: Vertex, halves: Halves },
}

/// Walks the zero-charge argument on `g`. Vertices of pure-cycle
/// components are exempt from the zero requirement: no rule reaches them
/// and they are where the argument ends.
pub fn endgame_report(g: &Graph, ledger: &ChargeLedger) -> Result<EndgameReport, EndgameError> {
    if ledger.final_charge.len() != g.n() {
        return Err(EndgameError::Mismatch { expected: g.n(), found: ledger.final_charge.len() });
    }
    let mut on_cycle = vec![false; g.n()];
    for c in cycle_components(g) {
        for v in c {
            on_cycle[v] = true;
        }
    }
    if let Some(v) = g.vertices().find(|&v| !on_cycle[v] && ledger.final_charge[v] != 0) {
        return Err(EndgameError::NonZero { vertex: v, halves: ledger.final_charge[v] });
    }
    let d = |v: Vertex| g.degree(v);
    let with_degree = |ds: &[usize]| -> Vec<(Vertex, String)> {
        g.vertices().filter(|&v| ds.contains(&d(v))).map(|v| (v, format!("{}-vertex", d(v)))).collect()
    };
    let steps: Vec<StepOutcome> = EndgameStep::ORDER
        .iter()
        .map(|&step| {
            let witnesses = match step {
                EndgameStep::NoThreePaths => g
                    .vertices()
                    .filter(|&v| d(v) != 2 && incident_runs(g, v).iter().any(|r| r.k() == 3))
                    .map(|v| (v, "end of a 3-path".to_string()))
                    .collect(),
                EndgameStep::NoSevenVertices => with_degree(&[7]),
                EndgameStep::NoFourOrFiveVertices => with_degree(&[4, 5]),
                EndgameStep::NoSixVertices => with_degree(&[6]),
                EndgameStep::NoThreeVertices => {
                    g.vertices().filter(|&v| d(v) == 3).map(|v| (v, three_vertex_case(g, v).to_string())).collect()
                }
            };
            StepOutcome { step, holds: witnesses.is_empty(), reason: step.reason().to_string(), witnesses }
        })
        .collect();
    let first_violation = steps.iter().find(|s| !s.holds).map(|s| s.step);
    let cycles_only = g.vertices().all(|v| d(v) == 2);
    Ok(EndgameReport { steps, first_violation, cycles_only })
}

fn three_vertex_case(g: &Graph, v: Vertex) -> &'static str {
    let s = vertex_signature(g, v);
    match s.lengths.as_slice() {
        [k, ..] if *k >= 3 => "on a 3-path",
        [2, ..] => "on a 2-path, which needs a 7-vertex at the other end",
        [1, 1, 1] => "(1,1,1), whose 1-paths need 6+-ends",
        [1, 1, 0] => "(1,1,0), which keeps at least 1 next to a 3-vertex",
        _ => "(1-,0,0), which keeps at least 1",
    }
}

/// A small graph with some vertices whose final charge sits exactly on the
/// floor of their case.
#[derive(Clone, Debug)]
pub struct FloorFixture {
    pub name: &'static str,
    pub graph: Graph,
    /// Vertex and its exact final charge.
    pub tracked: Vec<(Vertex, Halves)>,
}

/// Every rule amount has a donor and a recipient sitting exactly on their
/// floors somewhere in this set, so changing any amount pushes some tracked
/// vertex below its floor.
pub fn floor_fixtures() -> Vec<FloorFixture> {
    let cl = |degrees: &[usize], runs: &[(Vertex, Vertex, usize)]| hubs(degrees, runs, Padding::Cliques);
    let internals = |first: Vertex, count: usize| (first..first + count).map(|x| (x, 0)).collect::<Vec<_>>();
    let mut out = Vec::new();

    // (1,1,1)-vertex whose three 1-paths are bridges to 6-vertices.
    let g = cl(&[3, 6, 6, 6], &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
    let mut tracked = vec![(0, 0)];
    tracked.extend(internals(4, 3));
    out.push(FloorFixture { name: "one-one-one", graph: g, tracked });

    // 6-vertex with six 2-paths to 6-vertices.
    let runs: Vec<_> = (1..=6).map(|e| (0, e, 2)).collect();
    let g = cl(&[6; 7], &runs);
    let mut tracked = vec![(0, 0)];
    tracked.extend(internals(7, 12));
    out.push(FloorFixture { name: "six-two-paths", graph: g, tracked });

    // Sponsor 0 on a 3-path to the star center 1, with a 1-path bridge to
    // the 3-vertex 3 and five 2-paths to 6-vertices.
    let mut runs = vec![(0, 1, 3), (1, 2, 3), (0, 3, 1)];
    runs.extend((4..=8).map(|e| (0, e, 2)));
    let g = cl(&[7, 7, 7, 3, 6, 6, 6, 6, 6], &runs);
    out.push(FloorFixture { name: "sponsor", graph: g, tracked: vec![(0, 0), (9, 0), (10, 0), (15, 0)] });

    let g = balanced();
    let tracked = g.vertices().map(|v| (v, 0)).collect();
    out.push(FloorFixture { name: "balanced", graph: g, tracked });

    // 5-vertex 0 with three 2-paths and two (2,1,0)-neighbors 1 and 2.
    let runs = [(0, 1, 0), (0, 2, 0), (1, 3, 2), (2, 4, 2), (1, 5, 1), (2, 6, 1), (0, 7, 2), (0, 8, 2), (0, 9, 2)];
    let g = cl(&[5, 3, 3, 7, 7, 3, 3, 6, 6, 6], &runs);
    out.push(FloorFixture { name: "two-one-zero", graph: g, tracked: vec![(0, 0), (1, 0), (2, 0)] });

    // (2,1,1,0) 4-vertex 0 next to the (1,1,0)-vertex 1.
    let runs = [(0, 1, 0), (0, 2, 2), (0, 3, 1), (0, 4, 1), (1, 5, 1), (1, 6, 1)];
    let g = cl(&[4, 3, 6, 3, 3, 3, 3], &runs);
    out.push(FloorFixture { name: "one-one-zero", graph: g, tracked: vec![(0, 2), (1, 0)] });

    // (2,2,2,2,0) 5-vertex 0 next to the (2,0,0)-vertex 1.
    let mut runs = vec![(0, 1, 0), (1, 2, 0), (1, 3, 2)];
    runs.extend((4..=7).map(|e| (0, e, 2)));
    let g = cl(&[5, 3, 3, 7, 6, 6, 6, 6], &runs);
    out.push(FloorFixture { name: "two-zero-zero", graph: g, tracked: vec![(0, 1), (1, 0)] });

    // (2,2,2,2,0) 5-vertex 0 next to the (2,2,2,0)-vertex 1.
    let mut runs = vec![(0, 1, 0), (1, 2, 2), (1, 3, 2), (1, 4, 2)];
    runs.extend((5..=8).map(|e| (0, e, 2)));
    let g = cl(&[5, 4, 7, 7, 7, 6, 6, 6, 6], &runs);
    out.push(FloorFixture { name: "two-two-two-zero", graph: g, tracked: vec![(0, 1), (1, 0)] });

    // Root 0 of a single 3-path, with five 2-path bridges and a 2-path to
    // another 7-vertex.
    let mut runs = vec![(0, 1, 3)];
    runs.extend((2..=6).map(|e| (0, e, 2)));
    runs.push((0, 7, 2));
    let g = cl(&[7, 7, 3, 3, 3, 3, 3, 7], &runs);
    out.push(FloorFixture { name: "root-end", graph: g, tracked: vec![(0, 1)] });

    // (1,0,0)-vertex.
    let g = cl(&[3, 3], &[(0, 1, 1)]);
    out.push(FloorFixture { name: "one-zero-zero", graph: g, tracked: vec![(0, 2), (2, 0)] });

    out
}

/// Two 7-vertices joined by a 2-path, six (2,2,0)-vertices each bridged to
/// both, and one 6-vertex adjacent to all six. Every final charge is zero
/// and `mad` is exactly 18/7.
pub fn balanced() -> Graph {
    let mut runs = vec![(0, 1, 2)];
    for f in 2..8 {
        runs.extend([(0, f, 2), (1, f, 2), (f, 8, 0)]);
    }
    hubs(&[7, 7, 3, 3, 3, 3, 3, 3, 6], &runs, Padding::Cliques)
}

/// Tracked vertices of `fixture` below their floor under `amounts`, or
/// off the conservation law.
pub fn floor_failures(fixture: &FloorFixture, amounts: &RuleAmounts) -> Vec<String> {
    let g = &fixture.graph;
    let ledger = match run_discharge_with(g, amounts) {
        Ok(l) => l,
        Err(e) => return vec![format!("{}: {e}", fixture.name)],
    };
    let classes = classify_vertices(g).expect("fixture passes the precheck");
    let mut out = Vec::new();
    if ledger.sum_halves != 2 * (14 * g.m() as Halves - 18 * g.n() as Halves) {
        out.push(format!("{}: charge not conserved", fixture.name));
    }
    for &(v, _) in &fixture.tracked {
        let cf = case_floor(g, &classes, v);
        let got = ledger.final_charge[v];
        if cf.floor.is_none_or(|f| got < f) {
            out.push(format!("{}: vertex {v} ({}) ends at {got}/2, floor {:?}", fixture.name, cf.case, cf.floor));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::potential::mad_exact;
    use num_rational::Ratio;

    #[test]
    fn initial_charges() {
        assert_eq!(initial_charge(2), -8);
        assert_eq!(initial_charge(7), 62);
        let g = fixtures::cycle(9);
        let l = run_discharge(&g).unwrap();
        assert!(l.transfers.is_empty());
        assert!(l.final_charge.iter().all(|&c| c == -8));
        assert_eq!(l.sum_halves, 2 * (14 * 9 - 18 * 9));
    }

    #[test]
    fn fixtures_sit_on_their_floors() {
        for f in floor_fixtures() {
            let ledger = run_discharge(&f.graph).unwrap();
            let classes = classify_vertices(&f.graph).unwrap();
            for &(v, want) in &f.tracked {
                assert_eq!(ledger.final_charge[v], want, "{} vertex {v}", f.name);
                assert_eq!(case_floor(&f.graph, &classes, v).floor, Some(want), "{} vertex {v}", f.name);
            }
            assert!(floor_failures(&f, &RuleAmounts::default()).is_empty());
        }
    }

    #[test]
    fn every_rule_amount_matters() {
        let fixtures = floor_fixtures();
        for i in 0..12 {
            for delta in [-1, 1] {
                let mut a = RuleAmounts::default();
                let name = {
                    let fields = a.rule_amounts_mut();
                    *fields[i].2 += delta;
                    fields[i].1
                };
                let caught = fixtures.iter().any(|f| !floor_failures(f, &a).is_empty());
                assert!(caught, "mutant {name} {delta:+} went unnoticed");
            }
        }
    }

    #[test]
    fn balanced_graph_is_tight() {
        let g = balanced();
        assert_eq!(g.max_degree(), 7);
        assert_eq!(mad_exact(&g).unwrap().value, Ratio::new(18, 7));
        let ledger = run_discharge(&g).unwrap();
        assert!(ledger.final_charge.iter().all(|&c| c == 0));
        let report = verify_ledger(&g, &ledger).unwrap();
        assert!(report.ok());
        assert!(report.sum_nonpositive);
        let end = endgame_report(&g, &ledger).unwrap();
        assert_eq!(end.first_violation, Some(EndgameStep::NoSevenVertices));
        let threes = &end.steps[4];
        assert!(threes.witnesses.iter().all(|(_, case)| case.starts_with("on a 2-path")));
        // The theorem still applies, so a configuration is present.
        assert!(detect_configuration(&g).is_some());
    }

    #[test]
    fn bridge_pairs_end_at_zero() {
        let g = balanced();
        let ledger = run_discharge(&g).unwrap();
        let eq = ledger.transfers.iter().filter(|t| t.rule == Rule::BridgeEq).count();
        assert_eq!(eq, 12);
    }

    #[test]
    fn endgame_on_cycles() {
        let g = fixtures::cycle(12);
        let ledger = run_discharge(&g).unwrap();
        let end = endgame_report(&g, &ledger).unwrap();
        assert!(end.cycles_only);
        assert_eq!(end.first_violation, None);
    }

    #[test]
    fn endgame_needs_zero_charges() {
        let f = &floor_fixtures()[0];
        let ledger = run_discharge(&f.graph).unwrap();
        assert!(matches!(endgame_report(&f.graph, &ledger), Err(EndgameError::NonZero { .. })));
    }

    #[test]
    fn prechecks() {
        assert_eq!(run_discharge(&fixtures::path(3)), Err(DischargeError::MinDegree(0)));
        let g = fixtures::hubs(&[8], &[], Padding::Cliques);
        assert_eq!(run_discharge(&g), Err(DischargeError::DegreeTooLarge(8)));
        // Two parallel 3-paths close a cycle.
        let g = fixtures::hubs(&[3, 3], &[(0, 1, 3), (0, 1, 3)], Padding::Cliques);
        assert!(matches!(run_discharge(&g), Err(DischargeError::Precheck(ClassifyError::Cycle(_)))));
    }

    #[test]
    fn ledger_json_shape() {
        let l = run_discharge(&balanced()).unwrap();
        let v = serde_json::to_value(&l).unwrap();
        for key in ["initial", "transfers", "final", "sum_halves"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["transfers"].as_array().unwrap().iter().any(|t| t["rule"] == "BRIDGE-EQ"));
    }
}
