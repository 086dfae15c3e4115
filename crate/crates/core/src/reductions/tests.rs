use super::*;
use crate::coloring::color_2distance;
use crate::corpus::{generate_one, CorpusSpec, Generator};
use crate::fixtures;
use crate::io::parse_graph6;
use crate::potential::mad_exact;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hubs(degrees: &[usize], runs: &[(Vertex, Vertex, usize)]) -> Graph {
    fixtures::hubs(degrees, runs, fixtures::Padding::Leaves)
}

/// Several different colorings of `h`, found by exact search on random
/// relabelings.
fn colorings(h: &Graph, count: usize, seed: u64) -> Vec<Coloring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut perm: Vec<Vertex> = (0..h.n()).collect();
            perm.shuffle(&mut rng);
            let relabeled = Graph::from_edges(h.n(), h.edges().map(|(a, b)| (perm[a], perm[b]))).unwrap();
            let SearchOutcome::Colored(c) = color_2distance(&relabeled, PALETTE, 5_000_000) else {
                panic!("reduced graph not 8-colorable within budget");
            };
            let mut back = Coloring::empty(h.n(), PALETTE);
            for v in h.vertices() {
                back.set(v, c.get(perm[v]).unwrap());
            }
            back
        })
        .collect()
}

/// Reduces, then extends several colorings of the reduced graph.
fn round_trip(g: &Graph, cfg: &Configuration) -> Reduction {
    cfg.validate(g).unwrap();
    let red = apply_reduction(g, cfg).unwrap();
    assert!(red.h.size() < g.size());
    for a in &red.added {
        assert!(a.potential >= a.addition.required_potential());
    }
    if !red.added.is_empty() {
        assert!(mad_exact(&red.h).unwrap().value <= Ratio::new(18, 7));
    }
    for ch in colorings(&red.h, 4, g.size() as u64) {
        let c = extend_coloring(g, cfg, &red, &ch).unwrap_or_else(|e| panic!("{}: {e}", cfg.kind));
        assert_eq!(is_valid_2distance(g, &c), Ok(None));
        for v in g.vertices() {
            if let Some(x) = red.to_h[v].filter(|_| !red.recipe.recolor.contains(&v)) {
                assert_eq!(c.get(v), ch.get(x), "survivor {v} changed color");
            }
        }
    }
    red
}

fn only(g: &Graph, kind: ConfigKind) -> Configuration {
    detect_with(g, &[kind]).unwrap_or_else(|| panic!("{kind} did not fire"))
}

#[test]
fn four_path_fires() {
    let g = hubs(&[3, 3], &[(0, 1, 4)]);
    let cfg = only(&g, ConfigKind::FourPlusPath);
    assert_eq!(cfg.paths[0].k(), 4);
    round_trip(&g, &cfg);
    // Nothing earlier in dispatch applies once the leaves are gone.
    let g = Graph::from_edges(10, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 6), (6, 5), (0, 7), (7, 8), (8, 9), (9, 5)]).unwrap();
    assert_eq!(detect_configuration(&g).unwrap().kind, ConfigKind::FourPlusPath);
}

#[test]
fn two_path_with_low_ends_fires() {
    // Ends of degree 3 and 5, closed up by 2-paths to a third hub so
    // nothing earlier fires.
    let g = hubs(&[3, 5, 6], &[(0, 1, 2), (0, 2, 2), (0, 2, 2), (1, 2, 2), (1, 2, 2), (1, 2, 2), (1, 2, 2)]);
    let cfg = detect_configuration(&g).unwrap();
    assert_eq!(cfg.kind, ConfigKind::TwoPathBadEnds);
    assert_eq!(cfg.witness["ends"], vec![0, 1]);
    round_trip(&g, &cfg);
}

#[test]
fn pure_cycle_is_left_alone() {
    let g = fixtures::cycle(9);
    assert_eq!(detect_configuration(&g), None);
    let c = constructive_color(&g).unwrap();
    assert_eq!(is_valid_2distance(&g, &c), Ok(None));
}

#[test]
fn degree_one_drops_the_pendant_edge() {
    let g = fixtures::star(3);
    let cfg = detect_configuration(&g).unwrap();
    assert_eq!(cfg.kind, ConfigKind::DegreeOne);
    let red = round_trip(&g, &cfg);
    assert_eq!(red.h.m(), 2);
}

#[test]
fn counting_pair_removes_edges() {
    let g = parse_graph6("QsAI?SOAH?@@G?A?g??O@C??G?G").unwrap();
    let cfg = detect_configuration(&g).unwrap();
    assert_eq!(cfg.kind, ConfigKind::CountingPair);
    let red = round_trip(&g, &cfg);
    let k = cfg.witness["u"].len();
    assert_eq!(red.h.n(), g.n());
    assert_eq!(red.h.m(), g.m() - k);
}

/// Smallest instance per kind met along reduction chains of the seeded
/// corpus, where the kind is the first to fire.
const HARVESTED: &[(ConfigKind, &str)] = &[
    (ConfigKind::ThreePathBadEnd, "JrPKCE??I?_"),
    (ConfigKind::SmallVertex, "PCUAI?`_A?o?O@O?C?I??G?C"),
    (ConfigKind::SponsorAllBadNeighbors, "TK_HK?`_A?o?G@_?G?K??G?C_??_?H???O?@"),
    (ConfigKind::SponsorManyBridges, "XBaC@COAK?G@_?G?a??O@C??C?K?????CO?@_??A???a???@??@"),
    (ConfigKind::ThreePathCycle, "VCDKAE?OI?C@O?G?o?@?@_????I??K??@??@_??@???_"),
    (ConfigKind::TwoConsecutiveThreePaths, "[A_IK?@GK?C@O?G?o?A?@_?@??K??@??E???O??H???A??@G???C???g???@???@"),
    (
        ConfigKind::SevenSevenTwoPaths,
        "bHG_?C_?GAo?A@_?C?H???OCO??A?K???C?@O???A??o????_?@C????G??K?????_??E?????G???I?????@???@_?????O????_",
    ),
    (
        ConfigKind::TwoPathChord,
        "b?`?`?A?Y??@?P_?G?K??G?D???A?I???@?@@???A??o???C??@_????O??I????C???D?????O???K?????@???@_?????O????_",
    ),
    (
        ConfigKind::WeirdSeven,
        "b??GR_OAK?C@O?A?_O?A@_??C?K??@??E????_?K????_?@_???O???`????A??@C????G???K?????????C@???@A?????A????_",
    ),
];

#[test]
fn harvested_instances() {
    for &(kind, g6) in HARVESTED {
        let g = parse_graph6(g6).unwrap();
        let cfg = detect_configuration(&g).unwrap();
        assert_eq!(cfg.kind, kind);
        round_trip(&g, &cfg);
    }
}

#[test]
fn two_consecutive_adds_a_three_path() {
    let g = parse_graph6(HARVESTED[5].1).unwrap();
    let cfg = detect_configuration(&g).unwrap();
    assert!(cfg.potentials[0].value >= 1);
    let red = round_trip(&g, &cfg);
    assert_eq!(red.candidate, 0);
    assert_eq!(red.added.len(), 1);
    assert_eq!(red.added[0].addition.k, 3);
    assert_eq!(red.h.size(), g.size() - 14 + 7);
}

#[test]
fn three_consecutive_three_paths() {
    let g = hubs(&[7, 7, 7, 7], &[(0, 1, 3), (1, 2, 3), (2, 3, 3)]);
    let cfg = only(&g, ConfigKind::ThreeConsecutiveThreePaths);
    assert_eq!(cfg.paths.len(), 3);
    let red = round_trip(&g, &cfg);
    assert_eq!(red.added.len(), 1);
    assert!(matches!(classify_vertices(&g), Err(ClassifyError::Chain(_))));
}

#[test]
fn weird_six() {
    let runs: Vec<_> = (1..=6).map(|i| (0, i, 2)).collect();
    let g = hubs(&[6; 7], &runs);
    let cfg = only(&g, ConfigKind::WeirdSix);
    let red = round_trip(&g, &cfg);
    assert_eq!(red.removed.len(), 13);
}

#[test]
fn sponsor_with_small_x() {
    // Sponsor 0 with a 3-path to 1, a 2-path to the 5-vertex 2, a direct
    // edge to the 3-vertex 3, and 2-paths to four 7-vertices.
    let mut runs = vec![(0, 1, 3), (0, 2, 2), (0, 3, 0)];
    runs.extend((4..8).map(|h| (0, h, 2)));
    let g = hubs(&[7, 7, 5, 3, 7, 7, 7, 7], &runs);
    let cfg = only(&g, ConfigKind::SponsorWithSmallX);
    assert_eq!(cfg.witness["x"], vec![3]);
    assert_eq!(cfg.witness["u"], vec![0]);
    round_trip(&g, &cfg);
}

#[test]
fn spider_gets_eight_colors() {
    let g = fixtures::spider(7, 1);
    let report = constructive_color_with(&g, &ConstructiveOptions::default()).unwrap();
    let c = report.coloring.unwrap();
    assert_eq!(is_valid_2distance(&g, &c), Ok(None));
    assert_eq!(c.used(), 8);
    assert!(report.audit_failures.is_empty());
}

#[test]
fn refuses_dense_or_high_degree() {
    assert_eq!(constructive_color(&fixtures::star(8)), Err(ConstructiveError::DegreeTooLarge(8)));
    assert_eq!(constructive_color(&fixtures::complete(4)), Err(ConstructiveError::MadTooLarge));
}

#[test]
fn summary_json_shape() {
    let g = hubs(&[3, 3], &[(0, 1, 4)]);
    let cfg = only(&g, ConfigKind::FourPlusPath);
    let json = cfg.summary_json();
    assert_eq!(json["kind"], "FourPlusPath");
    assert!(json["witness"]["paths"].is_array());
    assert!(json["potentials"].is_object());
}

fn corpus_specs() -> Vec<CorpusSpec> {
    let mut specs = CorpusSpec::standard(7);
    specs.push(CorpusSpec::new(Generator::Extremal { min_vertices: 3, max_vertices: 8, fork_share: 20, max_star: 1 }));
    specs
}

fn corpus_graph(family: usize, seed: u64) -> Graph {
    let specs = corpus_specs();
    generate_one(&specs[family % specs.len()], seed, 0).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn detect_reduce_extend(family in 0usize..16, seed in any::<u64>()) {
        let g = corpus_graph(family, seed);
        if let Some(cfg) = detect_configuration(&g) {
            prop_assert_eq!(cfg.validate(&g), Ok(()));
            prop_assert_eq!(detect_configuration(&g), Some(cfg.clone()));
            let red = apply_reduction(&g, &cfg).unwrap();
            prop_assert!(red.h.size() < g.size());
            let ch = constructive_color(&red.h).unwrap();
            let c = extend_coloring(&g, &cfg, &red, &ch).unwrap();
            prop_assert_eq!(is_valid_2distance(&g, &c), Ok(None));
        }
    }

    #[test]
    fn something_fires_at_full_degree(family in 0usize..16, seed in any::<u64>()) {
        let g = corpus_graph(family, seed);
        let (core, _) = g.induced_subgraph(&g.vertices().filter(|&v| g.degree(v) > 0).collect::<Vec<_>>());
        let pure_cycle = core.vertices().all(|v| core.degree(v) == 2);
        if core.max_degree() == DELTA && core.min_degree() >= 2 && !pure_cycle {
            prop_assert!(detect_configuration(&core).is_some());
        }
    }

    #[test]
    fn constructive_is_valid_and_deterministic(family in 0usize..16, seed in any::<u64>()) {
        let g = corpus_graph(family, seed);
        let a = constructive_color_with(&g, &ConstructiveOptions::default()).unwrap();
        prop_assert!(a.audit_failures.is_empty(), "{:?}", a.audit_failures);
        prop_assert!(a.max_depth <= g.size());
        let c = a.coloring.clone().unwrap();
        prop_assert_eq!(is_valid_2distance(&g, &c), Ok(None));
        let b = constructive_color_with(&g, &ConstructiveOptions::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}
