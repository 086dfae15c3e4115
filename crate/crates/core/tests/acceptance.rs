//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Thresholds and corpus sizes are pinned below.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sparse2dc_core::coloring::{chi2_exact, hall_check, hall_check_bruteforce, is_valid_2distance, Color};
use sparse2dc_core::corpus::{generate_one, CorpusSpec};
use sparse2dc_core::discharging::{
    case_floor, floor_failures, floor_fixtures, run_discharge, verify_ledger, RuleAmounts,
};
use sparse2dc_core::fixtures;
use sparse2dc_core::graph::cycle_components;
use sparse2dc_core::potential::{mad_bruteforce, mad_exact, rho_star, rho_star_bruteforce, verify_potential_laws};
use sparse2dc_core::reductions::{
    apply_reduction, classify_vertices, constructive_color_with, detect_configuration, extend_coloring, ConstructiveError,
    ConstructiveOptions,
};
use sparse2dc_core::{Graph, PotentialParams, VertexSet};

const SEED: u64 = 20_260_415;
const BUDGET: u64 = 20_000_000;

const MOORE_LIMIT: Duration = Duration::from_secs(10);
const RHO_GRAPHS: usize = 500;
const RHO_MAX_N: usize = 14;
const RHO_LIMIT: Duration = Duration::from_secs(60);
const MAD_GRAPHS: usize = 300;
const MAD_MAX_N: usize = 12;
const MAD_LIMIT: Duration = Duration::from_secs(60);
const LAW_INSTANCES: usize = 10_000;
const CORPUS_PER_FAMILY: usize = 150;
const HIGH_DEGREE_PER_DELTA: usize = 100;
const THEOREM_LIMIT: Duration = Duration::from_secs(30 * 60);
const HALL_SYSTEMS: usize = 10_000;
const HALL_MAX_LISTS: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn moore_fixtures() -> Outcome {
    let mut slow = Vec::new();
    let mut wrong = Vec::new();
    for (name, g, want) in [
        ("C5", fixtures::cycle(5), 5),
        ("Petersen", fixtures::petersen(), 10),
        ("Hoffman-Singleton", fixtures::hoffman_singleton(), 50),
    ] {
        let t = Instant::now();
        let got = chi2_exact(&g, BUDGET).exact();
        if t.elapsed() > MOORE_LIMIT {
            slow.push(name);
        }
        if got != Some(want) {
            wrong.push(format!("{name}: {got:?}"));
        }
    }
    outcome(slow.is_empty() && wrong.is_empty(), format!("chi2 = 5, 10, 50; wrong {wrong:?}, over 10 s {slow:?}"))
}

fn rho_oracle() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..RHO_GRAPHS {
        let g = random_graph(&mut rng, RHO_MAX_N);
        let mask: Vec<bool> = (0..g.n()).map(|_| rng.gen_bool(0.3)).collect();
        let a = VertexSet::from_mask(&mask);
        let p = PotentialParams::default();
        if rho_star(&g, &a, p).unwrap().value != rho_star_bruteforce(&g, &a, p).unwrap().value {
            mismatches += 1;
        }
    }
    let dt = t.elapsed();
    outcome(mismatches == 0 && dt < RHO_LIMIT, format!("{RHO_GRAPHS} graphs, {mismatches} mismatches, {dt:.1?}"))
}

fn mad_oracle() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut mismatches = 0;
    for _ in 0..MAD_GRAPHS {
        let g = random_graph(&mut rng, MAD_MAX_N);
        if mad_exact(&g).unwrap().value != mad_bruteforce(&g).unwrap() {
            mismatches += 1;
        }
    }
    let dt = t.elapsed();
    outcome(mismatches == 0 && dt < MAD_LIMIT, format!("{MAD_GRAPHS} graphs, {mismatches} mismatches, {dt:.1?}"))
}

fn potential_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let (mut total, mut violations) = (0, 0);
    while total < LAW_INSTANCES {
        let g = random_graph(&mut rng, 10);
        let r = verify_potential_laws(&g, 5, &mut rng);
        total += r.total();
        violations += r.violations.len();
    }
    outcome(violations == 0, format!("{total} instances, {violations} violations"))
}

/// Everything checked on one corpus graph of maximum degree 7.
#[derive(Default)]
struct Checked {
    theorem_failures: Vec<String>,
    coverage_failures: Vec<String>,
    contradictions: usize,
    ledger_failures: Vec<String>,
    ledgers: usize,
    soundness_failures: Vec<String>,
    reductions: usize,
    additions: usize,
}

fn check_seven(g: &Graph, tag: &str) -> Checked {
    let mut c = Checked::default();
    let opts = ConstructiveOptions { budget: BUDGET, ..ConstructiveOptions::default() };
    match constructive_color_with(g, &opts) {
        Ok(report) => {
            let col = report.coloring.as_ref().unwrap();
            if is_valid_2distance(g, col) != Ok(None) || col.used() > 8 {
                c.theorem_failures.push(format!("{tag}: constructive coloring invalid"));
            }
            c.reductions += report.reductions;
            c.additions += report.mad_rechecks;
            c.soundness_failures.extend(report.audit_failures.iter().map(|f| format!("{tag}: {f}")));
            match chi2_exact(g, BUDGET).exact() {
                Some(8) => {}
                other => c.theorem_failures.push(format!("{tag}: chi2 {other:?}")),
            }
        }
        Err(e) => {
            if matches!(e, ConstructiveError::InternalContradiction { .. }) {
                c.contradictions += 1;
            }
            c.theorem_failures.push(format!("{tag}: {e}"));
        }
    }

    let pure_cycle = cycle_components(g).iter().map(Vec::len).sum::<usize>() == g.n();
    let cfg = detect_configuration(g);
    if g.min_degree() >= 2 && !pure_cycle && cfg.is_none() {
        c.coverage_failures.push(tag.to_string());
    }

    // One explicit top-level step, independent of the constructive audit.
    if let Some(cfg) = cfg {
        match apply_reduction(g, &cfg) {
            Ok(red) => {
                c.reductions += 1;
                if red.h.size() >= g.size() {
                    c.soundness_failures.push(format!("{tag}: {} did not shrink", cfg.kind));
                }
                if !red.added.is_empty() {
                    c.additions += 1;
                    if mad_exact(&red.h).unwrap().value > Ratio::new(18, 7) {
                        c.soundness_failures.push(format!("{tag}: {} pushed mad over 18/7", cfg.kind));
                    }
                }
                match constructive_color_with(&red.h, &opts) {
                    Ok(rep) => match extend_coloring(g, &cfg, &red, rep.coloring.as_ref().unwrap()) {
                        Ok(col) if is_valid_2distance(g, &col) == Ok(None) => {}
                        Ok(_) => c.soundness_failures.push(format!("{tag}: {} extension invalid", cfg.kind)),
                        Err(e) => c.soundness_failures.push(format!("{tag}: {} extension failed: {e}", cfg.kind)),
                    },
                    Err(e) => c.soundness_failures.push(format!("{tag}: reduced graph: {e}")),
                }
            }
            Err(e) => c.soundness_failures.push(format!("{tag}: {} refused: {e}", cfg.kind)),
        }
    }

    if let Ok(ledger) = run_discharge(g) {
        c.ledgers += 1;
        let expected = 2 * (14 * g.m() as i64 - 18 * g.n() as i64);
        let report = verify_ledger(g, &ledger).unwrap();
        if ledger.sum_halves != expected || ledger.final_charge.iter().sum::<i64>() != expected || !report.ok() {
            c.ledger_failures.push(tag.to_string());
        }
    }
    c
}

struct CorpusRun {
    seven: usize,
    high: usize,
    high_failures: Vec<String>,
    checked: Checked,
    elapsed: Duration,
    generator_failures: Vec<String>,
}

fn corpus_run() -> CorpusRun {
    let t = Instant::now();
    let specs = CorpusSpec::standard(7);
    let jobs: Vec<(usize, u64)> = (0..specs.len()).flat_map(|s| (0..CORPUS_PER_FAMILY as u64).map(move |i| (s, i))).collect();
    let results: Vec<Result<Checked, String>> = jobs
        .par_iter()
        .map(|&(s, i)| {
            let spec = &specs[s];
            let (g, _) = generate_one(spec, SEED, i).map_err(|e| e.to_string())?;
            Ok(check_seven(&g, &format!("{}#{i}", spec.generator.label())))
        })
        .collect();
    let mut checked = Checked::default();
    let mut generator_failures = Vec::new();
    let mut seven = 0;
    for r in results {
        match r {
            Ok(c) => {
                seven += 1;
                checked.theorem_failures.extend(c.theorem_failures);
                checked.coverage_failures.extend(c.coverage_failures);
                checked.contradictions += c.contradictions;
                checked.ledger_failures.extend(c.ledger_failures);
                checked.ledgers += c.ledgers;
                checked.soundness_failures.extend(c.soundness_failures);
                checked.reductions += c.reductions;
                checked.additions += c.additions;
            }
            Err(e) => generator_failures.push(e),
        }
    }

    // Maximum degree 8 and 9 under the strict bound.
    let threshold = Ratio::new(18, 7);
    let mut high = 0;
    let mut high_failures = Vec::new();
    for delta in [8, 9] {
        let specs = CorpusSpec::standard(delta);
        let found: Vec<Option<String>> = (0..(4 * HIGH_DEGREE_PER_DELTA) as u64)
            .into_par_iter()
            .filter_map(|i| {
                let spec = &specs[i as usize % specs.len()];
                let (g, _) = generate_one(spec, SEED + delta as u64, i).ok()?;
                (mad_exact(&g).unwrap().value < threshold).then(|| {
                    let got = chi2_exact(&g, BUDGET).exact();
                    (got != Some(delta as u32 + 1)).then(|| format!("Δ={delta} {}#{i}: chi2 {got:?}", spec.generator.label()))
                })
            })
            .collect();
        let take = found.len().min(HIGH_DEGREE_PER_DELTA);
        high += take;
        high_failures.extend(found.into_iter().take(take).flatten());
    }
    CorpusRun { seven, high, high_failures, checked, elapsed: t.elapsed(), generator_failures }
}

fn theorem(run: &CorpusRun) -> Outcome {
    let c = &run.checked;
    let pass = run.seven >= 1000
        && run.high >= 200
        && c.theorem_failures.is_empty()
        && run.high_failures.is_empty()
        && run.generator_failures.is_empty()
        && run.elapsed < THEOREM_LIMIT;
    outcome(
        pass,
        format!(
            "{} graphs at Δ=7, {} at Δ∈{{8,9}}; failures {:?} {:?}; generator gave up {}; {:.1?}",
            run.seven,
            run.high,
            c.theorem_failures.iter().take(3).collect::<Vec<_>>(),
            run.high_failures.iter().take(3).collect::<Vec<_>>(),
            run.generator_failures.len(),
            run.elapsed
        ),
    )
}

fn coverage(run: &CorpusRun) -> Outcome {
    let c = &run.checked;
    outcome(
        c.coverage_failures.is_empty() && c.contradictions == 0,
        format!("{} graphs, {} without a configuration, {} contradictions", run.seven, c.coverage_failures.len(), c.contradictions),
    )
}

fn discharging(run: &CorpusRun) -> Outcome {
    let c = &run.checked;
    let amounts = RuleAmounts::default();
    let mut fixture_failures: Vec<String> = floor_fixtures().iter().flat_map(|fx| floor_failures(fx, &amounts)).collect();

    // The printed arithmetic: 2-vertices at 0, a non-sponsor 3-path end
    // at one half, a (1-,0,0) 3-vertex at one.
    let expect = [("balanced", 9, 0), ("root-end", 0, 1), ("one-zero-zero", 0, 2)];
    for (name, v, halves) in expect {
        let fx = floor_fixtures().into_iter().find(|f| f.name == name).unwrap();
        let ledger = run_discharge(&fx.graph).unwrap();
        let classes = classify_vertices(&fx.graph).unwrap();
        let floor = case_floor(&fx.graph, &classes, v).floor;
        if ledger.final_charge[v] != halves || floor != Some(halves) {
            fixture_failures.push(format!("{name}: vertex {v} ends at {}/2, floor {floor:?}", ledger.final_charge[v]));
        }
    }
    outcome(
        c.ledger_failures.is_empty() && fixture_failures.is_empty(),
        format!(
            "{} ledgers, {} off; fixture floors {:?}",
            c.ledgers,
            c.ledger_failures.len(),
            fixture_failures
        ),
    )
}

fn mutation() -> Outcome {
    let fixtures = floor_fixtures();
    let mut survivors = Vec::new();
    let mut mutants = 0;
    for delta in [-1, 1] {
        for idx in 0..12 {
            let mut amounts = RuleAmounts::default();
            let name = {
                let slots = amounts.rule_amounts_mut();
                *slots[idx].2 += delta;
                slots[idx].1
            };
            mutants += 1;
            if fixtures.iter().all(|fx| floor_failures(fx, &amounts).is_empty()) {
                survivors.push(format!("{name}{delta:+}"));
            }
        }
    }
    outcome(survivors.is_empty(), format!("{mutants} mutants, survivors {survivors:?}"))
}

fn hall() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut mismatches = 0;
    for _ in 0..HALL_SYSTEMS {
        let lists: Vec<Vec<Color>> = (0..rng.gen_range(1..=HALL_MAX_LISTS))
            .map(|_| (1..=8).filter(|_| rng.gen_bool(0.3)).collect())
            .collect();
        if hall_check(&lists) != hall_check_bruteforce(&lists) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{HALL_SYSTEMS} list systems, {mismatches} mismatches"))
}

fn soundness(run: &CorpusRun) -> Outcome {
    let c = &run.checked;
    outcome(
        c.soundness_failures.is_empty() && c.reductions > 0,
        format!(
            "{} reductions, {} with added paths re-checked, failures {:?}",
            c.reductions,
            c.additions,
            c.soundness_failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn main() {
    // Honor `cargo test -- --list` and filters without running the suite.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return;
        }
    }

    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    let mut record = |id, name, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!("{} {id:>2} {name}: {} [{:.1?}]", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed());
        results.push((id, name, o));
    };
    record(1, "moore fixtures", &moore_fixtures);
    record(2, "rho* oracle", &rho_oracle);
    record(3, "mad oracle", &mad_oracle);
    record(4, "potential laws", &potential_laws);
    let run = corpus_run();
    record(5, "theorem on corpus", &|| theorem(&run));
    record(6, "coverage", &|| coverage(&run));
    record(7, "discharging exactness", &|| discharging(&run));
    record(8, "mutation sensitivity", &mutation);
    record(9, "hall check", &hall);
    record(10, "reduction soundness", &|| soundness(&run));

    let failed: Vec<u8> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::exit(1);
    }
}
