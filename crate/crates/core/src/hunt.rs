//! Counterexample hunting over seeded corpora, with optional mutants to
//! show the checks have teeth.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{generate_one, CorpusSpec};
use crate::discharging::{balanced, floor_failures, floor_fixtures, run_discharge_with, verify_ledger, Halves, RuleAmounts};
use crate::fixtures::{hubs, Padding};
use crate::graph::{cycle_components, Graph};
use crate::io::write_graph6;
use crate::reductions::{detect_with, ConfigKind, ConstructiveOptions, DELTA};
use crate::verify::{verify_theorem_with, Verdict};

/// A deliberate defect injected into the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mutant", rename_all = "snake_case")]
pub enum Mutant {
    DisableDetectors { kinds: Vec<ConfigKind> },
    /// Shift one rule amount (named as in [`RuleAmounts::rule_amounts_mut`]).
    ShiftAmount { amount: String, halves: Halves },
}

impl Mutant {
    pub fn enabled(&self) -> Vec<ConfigKind> {
        let off: &[ConfigKind] = match self {
            Mutant::DisableDetectors { kinds } => kinds,
            Mutant::ShiftAmount { .. } => &[],
        };
        ConfigKind::DISPATCH.into_iter().filter(|k| !off.contains(k)).collect()
    }

    /// Rule amounts under this mutant; `None` for an unknown amount name.
    pub fn amounts(&self) -> Option<RuleAmounts> {
        let mut a = RuleAmounts::default();
        if let Mutant::ShiftAmount { amount, halves } = self {
            let mut slots = a.rule_amounts_mut();
            let slot = slots.iter_mut().find(|(_, name, _)| name == amount)?;
            *slot.2 += halves;
        }
        Some(a)
    }

    /// CLI flags reproducing this mutant.
    pub fn flags(&self) -> String {
        match self {
            Mutant::DisableDetectors { kinds } => {
                format!(" --disable {}", kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(","))
            }
            Mutant::ShiftAmount { amount, halves } => format!(" --shift {amount}={halves}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HuntOptions {
    pub seed: u64,
    /// Generated instances; crafted ones come on top.
    pub count: usize,
    pub budget: u64,
    pub specs: Vec<CorpusSpec>,
    pub mutant: Option<Mutant>,
}

impl HuntOptions {
    pub fn new(seed: u64, count: usize, budget: u64) -> Self {
        HuntOptions { seed, count, budget, specs: CorpusSpec::standard(DELTA), mutant: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Hypotheses hold but `χ² != Δ + 1`.
    Theorem,
    /// The constructive coloring failed or was invalid.
    Constructive,
    /// No configuration on a graph that must contain one.
    Coverage,
    /// The charge ledger broke conservation or an unexplained floor.
    Discharging,
    /// A floor fixture left its floor.
    Floor,
}

/// A violation together with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub source: String,
    pub property: Property,
    pub detail: String,
    pub graph6: String,
    /// Shell command re-checking the property on `<stem>.g6`.
    pub replay: String,
    pub stem: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntReport {
    pub seed: u64,
    pub instances: usize,
    pub crafted: usize,
    pub inconclusive: usize,
    pub mutant: Option<Mutant>,
    /// First configuration found on each instance, by kind.
    pub fired: BTreeMap<String, usize>,
    pub findings: Vec<Finding>,
}

struct Outcome {
    fired: Option<ConfigKind>,
    inconclusive: bool,
    findings: Vec<Finding>,
}

/// Two 7-vertices joined by seven 4-paths.
pub fn four_path_bundle() -> Graph {
    hubs(&[7, 7], &[(0, 1, 4); 7], Padding::Leaves)
}

fn crafted() -> Vec<(&'static str, Graph)> {
    vec![("four-path-bundle", four_path_bundle()), ("balanced", balanced())]
}

pub fn hunt(opts: &HuntOptions) -> HuntReport {
    let mutant = opts.mutant.clone();
    let enabled = mutant.as_ref().map_or_else(|| ConfigKind::DISPATCH.to_vec(), Mutant::enabled);
    let amounts = mutant.as_ref().map_or_else(|| Some(RuleAmounts::default()), Mutant::amounts).unwrap_or_default();
    let flags = mutant.as_ref().map(Mutant::flags).unwrap_or_default();
    let ctx = Ctx { budget: opts.budget, enabled: &enabled, amounts: &amounts, flags: &flags };

    let generated: Vec<Outcome> = (0..opts.count as u64)
        .into_par_iter()
        .map(|i| {
            let spec = &opts.specs[i as usize % opts.specs.len()];
            let source = format!("{}#{}#{}", spec.generator.label(), opts.seed, i);
            match generate_one(spec, opts.seed, i) {
                Ok((g, _)) => ctx.check(&g, &source, &format!("{}-{}-{i}", spec.generator.label(), opts.seed)),
                // Generator gave up: nothing to check, nothing claimed.
                Err(_) => Outcome { fired: None, inconclusive: true, findings: Vec::new() },
            }
        })
        .collect();
    let crafted_graphs = crafted();
    let mut outcomes = generated;
    for (name, g) in &crafted_graphs {
        outcomes.push(ctx.check(g, name, &format!("crafted-{name}")));
    }

    let mut findings = Vec::new();
    let mut fired = BTreeMap::new();
    let mut inconclusive = 0;
    for o in outcomes {
        if let Some(k) = o.fired {
            *fired.entry(k.name().to_string()).or_insert(0) += 1;
        }
        inconclusive += o.inconclusive as usize;
        findings.extend(o.findings);
    }
    for fx in floor_fixtures() {
        let stem = format!("floor-{}", fx.name);
        for detail in floor_failures(&fx, &amounts) {
            findings.push(Finding {
                source: fx.name.to_string(),
                property: Property::Floor,
                detail,
                graph6: write_graph6(&fx.graph),
                replay: format!("sparse2dc discharge --input {stem}.g6{flags}"),
                stem: stem.clone(),
            });
        }
    }
    HuntReport {
        seed: opts.seed,
        instances: opts.count,
        crafted: crafted_graphs.len(),
        inconclusive,
        mutant,
        fired,
        findings,
    }
}

struct Ctx<'a> {
    budget: u64,
    enabled: &'a [ConfigKind],
    amounts: &'a RuleAmounts,
    flags: &'a str,
}

impl Ctx<'_> {
    fn check(&self, g: &Graph, source: &str, stem: &str) -> Outcome {
        let mut findings = Vec::new();
        let mut find = |property, detail: String, cmd: &str| {
            findings.push(Finding {
                source: source.to_string(),
                property,
                detail,
                graph6: write_graph6(g),
                replay: format!("sparse2dc {cmd} --input {stem}.g6{}", self.flags),
                stem: stem.to_string(),
            });
        };
        let opts = ConstructiveOptions { budget: self.budget, enabled: self.enabled.to_vec(), ..ConstructiveOptions::default() };
        let v = verify_theorem_with(g, false, &opts);
        let budget = self.budget;
        if v.conclusion == Some(false) {
            find(Property::Theorem, format!("chi2 in [{}, {}], Δ = {}", v.chi2_lower, v.chi2_upper, v.max_degree), &format!("verify --budget {budget}"));
        }
        if let Some(c) = v.constructive.as_ref().filter(|c| !c.valid) {
            let detail = c.error.clone().unwrap_or_else(|| "invalid coloring".into());
            find(Property::Constructive, detail, &format!("color --constructive --budget {budget}"));
        }
        let pure_cycle = cycle_components(g).iter().map(Vec::len).sum::<usize>() == g.n();
        let fired = detect_with(g, self.enabled).map(|c| c.kind);
        let must_fire = v.mad_at_most_18_7 && g.max_degree() == DELTA && g.min_degree() >= 2 && !pure_cycle;
        if must_fire && fired.is_none() {
            find(Property::Coverage, "no configuration".into(), "find-config");
        }
        if let Ok(ledger) = run_discharge_with(g, self.amounts) {
            let report = verify_ledger(g, &ledger).expect("precheck passed above");
            if !report.ok() {
                let detail = serde_json::to_string(&report).expect("report serializes");
                find(Property::Discharging, detail, "discharge");
            }
        }
        Outcome { fired, inconclusive: v.verdict == Verdict::Inconclusive, findings }
    }
}

/// Writes `<stem>.g6` and `<stem>.json` per finding, numbering repeats.
pub fn persist_findings(dir: &Path, findings: &[Finding]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (i, f) in findings.iter().enumerate() {
        fs::write(dir.join(format!("{}.g6", f.stem)), format!("{}\n", f.graph6))?;
        let json = serde_json::to_string_pretty(f).expect("finding serializes");
        fs::write(dir.join(format!("{}.{i}.json", f.stem)), json + "\n")?;
    }
    Ok(())
}
