//! The reduction chain as a coloring algorithm: split into components,
//! reduce until a base case, color it exactly, then extend back up.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    apply_reduction, detect_with, extend_coloring_traced, ConfigKind, Configuration, ExtendError, ExtendRoute, Reduction,
    ReductionError, DELTA, PALETTE,
};
use crate::coloring::{color_2distance, is_valid_2distance, Coloring, SearchOutcome};
use crate::graph::{Graph, Vertex};
use crate::io::write_graph6;
use crate::potential::{mad_exact, potential_nonnegative, PotentialParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructiveOptions {
    /// Components with `|V| + |E|` at most this are colored by exact search.
    pub base_size: usize,
    /// Node budget for each exact search.
    pub budget: u64,
    /// Detectors allowed to fire.
    pub enabled: Vec<ConfigKind>,
    /// Re-validate configurations, re-check mad after path additions and
    /// check every extension.
    pub audit: bool,
}

impl Default for ConstructiveOptions {
    fn default() -> Self {
        ConstructiveOptions { base_size: 24, budget: 5_000_000, enabled: ConfigKind::DISPATCH.to_vec(), audit: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructiveReport {
    pub coloring: Option<Coloring>,
    pub reductions: usize,
    pub fired: BTreeMap<String, usize>,
    /// How each extension finished.
    pub routes: BTreeMap<String, usize>,
    /// Reductions that used a candidate after the first.
    pub later_candidates: usize,
    /// Reductions that added at least one path.
    pub with_additions: usize,
    /// Reduced graphs whose mad was re-checked after additions.
    pub mad_rechecks: usize,
    pub base_cases: usize,
    /// Components below maximum degree 7 where nothing fired and exact
    /// search took over.
    pub exact_fallbacks: usize,
    /// Soundness failures found by the audit; empty on a correct run.
    pub audit_failures: Vec<String>,
    pub max_depth: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructiveError {
    #[error("maximum degree {0} exceeds {DELTA}")]
    DegreeTooLarge(usize),
    #[error("mad exceeds 18/7")]
    MadTooLarge,
    #[error("no configuration on a non-base graph with maximum degree {DELTA}: {graph6}")]
    InternalContradiction { graph6: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Extension(#[from] ExtendError),
    #[error("exact search failed on a base case ({0})")]
    Base(String),
}

/// Valid 2-distance coloring with 8 colors of a graph with mad at most 18/7
/// and maximum degree at most 7.
pub fn constructive_color(g: &Graph) -> Result<Coloring, ConstructiveError> {
    let report = constructive_color_with(g, &ConstructiveOptions::default())?;
    Ok(report.coloring.expect("set on success"))
}

pub fn constructive_color_with(g: &Graph, opts: &ConstructiveOptions) -> Result<ConstructiveReport, ConstructiveError> {
    if g.max_degree() > DELTA {
        return Err(ConstructiveError::DegreeTooLarge(g.max_degree()));
    }
    if !potential_nonnegative(g, PotentialParams::default()) {
        return Err(ConstructiveError::MadTooLarge);
    }
    let mut report = ConstructiveReport::default();
    let c = solve(g, opts, &mut report)?;
    report.coloring = Some(c);
    Ok(report)
}

#[allow(clippy::large_enum_variant)]
enum Step {
    Reduce { g: Graph, cfg: Configuration, red: Reduction },
    /// Continue on component `main` (its ids in the parent listed); the
    /// other components are already colored in `partial`.
    Split { main: Vec<Vertex>, partial: Coloring },
}

fn is_base(g: &Graph, opts: &ConstructiveOptions) -> bool {
    g.size() <= opts.base_size || g.vertices().all(|v| g.degree(v) == 2)
}

fn exact(g: &Graph, opts: &ConstructiveOptions) -> Result<Coloring, ConstructiveError> {
    match color_2distance(g, PALETTE, opts.budget) {
        SearchOutcome::Colored(c) => Ok(c),
        other => Err(ConstructiveError::Base(format!("{other:?} on {}", write_graph6(g)))),
    }
}

fn solve(g: &Graph, opts: &ConstructiveOptions, report: &mut ConstructiveReport) -> Result<Coloring, ConstructiveError> {
    let mut steps: Vec<Step> = Vec::new();
    let mut cur = g.clone();
    let mut psi = loop {
        report.max_depth = report.max_depth.max(steps.len());
        let comps = cur.components();
        if comps.len() > 1 {
            let size = |c: &Vec<Vertex>| c.len() + c.iter().map(|&v| cur.degree(v)).sum::<usize>() / 2;
            let main = (0..comps.len()).max_by_key(|&i| (size(&comps[i]), std::cmp::Reverse(i))).expect("nonempty");
            let mut partial = Coloring::empty(cur.n(), PALETTE);
            for (i, comp) in comps.iter().enumerate().filter(|&(i, _)| i != main) {
                let (sub, map) = cur.induced_subgraph(comp);
                let c = if is_base(&sub, opts) {
                    report.base_cases += 1;
                    exact(&sub, opts)?
                } else {
                    solve(&sub, opts, report)?
                };
                debug_assert!(i != main);
                for (j, &x) in map.iter().enumerate() {
                    partial.colors[x] = c.colors[j];
                }
            }
            let (sub, map) = cur.induced_subgraph(&comps[main]);
            steps.push(Step::Split { main: map, partial });
            cur = sub;
            continue;
        }
        if is_base(&cur, opts) {
            report.base_cases += 1;
            break exact(&cur, opts)?;
        }
        let Some(cfg) = detect_with(&cur, &opts.enabled) else {
            if cur.max_degree() == DELTA {
                return Err(ConstructiveError::InternalContradiction { graph6: write_graph6(&cur) });
            }
            report.exact_fallbacks += 1;
            break exact(&cur, opts)?;
        };
        let red = apply_reduction(&cur, &cfg)?;
        if opts.audit {
            audit_reduction(&cur, &cfg, &red, report);
        }
        report.reductions += 1;
        *report.fired.entry(cfg.kind.name().to_string()).or_default() += 1;
        if red.candidate > 0 {
            report.later_candidates += 1;
        }
        if !red.added.is_empty() {
            report.with_additions += 1;
        }
        let h = red.h.clone();
        steps.push(Step::Reduce { g: cur, cfg, red });
        cur = h;
    };
    while let Some(step) = steps.pop() {
        psi = match step {
            Step::Reduce { g, cfg, red } => {
                let (c, route) = extend_coloring_traced(&g, &cfg, &red, &psi)?;
                *report.routes.entry(format!("{route:?}")).or_default() += 1;
                if opts.audit && route == ExtendRoute::Search && !red.recipe.pins.is_empty() {
                    // Pins are hints; the search without them still certifies the step.
                    *report.routes.entry("PinsUnused".into()).or_default() += 1;
                }
                if opts.audit && !matches!(is_valid_2distance(&g, &c), Ok(None)) {
                    report.audit_failures.push(format!("{}: extension is not a valid coloring", cfg.kind));
                }
                c
            }
            Step::Split { main, mut partial } => {
                for (j, &x) in main.iter().enumerate() {
                    partial.colors[x] = psi.colors[j];
                }
                partial
            }
        };
    }
    Ok(psi)
}

fn audit_reduction(g: &Graph, cfg: &Configuration, red: &Reduction, report: &mut ConstructiveReport) {
    if let Err(e) = cfg.validate(g) {
        report.audit_failures.push(format!("{}: {e}", cfg.kind));
    }
    if red.h.size() >= g.size() {
        report.audit_failures.push(format!("{}: reduced graph not smaller", cfg.kind));
    }
    if !red.added.is_empty() && red.h.n() > 0 {
        report.mad_rechecks += 1;
        let ok = mad_exact(&red.h).map(|m| m.value <= Ratio::new(18, 7)).unwrap_or(false);
        if !ok {
            report.audit_failures.push(format!("{}: mad above 18/7 after additions", cfg.kind));
        }
    }
}
