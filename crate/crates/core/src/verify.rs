//! End-to-end check of the coloring theorem on a single graph.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::coloring::{chi2_with_hint, is_valid_2distance, Chi2};
use crate::corpus::format_ratio;
use crate::graph::{check_girth_mad_bound, girth, Graph};
use crate::potential::mad_exact;
use crate::reductions::{constructive_color_with, ConstructiveOptions, DELTA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Hypotheses hold and the square needs exactly `Δ + 1` colors.
    Confirmed,
    /// Hypotheses hold and the conclusion failed.
    Violated,
    /// Hypotheses fail; nothing is claimed.
    Silent,
    /// Hypotheses hold but a budget ran out before a decision.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructiveStatus {
    pub valid: bool,
    pub colors: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationVerdict {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub girth: Option<usize>,
    pub mad: String,
    pub mad_at_most_18_7: bool,
    pub mad_below_18_7: bool,
    pub degree_at_least_7: bool,
    /// `mad <= 18/7` with `Δ = 7`, or `mad < 18/7` with `Δ >= 7`.
    pub hypotheses: bool,
    pub chi2_lower: u32,
    pub chi2_upper: u32,
    /// `χ² = Δ + 1`; only set when the hypotheses hold and χ² is decided.
    pub conclusion: Option<bool>,
    /// Run when `Δ = 7` and `mad <= 18/7`.
    pub constructive: Option<ConstructiveStatus>,
    pub girth_at_least_9: bool,
    pub planar_asserted: bool,
    /// For a graph asserted planar, whether `(mad - 2)(g - 2) < 4` holds.
    pub planar_consistent: Option<bool>,
    pub verdict: Verdict,
}

pub fn verify_theorem(g: &Graph, assert_planar: bool, budget: u64) -> VerificationVerdict {
    let opts = ConstructiveOptions { budget, ..ConstructiveOptions::default() };
    verify_theorem_with(g, assert_planar, &opts)
}

/// As [`verify_theorem`], with the constructive run configured by `opts`;
/// `opts.budget` also bounds the exact solver.
pub fn verify_theorem_with(g: &Graph, assert_planar: bool, opts: &ConstructiveOptions) -> VerificationVerdict {
    let budget = opts.budget;
    let mad = if g.m() == 0 {
        Ratio::from_integer(0)
    } else {
        mad_exact(g).map(|r| r.value).unwrap_or_else(|_| Ratio::from_integer(0))
    };
    let bound = Ratio::new(18, 7);
    let delta = g.max_degree();
    let gi = girth(g);
    let mad_at_most = mad <= bound;
    let mad_below = mad < bound;
    let hypotheses = (mad_at_most && delta == DELTA) || (mad_below && delta >= DELTA);

    let mut hint = None;
    let constructive = (mad_at_most && delta == DELTA).then(|| {
        match constructive_color_with(g, opts) {
            Ok(report) => {
                let c = report.coloring.expect("set on success");
                let valid = is_valid_2distance(g, &c) == Ok(None) && report.audit_failures.is_empty();
                let colors = c.used();
                if valid {
                    hint = Some(c);
                }
                ConstructiveStatus { valid, colors, error: None }
            }
            Err(e) => ConstructiveStatus { valid: false, colors: 0, error: Some(e.to_string()) },
        }
    });
    let chi2 = chi2_with_hint(g, budget, hint.as_ref());
    let (lower, upper) = chi2.bounds();
    let target = delta as u32 + 1;
    let conclusion = match (&chi2, hypotheses) {
        (_, false) => None,
        (Chi2::Exact { value, .. }, true) => Some(*value == target),
        // An interval already above the target settles it.
        (Chi2::Interval { lower, .. }, true) if *lower > target => Some(false),
        (Chi2::Interval { upper, .. }, true) if *upper == target => Some(true),
        _ => None,
    };
    let constructive_ok = constructive.as_ref().is_none_or(|s| s.valid);
    let verdict = if !hypotheses {
        Verdict::Silent
    } else if conclusion == Some(false) || !constructive_ok {
        Verdict::Violated
    } else if conclusion == Some(true) {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive
    };
    VerificationVerdict {
        n: g.n(),
        m: g.m(),
        max_degree: delta,
        girth: gi,
        mad: format_ratio(mad),
        mad_at_most_18_7: mad_at_most,
        mad_below_18_7: mad_below,
        degree_at_least_7: delta >= DELTA,
        hypotheses,
        chi2_lower: lower,
        chi2_upper: upper,
        conclusion,
        constructive,
        girth_at_least_9: gi.is_none_or(|x| x >= 9),
        planar_asserted: assert_planar,
        planar_consistent: assert_planar.then(|| gi.is_none_or(|x| check_girth_mad_bound(mad, x))),
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const BUDGET: u64 = 5_000_000;

    #[test]
    fn spider_confirms() {
        let v = verify_theorem(&fixtures::spider(7, 1), false, BUDGET);
        assert!(v.hypotheses);
        assert_eq!(v.verdict, Verdict::Confirmed);
        assert_eq!((v.chi2_lower, v.chi2_upper), (8, 8));
        assert_eq!(v.girth, None);
        assert!(v.constructive.unwrap().valid);
    }

    #[test]
    fn petersen_is_silent() {
        let v = verify_theorem(&fixtures::petersen(), false, BUDGET);
        assert!(!v.hypotheses);
        assert_eq!(v.mad, "3");
        assert_eq!(v.conclusion, None);
        assert_eq!(v.chi2_upper, 10);
        assert_eq!(v.verdict, Verdict::Silent);
    }

    #[test]
    fn cycle_is_silent() {
        let v = verify_theorem(&fixtures::cycle(9), true, BUDGET);
        assert_eq!(v.verdict, Verdict::Silent);
        assert_eq!(v.chi2_upper, 3);
        assert_eq!(v.planar_consistent, Some(true));
    }

    #[test]
    fn planarity_claim_checked_against_girth() {
        // Girth 5 with mad 7 cannot be planar; Petersen slips under the bound.
        let v = verify_theorem(&fixtures::hoffman_singleton(), true, 1);
        assert_eq!(v.planar_consistent, Some(false));
        let v = verify_theorem(&fixtures::petersen(), true, BUDGET);
        assert_eq!(v.planar_consistent, Some(true));
    }
}
