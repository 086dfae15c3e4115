//! Shared inputs for the criterion benches.

use sparse2dc_core::corpus::{generate_one, CorpusSpec};
use sparse2dc_core::Graph;

/// `count` graphs of maximum degree 7 under the mad threshold, drawn in
/// turn from the standard families.
pub fn corpus(count: usize, seed: u64) -> Vec<Graph> {
    let specs = CorpusSpec::standard(7);
    (0..count as u64)
        .map(|i| generate_one(&specs[i as usize % specs.len()], seed, i).expect("standard families generate").0)
        .collect()
}
