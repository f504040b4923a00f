//! Shared inputs for the pipeline benchmarks.

use hilbchow::construct::VarietyData;
use hilbchow::oracles::builtin;

/// Varieties small enough to benchmark every stage on.
pub const BENCH_INPUTS: [&str; 3] = ["P1", "P2", "P1xP1"];

pub fn input(name: &str) -> VarietyData {
    builtin(name).expect("benchmark inputs are built in")
}
