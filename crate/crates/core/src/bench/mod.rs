//! Replicated evaluation of the classifiers: scenario specifications,
//! the seeded replication harness with its prior-weighted
//! misclassification score, and the measure timing grid.

mod harness;
mod timing;

pub use harness::{
    misclassification_rate, run_benchmark, BenchResult, MethodSpec, MethodSummary, Scenario,
    ScenarioSpec,
};
pub use timing::{time_measures, TimingRow};
