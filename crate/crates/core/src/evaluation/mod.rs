//! Prequential evaluation: the stream → detector → selector → classifier
//! harness, annotation accounting, and the comparison metrics.

mod harness;
mod metrics;

pub use harness::{
    run_prequential, DetectorConfig, DriftEvent, ExperimentReport, HarnessConfig, StepRecord,
    UpdateMode,
};
pub use metrics::{annotation_fraction, avg_diff, hadam};
