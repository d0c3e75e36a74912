//! Synthetic drift streams and dataset loaders.
//!
//! Generators are seeded and reproducible: the same spec yields a
//! bit-identical stream. Each generated element is a [`TaggedSample`]
//! carrying ground-truth concept and noise tags; the tags exist for
//! evaluation and tests only — detectors and selectors accept plain
//! [`Sample`]s, so the type boundary keeps the truth channel out of the
//! pipeline.

mod arff;
mod csv;
mod generators;

pub use arff::load_arff;
pub use csv::{load_csv, CsvOptions};
pub use generators::{gen_hyperplane, gen_rbf_switch, gen_sea, HyperplaneSpec, RbfSwitchSpec, SeaSpec};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::scalar::Scalar;

/// A sample plus generator ground truth.
#[derive(Debug, Clone)]
pub struct TaggedSample<S: Scalar> {
    sample: Sample<S>,
    pub concept_id: usize,
    pub is_noise: bool,
}

impl<S: Scalar> TaggedSample<S> {
    pub fn new(sample: Sample<S>, concept_id: usize, is_noise: bool) -> Self {
        TaggedSample {
            sample,
            concept_id,
            is_noise,
        }
    }

    pub fn sample(&self) -> &Sample<S> {
        &self.sample
    }

    pub fn into_sample(self) -> Sample<S> {
        self.sample
    }
}

/// Drop the truth tags, producing the stream detectors are allowed to see.
pub fn strip_tags<S: Scalar>(stream: &[TaggedSample<S>]) -> Vec<Sample<S>> {
    stream.iter().map(|t| t.sample.clone()).collect()
}

/// How one concept hands over to the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    Abrupt,
    /// Old and new concepts interleave: over the `width` samples following
    /// the drift index, each sample is drawn from the new concept with a
    /// probability ramping linearly from ~0 to ~1.
    Gradual { width: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DriftPoint {
    pub at_index: usize,
    pub transition: Transition,
}

/// Ordered drift checkpoints defining the concept sequence of a stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DriftSchedule {
    pub points: Vec<DriftPoint>,
}

impl DriftSchedule {
    pub fn none() -> Self {
        DriftSchedule { points: Vec::new() }
    }

    pub fn abrupt(indices: &[usize]) -> Self {
        DriftSchedule {
            points: indices
                .iter()
                .map(|&at_index| DriftPoint {
                    at_index,
                    transition: Transition::Abrupt,
                })
                .collect(),
        }
    }

    pub fn gradual(indices: &[usize], width: usize) -> Self {
        DriftSchedule {
            points: indices
                .iter()
                .map(|&at_index| DriftPoint {
                    at_index,
                    transition: Transition::Gradual { width },
                })
                .collect(),
        }
    }

    pub fn validate(&self, stream_length: usize) -> Result<()> {
        let mut previous_end = 0usize;
        let mut previous_at: Option<usize> = None;
        for point in &self.points {
            if let Some(prev) = previous_at {
                if point.at_index <= prev {
                    return Err(Error::InvalidSchedule(format!(
                        "drift indices must be strictly increasing ({} after {})",
                        point.at_index, prev
                    )));
                }
            }
            if point.at_index >= stream_length {
                return Err(Error::InvalidSchedule(format!(
                    "drift index {} is beyond the stream length {}",
                    point.at_index, stream_length
                )));
            }
            if point.at_index < previous_end {
                return Err(Error::InvalidSchedule(format!(
                    "transition starting at {} overlaps the previous gradual window",
                    point.at_index
                )));
            }
            match point.transition {
                Transition::Abrupt => previous_end = point.at_index,
                Transition::Gradual { width } => {
                    if width == 0 {
                        return Err(Error::InvalidSchedule(
                            "gradual width must be positive".into(),
                        ));
                    }
                    previous_end = point.at_index + width;
                }
            }
            previous_at = Some(point.at_index);
        }
        Ok(())
    }

    /// Concept ordinal at `t` with per-sample Bernoulli mixing inside
    /// gradual windows; draws from `rng` only inside a transition.
    pub fn concept_mixed(&self, t: usize, rng: &mut ChaCha8Rng) -> usize {
        let mut concept = 0usize;
        for point in &self.points {
            if t < point.at_index {
                break;
            }
            match point.transition {
                Transition::Abrupt => concept += 1,
                Transition::Gradual { width } => {
                    let offset = t - point.at_index;
                    if offset >= width {
                        concept += 1;
                    } else {
                        let p_new = (offset + 1) as f64 / (width + 1) as f64;
                        if rng.gen_bool(p_new) {
                            concept += 1;
                        }
                        // Inside a transition window only the active pair
                        // mixes; later checkpoints cannot have started.
                        break;
                    }
                }
            }
        }
        concept
    }

    /// Concept ordinal at `t` treating every checkpoint as a step function;
    /// used where the checkpoint is pure bookkeeping.
    pub fn concept_step(&self, t: usize) -> usize {
        self.points.iter().filter(|p| t >= p.at_index).count()
    }
}
