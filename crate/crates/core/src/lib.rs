//! Streaming concept-drift toolkit.
//!
//! The crate wires four layers together:
//!
//! * [`learners`] — from-scratch incremental and batch learners (logistic
//!   regression, a ν-one-class SVM with RBF kernel, a Hoeffding tree) used
//!   both as drift statistics and as stream classifiers,
//! * [`detectors`] — windowed unsupervised drift detectors: D3, which tests
//!   whether a discriminator separates an old sub-window from a new one, and
//!   OCDD, which tracks the one-class outlier rate of a sliding window,
//! * [`suds`] — post-detection sample selection: baseline selectors that take
//!   the newest block of the window, and selectors that extract a homogeneous
//!   new-distribution subset for retraining,
//! * [`evaluation`] — the prequential (interleaved test-then-train) harness
//!   plus metrics: accuracy, annotation accounting, HADAM and average
//!   difference.
//!
//! [`streams`] provides seeded synthetic stream generators with ground-truth
//! concept tags, and CSV/ARFF loaders for external benchmark datasets.
//!
//! All numeric code is generic over the [`Scalar`] floating-point type;
//! `*32`/`*64` aliases for the common instantiations live at the crate root.

pub mod detectors;
pub mod error;
pub mod evaluation;
pub mod learners;
pub mod sample;
pub mod scalar;
pub mod streams;
pub mod suds;
pub mod window;

pub use error::{Error, Result};
pub use sample::{ClassId, Sample};
pub use scalar::Scalar;

pub type Sample32 = sample::Sample<f32>;
pub type Sample64 = sample::Sample<f64>;
pub type SlidingWindow32 = window::SlidingWindow<f32>;
pub type SlidingWindow64 = window::SlidingWindow<f64>;
pub type LogisticModel32 = learners::LogisticModel<f32>;
pub type LogisticModel64 = learners::LogisticModel<f64>;
pub type OneClassSvm32 = learners::OneClassSvm<f32>;
pub type OneClassSvm64 = learners::OneClassSvm<f64>;
pub type HoeffdingTree32 = learners::HoeffdingTree<f32>;
pub type HoeffdingTree64 = learners::HoeffdingTree<f64>;
pub type D3Detector32 = detectors::D3Detector<f32>;
pub type D3Detector64 = detectors::D3Detector<f64>;
pub type OcddDetector32 = detectors::OcddDetector<f32>;
pub type OcddDetector64 = detectors::OcddDetector<f64>;
