//! From-scratch learners: batch logistic regression, a ν-one-class SVM with
//! RBF kernel, and an incremental Hoeffding tree.
//!
//! Learners are single-threaded state machines that are `Send`; instances
//! never share mutable state, so independent models can be fitted in
//! parallel. Given the same data, configuration and seed, every learner
//! produces a bit-identical model.

mod hoeffding;
mod logistic;
mod ocsvm;

pub use hoeffding::{HoeffdingConfig, HoeffdingTree};
pub use logistic::{LogisticConfig, LogisticModel};
pub use ocsvm::{gamma_scale, KernelKind, KernelSpec, OneClassSvm, SmoConfig};
