//! Stream elements and the label-access audit channel.

use crate::scalar::Scalar;

/// Dense integer class id, assigned in first-seen (or declaration) order.
pub type ClassId = usize;

/// One stream element: a feature vector, an optional true label and the
/// position at which it arrived.
///
/// The label is deliberately not a public field: every read goes through
/// [`Sample::label`], which feeds [`label_audit`]. Sample selection is
/// unsupervised — labels are only "purchased" afterwards by the evaluation
/// harness — and the audit lets tests prove no selector peeked early.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<S: Scalar> {
    features: Vec<S>,
    label: Option<ClassId>,
    index: usize,
}

impl<S: Scalar> Sample<S> {
    pub fn new(index: usize, features: Vec<S>) -> Self {
        Sample {
            features,
            label: None,
            index,
        }
    }

    pub fn labeled(index: usize, features: Vec<S>, label: ClassId) -> Self {
        Sample {
            features,
            label: Some(label),
            index,
        }
    }

    #[inline]
    pub fn features(&self) -> &[S] {
        &self.features
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.features.len()
    }

    /// Stream position; strictly increasing within a stream.
    #[inline]
    pub fn index(&self) -> usize {
        self.index
    }

    /// Read the true label. Every call is recorded in [`label_audit`].
    #[inline]
    pub fn label(&self) -> Option<ClassId> {
        label_audit::record();
        self.label
    }
}

/// Thread-local counter of label reads.
///
/// Tests reset it, run a selector over a snapshot, and assert the count is
/// still zero: selection must never depend on labels that have not been
/// purchased.
pub mod label_audit {
    use std::cell::Cell;

    thread_local! {
        static READS: Cell<u64> = const { Cell::new(0) };
    }

    #[inline]
    pub(super) fn record() {
        READS.with(|c| c.set(c.get() + 1));
    }

    /// Number of label reads on this thread since the last [`reset`].
    pub fn reads() -> u64 {
        READS.with(Cell::get)
    }

    pub fn reset() {
        READS.with(|c| c.set(0));
    }
}
