//! Windowed unsupervised drift detectors.
//!
//! Both detectors expose the same per-sample interface: [`D3Detector::step`]
//! and [`OcddDetector::step`] consume one sample and return
//! `Ok(Some(DriftDecision))` whenever a drift check was performed, `Ok(None)`
//! while the window is still bootstrapping.

mod auc;
mod d3;
mod ocdd;

pub use auc::auc;
pub use d3::{D3Config, D3Detector};
pub use ocdd::{OcddConfig, OcddDetector};

use crate::sample::Sample;
use crate::scalar::Scalar;

/// Outcome of one drift check.
///
/// `statistic` is the separability AUC for D3 and the window outlier
/// fraction for OCDD; it always lies in `[0, 1]`. The window snapshot (and,
/// for OCDD, the aligned outlier flags) is only materialized when the check
/// fired, which is when selectors need it.
#[derive(Debug, Clone)]
pub struct DriftDecision<S: Scalar> {
    pub fired: bool,
    pub statistic: f64,
    pub snapshot: Option<Vec<Sample<S>>>,
    pub outlier_flags: Option<Vec<bool>>,
}

impl<S: Scalar> DriftDecision<S> {
    fn quiet(statistic: f64) -> Self {
        DriftDecision {
            fired: false,
            statistic,
            snapshot: None,
            outlier_flags: None,
        }
    }
}

/// Round-half-up of `w·ρ`, floored at one sample. This is the size of D3's
/// new sub-window, OCDD's firing threshold, and the per-drift annotation
/// block of the baseline selectors (10 and 75 at the published defaults).
pub fn rho_block_len(w: usize, rho: f64) -> usize {
    ((w as f64 * rho) + 0.5).floor().max(1.0) as usize
}
