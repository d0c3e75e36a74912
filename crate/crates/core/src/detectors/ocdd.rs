//! One-class drift detector.
//!
//! Buffers the first `w` samples, fits a ν-one-class SVM on them and treats
//! that window as the current distribution. Every later sample is classified
//! by the model; its outlier flag enters a FIFO aligned with the window.
//! Drift fires once the flagged fraction reaches `ρ`, after which the model
//! is refit on the most recent `w` samples and the flags are cleared.

use std::collections::VecDeque;

use super::{rho_block_len, DriftDecision};
use crate::error::{Error, Result};
use crate::learners::{gamma_scale, KernelSpec, OneClassSvm, SmoConfig};
use crate::sample::Sample;
use crate::scalar::Scalar;
use crate::window::SlidingWindow;

/// OCDD hyperparameters; defaults are the published `w=250`, `ρ=0.3`,
/// `ν=0.5`. `gamma = None` resolves the RBF width with the `scale`
/// convention on each fit set.
#[derive(Debug, Clone)]
pub struct OcddConfig {
    pub w: usize,
    pub rho: f64,
    pub nu: f64,
    pub gamma: Option<f64>,
    pub smo: SmoConfig,
}

impl Default for OcddConfig {
    fn default() -> Self {
        OcddConfig {
            w: 250,
            rho: 0.3,
            nu: 0.5,
            gamma: None,
            smo: SmoConfig::default(),
        }
    }
}

impl OcddConfig {
    pub fn validate(&self) -> Result<()> {
        if self.w < 2 {
            return Err(Error::param("w", "window size must be at least 2"));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::param("rho", format!("must be in (0, 1), got {}", self.rho)));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::param("nu", format!("must be in (0, 1], got {}", self.nu)));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::param("gamma", format!("must be positive, got {g}")));
            }
        }
        Ok(())
    }
}

/// See the module docs.
#[derive(Debug, Clone)]
pub struct OcddDetector<S: Scalar> {
    config: OcddConfig,
    fire_threshold: usize,
    window: SlidingWindow<S>,
    flags: VecDeque<bool>,
    model: Option<OneClassSvm<S>>,
    dim: Option<usize>,
}

impl<S: Scalar> OcddDetector<S> {
    pub fn new(config: OcddConfig) -> Result<Self> {
        config.validate()?;
        let fire_threshold = rho_block_len(config.w, config.rho);
        let window = SlidingWindow::new(config.w);
        Ok(OcddDetector {
            config,
            fire_threshold,
            window,
            flags: VecDeque::new(),
            model: None,
            dim: None,
        })
    }

    pub fn config(&self) -> &OcddConfig {
        &self.config
    }

    /// Flagged-outlier count at which a check fires, `round(w·ρ)`.
    pub fn fire_threshold(&self) -> usize {
        self.fire_threshold
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// The current one-class model, once the bootstrap window has been fit.
    pub fn model(&self) -> Option<&OneClassSvm<S>> {
        self.model.as_ref()
    }

    /// Consume one sample. Returns `Ok(None)` while the bootstrap window is
    /// filling (including the fitting step) and a decision afterwards.
    pub fn step(&mut self, sample: Sample<S>) -> Result<Option<DriftDecision<S>>> {
        self.check_dim(&sample)?;

        if self.model.is_none() {
            self.window.push(sample);
            if self.window.is_full() {
                self.model = Some(self.fit_window()?);
                // The fit set is the current distribution by construction.
                self.flags = std::iter::repeat(false).take(self.config.w).collect();
            }
            return Ok(None);
        }

        let flag = {
            let model = self.model.as_ref().expect("model exists past bootstrap");
            model.decision(sample.features())? < S::zero()
        };
        self.window.push(sample);
        self.flags.pop_front();
        self.flags.push_back(flag);

        let outliers = self.flags.iter().filter(|&&f| f).count();
        let statistic = outliers as f64 / self.config.w as f64;
        if outliers >= self.fire_threshold {
            let snapshot = self.window.snapshot();
            let flags: Vec<bool> = self.flags.iter().copied().collect();
            // Reset: the most recent w samples become the new current
            // distribution and the flag FIFO starts over.
            self.model = Some(self.fit_window()?);
            self.flags = std::iter::repeat(false).take(self.config.w).collect();
            Ok(Some(DriftDecision {
                fired: true,
                statistic,
                snapshot: Some(snapshot),
                outlier_flags: Some(flags),
            }))
        } else {
            Ok(Some(DriftDecision::quiet(statistic)))
        }
    }

    /// Replace the detector's distribution model with one fit on `samples`
    /// (e.g. the homogeneous subset a selector extracted) and clear the
    /// outlier flags.
    pub fn refit_from(&mut self, samples: &[Sample<S>]) -> Result<()> {
        let rows: Vec<&[S]> = samples.iter().map(|s| s.features()).collect();
        let gamma = self.config.gamma.unwrap_or_else(|| gamma_scale(&rows));
        let kernel = KernelSpec::rbf(gamma)?;
        self.model = Some(OneClassSvm::fit(
            &rows,
            self.config.nu,
            kernel,
            &self.config.smo,
        )?);
        self.flags = std::iter::repeat(false).take(self.config.w).collect();
        Ok(())
    }

    fn fit_window(&self) -> Result<OneClassSvm<S>> {
        let rows: Vec<&[S]> = self.window.iter().map(|s| s.features()).collect();
        let gamma = self.config.gamma.unwrap_or_else(|| gamma_scale(&rows));
        let kernel = KernelSpec::rbf(gamma)?;
        OneClassSvm::fit(&rows, self.config.nu, kernel, &self.config.smo)
    }

    fn check_dim(&mut self, sample: &Sample<S>) -> Result<()> {
        match self.dim {
            None => {
                if sample.dim() == 0 {
                    return Err(Error::param("sample", "need at least one feature"));
                }
                self.dim = Some(sample.dim());
                Ok(())
            }
            Some(d) if d == sample.dim() => Ok(()),
            Some(d) => Err(Error::DimensionMismatch {
                expected: d,
                got: sample.dim(),
            }),
        }
    }
}
