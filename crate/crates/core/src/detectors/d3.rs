//! Discriminative drift detector.
//!
//! Keeps a window of `w + round(w·ρ)` samples split into an old part
//! `W_curr` (first `w`) and a new part `W_next` (last `round(w·ρ)`). Once
//! the window is full, a logistic discriminator is trained to tell the two
//! parts apart and scored over the whole window; drift fires when the
//! separability statistic `max(AUC, 1−AUC)` reaches `τ`.

use super::{auc, rho_block_len, DriftDecision};
use crate::error::{Error, Result};
use crate::learners::{LogisticConfig, LogisticModel};
use crate::sample::Sample;
use crate::scalar::Scalar;
use crate::window::SlidingWindow;

/// D3 hyperparameters; defaults are the published `w=100`, `ρ=0.1`, `τ=0.7`.
#[derive(Debug, Clone)]
pub struct D3Config {
    pub w: usize,
    pub rho: f64,
    pub tau: f64,
    /// Standardize each window (per feature) before training the
    /// discriminator. Off by default for parity with the reference behavior.
    pub standardize: bool,
    pub logistic: LogisticConfig,
}

impl Default for D3Config {
    fn default() -> Self {
        D3Config {
            w: 100,
            rho: 0.1,
            tau: 0.7,
            standardize: false,
            logistic: LogisticConfig::default(),
        }
    }
}

impl D3Config {
    pub fn validate(&self) -> Result<()> {
        if self.w < 2 {
            return Err(Error::param("w", "window size must be at least 2"));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::param("rho", format!("must be in (0, 1], got {}", self.rho)));
        }
        if !(self.tau > 0.5 && self.tau <= 1.0) {
            return Err(Error::param("tau", format!("must be in (0.5, 1], got {}", self.tau)));
        }
        Ok(())
    }
}

/// See the module docs. On fire the detector keeps `W_next` as the seed of
/// the next window; on a quiet full-window check it slides by `round(w·ρ)`.
#[derive(Debug, Clone)]
pub struct D3Detector<S: Scalar> {
    config: D3Config,
    new_len: usize,
    window: SlidingWindow<S>,
    dim: Option<usize>,
}

impl<S: Scalar> D3Detector<S> {
    pub fn new(config: D3Config) -> Result<Self> {
        config.validate()?;
        let new_len = rho_block_len(config.w, config.rho);
        let window = SlidingWindow::new(config.w + new_len);
        Ok(D3Detector {
            config,
            new_len,
            window,
            dim: None,
        })
    }

    pub fn config(&self) -> &D3Config {
        &self.config
    }

    /// Size of the new sub-window, `round(w·ρ)`.
    pub fn new_window_len(&self) -> usize {
        self.new_len
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Consume one sample. Returns a decision only when the window was full
    /// and a drift check ran.
    pub fn step(&mut self, sample: Sample<S>) -> Result<Option<DriftDecision<S>>> {
        self.check_dim(&sample)?;
        self.window.push(sample);
        if !self.window.is_full() {
            return Ok(None);
        }

        let statistic = self.separability()?;
        if statistic >= self.config.tau {
            let snapshot = self.window.snapshot();
            // Keep W_next as the start of the next window, drop W_curr.
            self.window.drain_oldest(self.config.w);
            Ok(Some(DriftDecision {
                fired: true,
                statistic,
                snapshot: Some(snapshot),
                outlier_flags: None,
            }))
        } else {
            // Slide: forget the oldest round(w·ρ) samples.
            self.window.drain_oldest(self.new_len);
            Ok(Some(DriftDecision::quiet(statistic)))
        }
    }

    fn separability(&self) -> Result<f64> {
        let total = self.window.len();
        let membership: Vec<bool> = (0..total).map(|i| i >= self.config.w).collect();

        let rows: Vec<Vec<S>> = if self.config.standardize {
            standardized(&self.window)
        } else {
            self.window.iter().map(|s| s.features().to_vec()).collect()
        };
        let refs: Vec<&[S]> = rows.iter().map(|r| r.as_slice()).collect();

        let model = LogisticModel::fit(&refs, &membership, &self.config.logistic)?;
        let scores: Vec<S> = refs
            .iter()
            .map(|r| model.score(r))
            .collect::<Result<_>>()?;
        let raw = auc(&scores, &membership)?;
        // A discriminator that ranks the windows invertedly still proves
        // separability; the statistic is symmetric around one half.
        Ok(raw.max(1.0 - raw))
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

fn standardized<S: Scalar>(window: &SlidingWindow<S>) -> Vec<Vec<S>> {
    let n = window.len();
    let dim = window.get(0).map_or(0, |s| s.dim());
    let mut mean = vec![0.0f64; dim];
    for s in window.iter() {
        for (m, &v) in mean.iter_mut().zip(s.features()) {
            *m += v.as_f64();
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let mut var = vec![0.0f64; dim];
    for s in window.iter() {
        for (f, (&v, &m)) in s.features().iter().zip(&mean).enumerate() {
            let d = v.as_f64() - m;
            var[f] += d * d;
        }
    }
    let sd: Vec<f64> = var
        .iter()
        .map(|v| {
            let sd = (v / n as f64).sqrt();
            if sd < 1e-12 {
                1.0
            } else {
                sd
            }
        })
        .collect();
    window
        .iter()
        .map(|s| {
            s.features()
                .iter()
                .enumerate()
                .map(|(f, &v)| S::cast((v.as_f64() - mean[f]) / sd[f]))
                .collect()
        })
        .collect()
}
