//! Binary logistic regression trained by full-batch gradient descent.

use crate::error::{Error, Result};
use crate::scalar::{dot, sigmoid, softplus, Scalar};

/// Trainer hyperparameters.
///
/// The defaults favour determinism over speed: full-batch descent from a
/// zero initialization, a fixed step size with halving whenever a step would
/// increase the loss, and an early stop once the loss improvement falls
/// below `tolerance`.
#[derive(Debug, Clone)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub l2: f64,
    pub tolerance: f64,
    /// Kept for interface parity with the other learners; the zero-initialized
    /// batch solver draws no random numbers.
    pub seed: u64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            learning_rate: 0.1,
            max_epochs: 500,
            l2: 1e-4,
            tolerance: 1e-6,
            seed: 0,
        }
    }
}

/// Fitted logistic model: `score(x) = sigmoid(w·x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel<S: Scalar> {
    weights: Vec<S>,
    bias: S,
}

impl<S: Scalar> LogisticModel<S> {
    /// Build a model directly from parameters.
    pub fn from_parts(weights: Vec<S>, bias: S) -> Self {
        LogisticModel { weights, bias }
    }

    /// Fit on feature rows `x` and binary labels `y` (`true` = class 1).
    pub fn fit(x: &[&[S]], y: &[bool], config: &LogisticConfig) -> Result<Self> {
        Self::fit_traced(x, y, config).map(|(model, _)| model)
    }

    /// Like [`LogisticModel::fit`], additionally returning the per-epoch loss
    /// trajectory (regularized mean cross-entropy, including the value at the
    /// zero initialization).
    pub fn fit_traced(
        x: &[&[S]],
        y: &[bool],
        config: &LogisticConfig,
    ) -> Result<(Self, Vec<f64>)> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        if x.len() != y.len() {
            return Err(Error::param(
                "y",
                format!("{} labels for {} rows", y.len(), x.len()),
            ));
        }
        if x.len() < 2 {
            return Err(Error::param("x", "need at least two rows"));
        }
        let dim = x[0].len();
        if dim == 0 {
            return Err(Error::param("x", "rows must have at least one feature"));
        }
        for row in x {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        if y.iter().all(|&l| l) || y.iter().all(|&l| !l) {
            return Err(Error::SingleClass);
        }

        let n = S::cast(x.len() as f64);
        let l2 = S::cast(config.l2);
        let base_rate = S::cast(config.learning_rate);

        let mut weights = vec![S::zero(); dim];
        let mut bias = S::zero();
        let mut loss = regularized_loss(x, y, &weights, bias, l2);
        let mut trace = vec![loss.as_f64()];

        let mut grad_w = vec![S::zero(); dim];
        for _ in 0..config.max_epochs {
            for g in grad_w.iter_mut() {
                *g = S::zero();
            }
            let mut grad_b = S::zero();
            for (row, &label) in x.iter().zip(y) {
                let target = if label { S::one() } else { S::zero() };
                let residual = sigmoid(dot(&weights, row) + bias) - target;
                for (g, &v) in grad_w.iter_mut().zip(*row) {
                    *g = *g + residual * v;
                }
                grad_b = grad_b + residual;
            }
            for (g, &w) in grad_w.iter_mut().zip(&weights) {
                *g = *g / n + l2 * w;
            }
            grad_b = grad_b / n;

            // Halve the step until it no longer increases the loss; the loss
            // trajectory must be non-increasing on any input.
            let mut rate = base_rate;
            let mut candidate = None;
            for _ in 0..30 {
                let w_next: Vec<S> = weights
                    .iter()
                    .zip(&grad_w)
                    .map(|(&w, &g)| w - rate * g)
                    .collect();
                let b_next = bias - rate * grad_b;
                let next_loss = regularized_loss(x, y, &w_next, b_next, l2);
                if next_loss <= loss {
                    candidate = Some((w_next, b_next, next_loss));
                    break;
                }
                rate = rate * S::cast(0.5);
            }
            let Some((w_next, b_next, next_loss)) = candidate else {
                break;
            };
            let improvement = (loss - next_loss).as_f64();
            weights = w_next;
            bias = b_next;
            loss = next_loss;
            trace.push(loss.as_f64());
            if improvement < config.tolerance {
                break;
            }
        }

        Ok((LogisticModel { weights, bias }, trace))
    }

    /// Class-1 confidence in `[0, 1]`.
    pub fn score(&self, x: &[S]) -> Result<S> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        Ok(sigmoid(dot(&self.weights, x) + self.bias))
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn bias(&self) -> S {
        self.bias
    }
}

fn regularized_loss<S: Scalar>(x: &[&[S]], y: &[bool], weights: &[S], bias: S, l2: S) -> S {
    let mut total = S::zero();
    for (row, &label) in x.iter().zip(y) {
        let z = dot(weights, row) + bias;
        // ln(1+e^-z) for the positive class, ln(1+e^z) for the negative one.
        total = total + if label { softplus(-z) } else { softplus(z) };
    }
    let n = S::cast(x.len() as f64);
    let ridge = dot(weights, weights) * l2 * S::cast(0.5);
    total / n + ridge
}
