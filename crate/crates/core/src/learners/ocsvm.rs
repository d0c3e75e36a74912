//! ν-one-class SVM with RBF kernel, solved by two-variable coordinate
//! descent on the dual.
//!
//! Dual problem: minimize `½ αᵀQα` subject to `Σαᵢ = 1` and
//! `0 ≤ αᵢ ≤ 1/(ν·n)`, with `Q_ij = K(xᵢ, xⱼ)`. The decision function is
//! `Σ αᵢ K(xᵢ, x) − ρ`; a point is in-distribution iff it is non-negative.

use crate::error::{Error, Result};
use crate::scalar::{squared_distance, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Rbf,
}

/// Kernel parameterization. `K(x, x) = 1` and `K` is symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub gamma: f64,
}

impl KernelSpec {
    /// RBF kernel with an explicit width; `gamma` must be positive.
    pub fn rbf(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::param("gamma", format!("must be positive, got {gamma}")));
        }
        Ok(KernelSpec {
            kind: KernelKind::Rbf,
            gamma,
        })
    }

    fn eval<S: Scalar>(&self, a: &[S], b: &[S]) -> S {
        let g = S::cast(self.gamma);
        (-g * squared_distance(a, b)).exp()
    }
}

/// The `scale` convention: `1 / (d · var)` where `var` is the variance of
/// the pooled feature values, floored at `1e-6`. Degenerate inputs (zero or
/// non-finite variance) fall back to `1.0`.
pub fn gamma_scale<S: Scalar>(rows: &[&[S]]) -> f64 {
    let dim = rows.first().map_or(0, |r| r.len());
    let count = rows.len() * dim;
    if count == 0 {
        return 1.0;
    }
    let mut mean = 0.0;
    for row in rows {
        for &v in *row {
            mean += v.as_f64();
        }
    }
    mean /= count as f64;
    let mut var = 0.0;
    for row in rows {
        for &v in *row {
            let d = v.as_f64() - mean;
            var += d * d;
        }
    }
    var /= count as f64;
    let denom = dim as f64 * var;
    if !denom.is_finite() || denom <= 0.0 {
        1.0
    } else {
        (1.0 / denom).max(1e-6)
    }
}

/// Solver knobs. `max_passes_factor · n` bounds the number of pair updates.
#[derive(Debug, Clone)]
pub struct SmoConfig {
    pub kkt_tolerance: f64,
    pub max_passes_factor: usize,
}

impl Default for SmoConfig {
    fn default() -> Self {
        SmoConfig {
            kkt_tolerance: 1e-3,
            max_passes_factor: 10,
        }
    }
}

/// Fitted ν-one-class SVM.
#[derive(Debug, Clone)]
pub struct OneClassSvm<S: Scalar> {
    support_vectors: Vec<Vec<S>>,
    alphas: Vec<S>,
    rho: S,
    kernel: KernelSpec,
    nu: f64,
    dim: usize,
    train_size: usize,
}

impl<S: Scalar> OneClassSvm<S> {
    /// Fit on feature rows. Requires at least two rows and `0 < ν ≤ 1`.
    /// Deterministic for a fixed data order.
    pub fn fit(rows: &[&[S]], nu: f64, kernel: KernelSpec, solver: &SmoConfig) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        if rows.len() < 2 {
            return Err(Error::param("rows", "need at least two rows"));
        }
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::param("nu", format!("must be in (0, 1], got {nu}")));
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::param("rows", "rows must have at least one feature"));
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }

        let n = rows.len();
        let upper = 1.0 / (nu * n as f64);

        // Feasible start: the first floor(ν·n) points take the box bound,
        // the next point absorbs the remainder so the alphas sum to one.
        let mut alphas = vec![0.0f64; n];
        let full = (nu * n as f64).floor() as usize;
        for a in alphas.iter_mut().take(full.min(n)) {
            *a = upper;
        }
        if full < n {
            alphas[full] = 1.0 - full as f64 * upper;
        }

        // Dense kernel matrix; window-scale fits keep n in the hundreds.
        let q: Vec<f64> = {
            let mut q = vec![0.0; n * n];
            for i in 0..n {
                q[i * n + i] = 1.0;
                for j in 0..i {
                    let k = kernel.eval(rows[i], rows[j]).as_f64();
                    q[i * n + j] = k;
                    q[j * n + i] = k;
                }
            }
            q
        };

        let mut gradient = vec![0.0f64; n];
        for i in 0..n {
            let mut g = 0.0;
            for j in 0..n {
                g += q[i * n + j] * alphas[j];
            }
            gradient[i] = g;
        }

        let bound_eps = upper * 1e-10;
        let max_iterations = solver.max_passes_factor.saturating_mul(n).max(1);
        for _ in 0..max_iterations {
            // Maximal violating pair: push mass from the steepest ascent
            // coordinate that can shrink into the steepest descent
            // coordinate that can grow.
            let mut up: Option<usize> = None;
            let mut down: Option<usize> = None;
            for i in 0..n {
                if alphas[i] < upper - bound_eps
                    && up.map_or(true, |u| gradient[i] < gradient[u])
                {
                    up = Some(i);
                }
                if alphas[i] > bound_eps && down.map_or(true, |d| gradient[i] > gradient[d]) {
                    down = Some(i);
                }
            }
            let (Some(i), Some(j)) = (up, down) else {
                break;
            };
            if gradient[j] - gradient[i] <= solver.kkt_tolerance || i == j {
                break;
            }

            let eta = (q[i * n + i] + q[j * n + j] - 2.0 * q[i * n + j]).max(1e-12);
            let delta = ((gradient[j] - gradient[i]) / eta)
                .min(upper - alphas[i])
                .min(alphas[j]);
            if delta <= 0.0 {
                break;
            }
            alphas[i] += delta;
            alphas[j] -= delta;
            for t in 0..n {
                gradient[t] += delta * (q[t * n + i] - q[t * n + j]);
            }
        }

        // ρ makes the free support vectors sit on the decision boundary.
        let free: Vec<usize> = (0..n)
            .filter(|&i| alphas[i] > bound_eps && alphas[i] < upper - bound_eps)
            .collect();
        let rho = if free.is_empty() {
            let lower_bound = (0..n)
                .filter(|&i| alphas[i] >= upper - bound_eps)
                .map(|i| gradient[i])
                .fold(f64::NEG_INFINITY, f64::max);
            let upper_bound = (0..n)
                .filter(|&i| alphas[i] <= bound_eps)
                .map(|i| gradient[i])
                .fold(f64::INFINITY, f64::min);
            match (lower_bound.is_finite(), upper_bound.is_finite()) {
                (true, true) => 0.5 * (lower_bound + upper_bound),
                (true, false) => lower_bound,
                (false, true) => upper_bound,
                (false, false) => 0.0,
            }
        } else {
            free.iter().map(|&i| gradient[i]).sum::<f64>() / free.len() as f64
        };

        let mut support_vectors = Vec::new();
        let mut kept = Vec::new();
        for i in 0..n {
            if alphas[i] > bound_eps {
                support_vectors.push(rows[i].to_vec());
                kept.push(S::cast(alphas[i]));
            }
        }

        Ok(OneClassSvm {
            support_vectors,
            alphas: kept,
            rho: S::cast(rho),
            kernel,
            nu,
            dim,
            train_size: n,
        })
    }

    /// Build a model directly from its parts.
    pub fn from_parts(
        support_vectors: Vec<Vec<S>>,
        alphas: Vec<S>,
        rho: S,
        kernel: KernelSpec,
        nu: f64,
    ) -> Result<Self> {
        if support_vectors.is_empty() {
            return Err(Error::EmptyInput);
        }
        if support_vectors.len() != alphas.len() {
            return Err(Error::param("alphas", "one alpha per support vector"));
        }
        let dim = support_vectors[0].len();
        for sv in &support_vectors {
            if sv.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: sv.len(),
                });
            }
        }
        let train_size = support_vectors.len();
        Ok(OneClassSvm {
            support_vectors,
            alphas,
            rho,
            kernel,
            nu,
            dim,
            train_size,
        })
    }

    /// `Σ αᵢ K(xᵢ, x) − ρ`.
    pub fn decision(&self, x: &[S]) -> Result<S> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut sum = S::zero();
        for (sv, &alpha) in self.support_vectors.iter().zip(&self.alphas) {
            sum = sum + alpha * self.kernel.eval(sv, x);
        }
        Ok(sum - self.rho)
    }

    /// `+1` (in-distribution) iff `decision(x) ≥ 0`, else `-1`.
    pub fn predict(&self, x: &[S]) -> Result<i8> {
        Ok(if self.decision(x)? >= S::zero() { 1 } else { -1 })
    }

    pub fn support_vectors(&self) -> &[Vec<S>] {
        &self.support_vectors
    }

    pub fn alphas(&self) -> &[S] {
        &self.alphas
    }

    pub fn rho(&self) -> S {
        self.rho
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Fraction of the fit set kept as support vectors.
    pub fn support_fraction(&self) -> f64 {
        self.support_vectors.len() as f64 / self.train_size as f64
    }
}
