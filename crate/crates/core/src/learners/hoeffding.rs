//! Incremental Hoeffding tree for numeric features.
//!
//! Leaves keep per-class counts and per-feature, per-class Gaussian
//! summaries. A leaf turns into a binary split once the Hoeffding bound
//! `ε = sqrt(R²·ln(1/δ) / (2n))` certifies that the best candidate split
//! beats the runner-up (or `ε` has shrunk under the tie threshold).

use crate::error::{Error, Result};
use crate::sample::{ClassId, Sample};
use crate::scalar::Scalar;

/// Growth hyperparameters.
#[derive(Debug, Clone)]
pub struct HoeffdingConfig {
    /// Observations a leaf must accumulate between split evaluations.
    pub grace_period: usize,
    /// δ of the Hoeffding bound.
    pub split_confidence: f64,
    /// Split anyway once the bound is tighter than this.
    pub tie_threshold: f64,
    pub max_depth: Option<usize>,
    /// Evenly spaced candidate thresholds per feature, in addition to the
    /// midpoints between class means.
    pub split_candidates: usize,
}

impl Default for HoeffdingConfig {
    fn default() -> Self {
        HoeffdingConfig {
            grace_period: 200,
            split_confidence: 1e-7,
            tie_threshold: 0.05,
            max_depth: None,
            split_candidates: 10,
        }
    }
}

/// Welford-style Gaussian summary of one feature restricted to one class.
#[derive(Debug, Clone, Default)]
struct Gaussian {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Gaussian {
    fn observe(&mut self, v: f64) {
        self.count += 1.0;
        let delta = v - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (v - self.mean);
    }

    /// Estimated fraction of this class's mass below `t`.
    fn fraction_below(&self, t: f64) -> f64 {
        if self.count <= 0.0 {
            return 0.0;
        }
        let sd = (self.m2 / self.count).sqrt();
        if sd < 1e-12 {
            return if self.mean <= t { 1.0 } else { 0.0 };
        }
        normal_cdf((t - self.mean) / sd)
    }
}

#[derive(Debug, Clone)]
struct FeatureStats {
    min: f64,
    max: f64,
    per_class: Vec<Gaussian>,
}

impl FeatureStats {
    fn new() -> Self {
        FeatureStats {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            per_class: Vec::new(),
        }
    }

    fn observe(&mut self, v: f64, class: ClassId) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        if self.per_class.len() <= class {
            self.per_class.resize_with(class + 1, Gaussian::default);
        }
        self.per_class[class].observe(v);
    }
}

#[derive(Debug, Clone)]
struct LeafStats {
    class_counts: Vec<f64>,
    features: Vec<FeatureStats>,
    weight_seen: f64,
    weight_at_last_eval: f64,
}

impl LeafStats {
    fn empty(dim: usize) -> Self {
        LeafStats {
            class_counts: Vec::new(),
            features: (0..dim).map(|_| FeatureStats::new()).collect(),
            weight_seen: 0.0,
            weight_at_last_eval: 0.0,
        }
    }

    /// Fresh leaf seeded with an estimated class distribution; predictions
    /// use it immediately, growth statistics start from scratch.
    fn seeded(dim: usize, class_counts: Vec<f64>) -> Self {
        let weight: f64 = class_counts.iter().sum();
        LeafStats {
            class_counts,
            features: (0..dim).map(|_| FeatureStats::new()).collect(),
            weight_seen: weight,
            weight_at_last_eval: weight,
        }
    }

    fn observe(&mut self, features: &[f64], class: ClassId) {
        if self.class_counts.len() <= class {
            self.class_counts.resize(class + 1, 0.0);
        }
        self.class_counts[class] += 1.0;
        self.weight_seen += 1.0;
        for (stats, &v) in self.features.iter_mut().zip(features) {
            stats.observe(v, class);
        }
    }

    fn majority(&self) -> Option<ClassId> {
        let mut best: Option<(ClassId, f64)> = None;
        for (c, &count) in self.class_counts.iter().enumerate() {
            if count > 0.0 && best.map_or(true, |(_, b)| count > b) {
                best = Some((c, count));
            }
        }
        best.map(|(c, _)| c)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(LeafStats),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

/// Incremental decision tree; an empty tree predicts `default_class`.
#[derive(Debug, Clone)]
pub struct HoeffdingTree<S: Scalar> {
    config: HoeffdingConfig,
    root: Node,
    dim: Option<usize>,
    default_class: ClassId,
    split_count: usize,
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> HoeffdingTree<S> {
    pub fn new(config: HoeffdingConfig) -> Self {
        HoeffdingTree {
            config,
            root: Node::Leaf(LeafStats::empty(0)),
            dim: None,
            default_class: 0,
            split_count: 0,
            _marker: std::marker::PhantomData,
        }
    }

    pub fn config(&self) -> &HoeffdingConfig {
        &self.config
    }

    /// Number of split nodes grown so far.
    pub fn split_count(&self) -> usize {
        self.split_count
    }

    /// Learn from a labeled sample; unlabeled samples are an error.
    pub fn learn_sample(&mut self, sample: &Sample<S>) -> Result<()> {
        let class = sample.label().ok_or(Error::UnlabeledSample {
            index: sample.index(),
        })?;
        self.learn_one(sample.features(), class)
    }

    pub fn learn_one(&mut self, features: &[S], class: ClassId) -> Result<()> {
        let dim = self.check_dim(features)?;
        if let Node::Leaf(stats) = &mut self.root {
            if stats.features.len() != dim {
                *stats = LeafStats::empty(dim);
            }
        }
        let widened: Vec<f64> = features.iter().map(|&v| v.as_f64()).collect();
        let grown = learn_at(&mut self.root, &widened, class, 0, &self.config);
        self.split_count += grown;
        Ok(())
    }

    /// Majority class of the reached leaf. Never mutates the tree.
    pub fn predict_one(&self, features: &[S]) -> Result<ClassId> {
        let _ = self.check_dim_for_predict(features)?;
        let widened: Vec<f64> = features.iter().map(|&v| v.as_f64()).collect();
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(stats) => {
                    return Ok(stats.majority().unwrap_or(self.default_class));
                }
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if widened[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    fn check_dim(&mut self, features: &[S]) -> Result<usize> {
        match self.dim {
            None => {
                if features.is_empty() {
                    return Err(Error::param("features", "need at least one feature"));
                }
                self.dim = Some(features.len());
                Ok(features.len())
            }
            Some(d) if d == features.len() => Ok(d),
            Some(d) => Err(Error::DimensionMismatch {
                expected: d,
                got: features.len(),
            }),
        }
    }

    fn check_dim_for_predict(&self, features: &[S]) -> Result<usize> {
        match self.dim {
            Some(d) if d != features.len() => Err(Error::DimensionMismatch {
                expected: d,
                got: features.len(),
            }),
            _ => Ok(features.len()),
        }
    }
}

/// Returns the number of splits grown below (0 or 1 per call).
fn learn_at(
    node: &mut Node,
    features: &[f64],
    class: ClassId,
    depth: usize,
    config: &HoeffdingConfig,
) -> usize {
    match node {
        Node::Split {
            feature,
            threshold,
            left,
            right,
        } => {
            let child = if features[*feature] <= *threshold {
                left
            } else {
                right
            };
            learn_at(child, features, class, depth + 1, config)
        }
        Node::Leaf(stats) => {
            stats.observe(features, class);
            if config.max_depth.map_or(false, |limit| depth >= limit) {
                return 0;
            }
            if stats.weight_seen - stats.weight_at_last_eval < config.grace_period as f64 {
                return 0;
            }
            stats.weight_at_last_eval = stats.weight_seen;
            match best_split(stats, config) {
                Some(split) => {
                    let dim = stats.features.len();
                    let left = LeafStats::seeded(dim, split.below_counts);
                    let right = LeafStats::seeded(dim, split.above_counts);
                    *node = Node::Split {
                        feature: split.feature,
                        threshold: split.threshold,
                        left: Box::new(Node::Leaf(left)),
                        right: Box::new(Node::Leaf(right)),
                    };
                    1
                }
                None => 0,
            }
        }
    }
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    below_counts: Vec<f64>,
    above_counts: Vec<f64>,
}

struct FeatureBest {
    gain: f64,
    threshold: f64,
    below_counts: Vec<f64>,
    above_counts: Vec<f64>,
}

fn best_split(stats: &LeafStats, config: &HoeffdingConfig) -> Option<SplitChoice> {
    let classes_present = stats.class_counts.iter().filter(|&&c| c > 0.0).count();
    if classes_present < 2 {
        return None;
    }
    let parent_gini = gini(&stats.class_counts);
    let total: f64 = stats.class_counts.iter().sum();

    let mut per_feature: Vec<(usize, FeatureBest)> = Vec::new();
    for (f, feature) in stats.features.iter().enumerate() {
        if let Some(best) = best_threshold(
            feature,
            &stats.class_counts,
            parent_gini,
            total,
            config.split_candidates,
        ) {
            per_feature.push((f, best));
        }
    }
    if per_feature.is_empty() {
        return None;
    }
    per_feature.sort_by(|a, b| {
        b.1.gain
            .partial_cmp(&a.1.gain)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });

    let best_gain = per_feature[0].1.gain;
    let second_gain = per_feature.get(1).map_or(0.0, |(_, b)| b.gain);
    // Gini merit has range 1.
    let epsilon = ((1.0 / config.split_confidence).ln() / (2.0 * stats.weight_seen)).sqrt();
    if best_gain > 0.0 && (best_gain - second_gain > epsilon || epsilon < config.tie_threshold) {
        let (feature, best) = per_feature.into_iter().next().unwrap();
        Some(SplitChoice {
            feature,
            threshold: best.threshold,
            below_counts: best.below_counts,
            above_counts: best.above_counts,
        })
    } else {
        None
    }
}

fn best_threshold(
    feature: &FeatureStats,
    class_counts: &[f64],
    parent_gini: f64,
    total: f64,
    grid_size: usize,
) -> Option<FeatureBest> {
    if !(feature.max > feature.min) {
        return None;
    }
    let mut candidates = feature_grid(feature, grid_size.max(1));

    // Midpoints between consecutive class means often sit exactly on the
    // decision boundary of threshold concepts.
    let mut means: Vec<f64> = feature
        .per_class
        .iter()
        .filter(|g| g.count > 0.0)
        .map(|g| g.mean)
        .collect();
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for pair in means.windows(2) {
        if pair[1] > pair[0] {
            candidates.push(0.5 * (pair[0] + pair[1]));
        }
    }

    let mut best: Option<FeatureBest> = None;
    for t in candidates {
        if !(t > feature.min && t < feature.max) {
            continue;
        }
        let mut below = vec![0.0; class_counts.len()];
        for (c, gaussian) in feature.per_class.iter().enumerate() {
            below[c] = gaussian.count * gaussian.fraction_below(t);
        }
        let above: Vec<f64> = class_counts
            .iter()
            .enumerate()
            .map(|(c, &n)| {
                let b = below.get(c).copied().unwrap_or(0.0);
                (n - b).max(0.0)
            })
            .collect();
        let n_below: f64 = below.iter().sum();
        let n_above: f64 = above.iter().sum();
        if n_below < 1e-9 || n_above < 1e-9 {
            continue;
        }
        let gain =
            parent_gini - (n_below / total) * gini(&below) - (n_above / total) * gini(&above);
        if best.as_ref().map_or(true, |b| gain > b.gain) {
            best = Some(FeatureBest {
                gain,
                threshold: t,
                below_counts: below,
                above_counts: above,
            });
        }
    }
    best
}

fn feature_grid(feature: &FeatureStats, k: usize) -> Vec<f64> {
    let span = feature.max - feature.min;
    (1..=k)
        .map(|i| feature.min + span * i as f64 / (k + 1) as f64)
        .collect()
}

fn gini(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut g = 1.0;
    for &c in counts {
        let p = c / total;
        g -= p * p;
    }
    g
}

/// Standard normal CDF via the Abramowitz–Stegun erf approximation
/// (absolute error below 1.5e-7).
fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}
