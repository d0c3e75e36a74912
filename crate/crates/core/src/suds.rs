//! Retraining-sample selection after a drift fires.
//!
//! Baseline selectors take the newest block of the drift-time window.
//! The homogeneous selectors instead extract the subset most likely to
//! belong to the new distribution: for D3 the samples a fresh discriminator
//! scores as most new-window-like, for OCDD the flagged outliers that a
//! one-class model fit on the outliers themselves accepts as
//! in-distribution.
//!
//! Selection is unsupervised: selectors only look at features and stream
//! positions, never at labels (see [`crate::sample::label_audit`]).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::detectors::rho_block_len;
use crate::error::{Error, Result};
use crate::learners::{KernelSpec, LogisticConfig, LogisticModel, OneClassSvm, SmoConfig};
use crate::sample::Sample;
use crate::scalar::Scalar;

/// Which selector a pipeline runs; the kind must match the host detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorKind {
    BaselineD3,
    SudsD3,
    BaselineOcdd,
    SudsOcdd,
}

impl SelectorKind {
    pub fn is_suds(self) -> bool {
        matches!(self, SelectorKind::SudsD3 | SelectorKind::SudsOcdd)
    }

    pub fn is_d3(self) -> bool {
        matches!(self, SelectorKind::BaselineD3 | SelectorKind::SudsD3)
    }
}

impl std::fmt::Display for SelectorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SelectorKind::BaselineD3 => "baseline_d3",
            SelectorKind::SudsD3 => "suds_d3",
            SelectorKind::BaselineOcdd => "baseline_ocdd",
            SelectorKind::SudsOcdd => "suds_ocdd",
        };
        f.write_str(name)
    }
}

/// Samples chosen for retraining. `requested_annotations` equals the number
/// of selected samples — each one's label must be purchased.
#[derive(Debug, Clone)]
pub struct SelectionResult<S: Scalar> {
    pub selected: Vec<Sample<S>>,
    pub requested_annotations: usize,
    pub fallback_used: bool,
}

impl<S: Scalar> SelectionResult<S> {
    fn new(selected: Vec<Sample<S>>, fallback_used: bool) -> Self {
        SelectionResult {
            requested_annotations: selected.len(),
            selected,
            fallback_used,
        }
    }
}

/// Baseline D3 selection: exactly the `round(w·ρ)` newest samples (`W_next`).
pub fn select_baseline_d3<S: Scalar>(
    snapshot: &[Sample<S>],
    w: usize,
    rho: f64,
) -> Result<SelectionResult<S>> {
    let block = rho_block_len(w, rho);
    let expected = w + block;
    if snapshot.len() != expected {
        return Err(Error::SnapshotSize {
            expected,
            got: snapshot.len(),
        });
    }
    let selected = snapshot[snapshot.len() - block..].to_vec();
    Ok(SelectionResult::new(selected, false))
}

/// Homogeneous selection for D3.
///
/// Subsamples `W_curr` (seeded, without replacement) down to `|W_next|`,
/// trains a discriminator with `W_curr → 0` and `W_next → 1`, scores the
/// whole snapshot and keeps the `round(w·ρ)` samples with the highest
/// new-distribution confidence. Ties prefer the newer sample. Degenerate
/// snapshots (every point identical) fall back to the baseline selection.
pub fn select_suds_d3<S: Scalar>(
    snapshot: &[Sample<S>],
    w: usize,
    rho: f64,
    seed: u64,
    logistic: &LogisticConfig,
) -> Result<SelectionResult<S>> {
    let block = rho_block_len(w, rho);
    let expected = w + block;
    if snapshot.len() != expected {
        return Err(Error::SnapshotSize {
            expected,
            got: snapshot.len(),
        });
    }
    if block < 2 {
        return Err(Error::param(
            "rho",
            format!("round(w*rho) must be at least 2 for homogeneous selection, got {block}"),
        ));
    }

    let first = snapshot[0].features();
    if snapshot.iter().all(|s| s.features() == first) {
        let mut fallback = select_baseline_d3(snapshot, w, rho)?;
        fallback.fallback_used = true;
        return Ok(fallback);
    }

    // Balance the discriminator's classes: thin W_curr down to |W_next|.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut old_indices = rand::seq::index::sample(&mut rng, w, block).into_vec();
    old_indices.sort_unstable();

    let mut rows: Vec<&[S]> = Vec::with_capacity(2 * block);
    let mut membership = Vec::with_capacity(2 * block);
    for &i in &old_indices {
        rows.push(snapshot[i].features());
        membership.push(false);
    }
    for sample in &snapshot[w..] {
        rows.push(sample.features());
        membership.push(true);
    }

    let model = LogisticModel::fit(&rows, &membership, logistic)?;
    let scores: Vec<S> = snapshot
        .iter()
        .map(|s| model.score(s.features()))
        .collect::<Result<_>>()?;

    let mut order: Vec<usize> = (0..snapshot.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(snapshot[b].index().cmp(&snapshot[a].index()))
    });
    let mut chosen: Vec<usize> = order.into_iter().take(block).collect();
    chosen.sort_unstable();
    let selected: Vec<Sample<S>> = chosen.into_iter().map(|i| snapshot[i].clone()).collect();
    Ok(SelectionResult::new(selected, false))
}

/// Baseline OCDD selection: the `round(w·ρ)` newest samples of the window
/// (the outlier-era tail).
pub fn select_baseline_ocdd<S: Scalar>(
    snapshot: &[Sample<S>],
    w: usize,
    rho: f64,
) -> Result<SelectionResult<S>> {
    if snapshot.len() != w {
        return Err(Error::SnapshotSize {
            expected: w,
            got: snapshot.len(),
        });
    }
    let block = rho_block_len(w, rho).min(w);
    let selected = snapshot[snapshot.len() - block..].to_vec();
    Ok(SelectionResult::new(selected, false))
}

/// Homogeneous selection for OCDD.
///
/// Fits a fresh one-class SVM on the flagged outliers and keeps the outliers
/// that this new model marks in-distribution. If that intersection is empty,
/// all outliers are returned with `fallback_used` set — an empty retraining
/// set would leave the classifier untrained. The selection size is
/// data-dependent.
pub fn select_suds_ocdd<S: Scalar>(
    snapshot: &[Sample<S>],
    outlier_flags: &[bool],
    nu: f64,
    kernel: KernelSpec,
    solver: &SmoConfig,
) -> Result<SelectionResult<S>> {
    if snapshot.len() != outlier_flags.len() {
        return Err(Error::SnapshotSize {
            expected: outlier_flags.len(),
            got: snapshot.len(),
        });
    }
    let outliers: Vec<&Sample<S>> = snapshot
        .iter()
        .zip(outlier_flags)
        .filter(|(_, &flag)| flag)
        .map(|(s, _)| s)
        .collect();
    if outliers.len() < 2 {
        return Err(Error::TooFewOutliers {
            required: 2,
            got: outliers.len(),
        });
    }

    let rows: Vec<&[S]> = outliers.iter().map(|s| s.features()).collect();
    let model = OneClassSvm::fit(&rows, nu, kernel, solver)?;
    let accepted: Vec<bool> = outliers
        .iter()
        .map(|s| model.predict(s.features()).map(|p| p == 1))
        .collect::<Result<_>>()?;
    let (selected, fallback_used) = intersect_or_fallback(&outliers, &accepted);
    Ok(SelectionResult::new(selected, fallback_used))
}

/// Outliers the new model accepts; all outliers when none survive.
fn intersect_or_fallback<S: Scalar>(
    outliers: &[&Sample<S>],
    accepted: &[bool],
) -> (Vec<Sample<S>>, bool) {
    let kept: Vec<Sample<S>> = outliers
        .iter()
        .zip(accepted)
        .filter(|(_, &a)| a)
        .map(|(s, _)| (*s).clone())
        .collect();
    if kept.is_empty() {
        (outliers.iter().map(|s| (*s).clone()).collect(), true)
    } else {
        (kept, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::gamma_scale;
    use crate::sample::label_audit;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_distr::StandardNormal;

    fn point(rng: &mut ChaCha8Rng, index: usize, center: (f64, f64), sigma: f64) -> Sample<f64> {
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        // Labels are attached so the audit can prove they are never read.
        Sample::labeled(index, vec![center.0 + sigma * dx, center.1 + sigma * dy], 0)
    }

    #[test]
    fn baseline_d3_takes_newest_block() {
        let snapshot: Vec<Sample<f64>> =
            (0..110).map(|i| Sample::new(i, vec![i as f64])).collect();
        let result = select_baseline_d3(&snapshot, 100, 0.1).unwrap();
        assert_eq!(result.requested_annotations, 10);
        let indices: Vec<usize> = result.selected.iter().map(|s| s.index()).collect();
        assert_eq!(indices, (100..110).collect::<Vec<_>>());
        assert!(!result.fallback_used);
    }

    #[test]
    fn baseline_d3_rho_one_returns_newest_w() {
        let snapshot: Vec<Sample<f64>> = (0..20).map(|i| Sample::new(i, vec![0.0])).collect();
        let result = select_baseline_d3(&snapshot, 10, 1.0).unwrap();
        assert_eq!(result.selected.len(), 10);
        assert_eq!(result.selected[0].index(), 10);
    }

    #[test]
    fn baseline_d3_rejects_short_snapshot() {
        let snapshot: Vec<Sample<f64>> = (0..50).map(|i| Sample::new(i, vec![0.0])).collect();
        assert!(matches!(
            select_baseline_d3(&snapshot, 100, 0.1),
            Err(Error::SnapshotSize { expected: 110, got: 50 })
        ));
    }

    #[test]
    fn suds_d3_selects_exactly_the_block_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let snapshot: Vec<Sample<f64>> = (0..110)
            .map(|i| {
                let center = if i < 100 { (0.0, 0.0) } else { (5.0, 5.0) };
                point(&mut rng, i, center, 0.5)
            })
            .collect();
        let result =
            select_suds_d3(&snapshot, 100, 0.1, 7, &LogisticConfig::default()).unwrap();
        assert_eq!(result.selected.len(), 10);
        assert_eq!(result.requested_annotations, 10);
        assert!(!result.fallback_used);
    }

    #[test]
    fn suds_d3_identical_constants_fall_back_to_newest() {
        let snapshot: Vec<Sample<f64>> =
            (0..110).map(|i| Sample::new(i, vec![3.0, 3.0])).collect();
        let result =
            select_suds_d3(&snapshot, 100, 0.1, 7, &LogisticConfig::default()).unwrap();
        assert!(result.fallback_used);
        let indices: Vec<usize> = result.selected.iter().map(|s| s.index()).collect();
        assert_eq!(indices, (100..110).collect::<Vec<_>>());
    }

    #[test]
    fn suds_d3_prefers_new_cluster_members() {
        // Gradual hand-off: a few new-cluster points already sit in W_curr
        // and a few old stragglers pollute W_next. The generator-style truth
        // tag is the cluster a point was drawn from.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = 40;
        let block = 20;
        let mut snapshot = Vec::new();
        let mut is_new = Vec::new();
        for i in 0..(w + block) {
            let new_cluster = if i < w { i >= w - 4 } else { i >= w + 6 };
            let center = if new_cluster { (10.0, 10.0) } else { (0.0, 0.0) };
            snapshot.push(point(&mut rng, i, center, 0.1));
            is_new.push(new_cluster);
        }
        let result =
            select_suds_d3(&snapshot, w, 0.5, 11, &LogisticConfig::default()).unwrap();
        assert_eq!(result.selected.len(), block);
        let by_index: std::collections::HashMap<usize, bool> = snapshot
            .iter()
            .zip(&is_new)
            .map(|(s, &t)| (s.index(), t))
            .collect();
        let new_fraction = result
            .selected
            .iter()
            .filter(|s| by_index[&s.index()])
            .count() as f64
            / block as f64;
        assert!(new_fraction >= 0.9, "new-cluster fraction {new_fraction}");
    }

    #[test]
    fn suds_d3_is_deterministic_per_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let snapshot: Vec<Sample<f64>> = (0..110)
            .map(|i| {
                let center = if i < 100 { (0.0, 0.0) } else { (2.0, 2.0) };
                point(&mut rng, i, center, 1.0)
            })
            .collect();
        let pick = |seed| {
            select_suds_d3(&snapshot, 100, 0.1, seed, &LogisticConfig::default())
                .unwrap()
                .selected
                .iter()
                .map(|s| s.index())
                .collect::<Vec<_>>()
        };
        assert_eq!(pick(5), pick(5));
    }

    #[test]
    fn baseline_ocdd_takes_outlier_era_tail() {
        let snapshot: Vec<Sample<f64>> = (0..250).map(|i| Sample::new(i, vec![0.0])).collect();
        let result = select_baseline_ocdd(&snapshot, 250, 0.3).unwrap();
        assert_eq!(result.requested_annotations, 75);
        assert_eq!(result.selected[0].index(), 175);
    }

    #[test]
    fn baseline_ocdd_guards_tiny_rho_and_short_snapshots() {
        let snapshot: Vec<Sample<f64>> = (0..250).map(|i| Sample::new(i, vec![0.0])).collect();
        let result = select_baseline_ocdd(&snapshot, 250, 0.001).unwrap();
        assert_eq!(result.selected.len(), 1);

        let short: Vec<Sample<f64>> = (0..100).map(|i| Sample::new(i, vec![0.0])).collect();
        assert!(matches!(
            select_baseline_ocdd(&short, 250, 0.3),
            Err(Error::SnapshotSize { expected: 250, got: 100 })
        ));
    }

    #[test]
    fn suds_ocdd_single_atom_accepts_everything() {
        let snapshot: Vec<Sample<f64>> = (0..50)
            .map(|i| Sample::new(i, vec![4.0, -1.0]))
            .collect();
        let mut flags = vec![false; 50];
        for f in flags.iter_mut().skip(30) {
            *f = true;
        }
        let kernel = KernelSpec::rbf(1.0).unwrap();
        let result =
            select_suds_ocdd(&snapshot, &flags, 0.5, kernel, &SmoConfig::default()).unwrap();
        assert_eq!(result.selected.len(), 20);
        assert!(!result.fallback_used);
    }

    #[test]
    fn suds_ocdd_excludes_extreme_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sigma = 0.1;
        let mut snapshot = Vec::new();
        let mut flags = Vec::new();
        let mut noise_indices = std::collections::HashSet::new();
        // 25 in-distribution window members, then 70 new-cluster outliers
        // and 5 extreme noise points at 50σ, all flagged.
        for i in 0..25 {
            snapshot.push(point(&mut rng, i, (0.0, 0.0), sigma));
            flags.push(false);
        }
        for i in 25..95 {
            snapshot.push(point(&mut rng, i, (2.0, 0.0), sigma));
            flags.push(true);
        }
        for i in 95..100 {
            let direction: f64 = if i % 2 == 0 { 1.0 } else { -1.0 };
            snapshot.push(Sample::labeled(
                i,
                vec![direction * 50.0 * sigma, -(50.0) * sigma],
                0,
            ));
            flags.push(true);
            noise_indices.insert(i);
        }
        let rows: Vec<&[f64]> = snapshot
            .iter()
            .zip(&flags)
            .filter(|(_, &f)| f)
            .map(|(s, _)| s.features())
            .collect();
        let kernel = KernelSpec::rbf(gamma_scale(&rows)).unwrap();
        let result =
            select_suds_ocdd(&snapshot, &flags, 0.1, kernel, &SmoConfig::default()).unwrap();
        assert!(!result.fallback_used);
        let kept_noise = result
            .selected
            .iter()
            .filter(|s| noise_indices.contains(&s.index()))
            .count();
        assert!(kept_noise <= 1, "kept {kept_noise} of 5 noise points");
    }

    #[test]
    fn suds_ocdd_requires_two_outliers() {
        let snapshot: Vec<Sample<f64>> = (0..10).map(|i| Sample::new(i, vec![0.0])).collect();
        let mut flags = vec![false; 10];
        flags[3] = true;
        let kernel = KernelSpec::rbf(1.0).unwrap();
        assert!(matches!(
            select_suds_ocdd(&snapshot, &flags, 0.5, kernel, &SmoConfig::default()),
            Err(Error::TooFewOutliers { required: 2, got: 1 })
        ));
    }

    #[test]
    fn empty_intersection_falls_back_to_all_outliers() {
        // The ≥0 decision convention makes a naturally empty intersection
        // all but unreachable (some support vector always sits on the
        // boundary), so the fallback contract is pinned at the helper.
        let snapshot: Vec<Sample<f64>> =
            (0..3).map(|i| Sample::new(i, vec![i as f64])).collect();
        let outliers: Vec<&Sample<f64>> = snapshot.iter().collect();
        let (selected, fallback) = intersect_or_fallback(&outliers, &[false, false, false]);
        assert_eq!(selected.len(), 3);
        assert!(fallback);

        let (selected, fallback) = intersect_or_fallback(&outliers, &[false, true, false]);
        assert_eq!(selected.len(), 1);
        assert_eq!(selected[0].index(), 1);
        assert!(!fallback);
    }

    #[test]
    fn selectors_never_read_labels() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let snapshot: Vec<Sample<f64>> = (0..110)
            .map(|i| {
                let center = if i < 100 { (0.0, 0.0) } else { (3.0, 3.0) };
                point(&mut rng, i, center, 0.5)
            })
            .collect();
        let ocdd_snapshot: Vec<Sample<f64>> = (0..60)
            .map(|i| {
                let center = if i < 40 { (0.0, 0.0) } else { (3.0, 3.0) };
                point(&mut rng, i, center, 0.5)
            })
            .collect();
        let flags: Vec<bool> = (0..60).map(|i| i >= 40).collect();

        label_audit::reset();
        select_baseline_d3(&snapshot, 100, 0.1).unwrap();
        select_suds_d3(&snapshot, 100, 0.1, 9, &LogisticConfig::default()).unwrap();
        select_baseline_ocdd(&ocdd_snapshot, 60, 0.3).unwrap();
        let rows: Vec<&[f64]> = ocdd_snapshot[40..].iter().map(|s| s.features()).collect();
        let kernel = KernelSpec::rbf(gamma_scale(&rows)).unwrap();
        select_suds_ocdd(&ocdd_snapshot, &flags, 0.5, kernel, &SmoConfig::default()).unwrap();
        assert_eq!(label_audit::reads(), 0, "a selector read a label");
    }
}
