//! Mann–Whitney rank AUC.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Probability that a random positive scores above a random negative, ties
/// counted as one half: `AUC = (R₊ − n₊(n₊+1)/2) / (n₊·n₋)` with `R₊` the
/// rank sum of the positives under average ranks.
pub fn auc<S: Scalar>(scores: &[S], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::param(
            "labels",
            format!("{} labels for {} scores", labels.len(), scores.len()),
        ));
    }
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[a]
            .partial_cmp(&scores[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    // Average ranks over tie groups, then sum the positives' ranks.
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] {
                rank_sum_pos += rank;
            }
        }
        i = j + 1;
    }

    let n_pos = positives as f64;
    let n_neg = negatives as f64;
    Ok((rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// O(n²) pair-counting oracle.
    fn brute_force(scores: &[f64], labels: &[bool]) -> f64 {
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for (i, &si) in scores.iter().enumerate() {
            if !labels[i] {
                continue;
            }
            for (j, &sj) in scores.iter().enumerate() {
                if labels[j] {
                    continue;
                }
                pairs += 1.0;
                if si > sj {
                    wins += 1.0;
                } else if si == sj {
                    wins += 0.5;
                }
            }
        }
        wins / pairs
    }

    #[test]
    fn perfect_ranking_is_one() {
        assert_eq!(auc(&[0.9, 0.1], &[true, false]).unwrap(), 1.0);
    }

    #[test]
    fn all_ties_is_half() {
        assert_eq!(auc(&[0.4, 0.4, 0.4, 0.4], &[true, false, true, false]).unwrap(), 0.5);
    }

    #[test]
    fn matches_brute_force_exactly_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.gen_range(2..100);
            // Coarse score grid to force ties.
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..10) as f64 / 10.0).collect();
            let mut labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            labels[0] = true;
            labels[n - 1] = false;
            assert_eq!(auc(&scores, &labels).unwrap(), brute_force(&scores, &labels));
        }
    }

    #[test]
    fn single_class_is_rejected() {
        assert!(matches!(
            auc(&[0.1, 0.2], &[true, true]),
            Err(Error::SingleClass)
        ));
    }

    proptest! {
        /// Negating tie-free scores reverses the ranking: auc(s) + auc(-s) = 1.
        #[test]
        fn negation_complements(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..60);
            let mut scores: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            scores.sort_by(|a, b| a.partial_cmp(b).unwrap());
            scores.dedup();
            if scores.len() < 2 { return Ok(()); }
            let mut labels: Vec<bool> = (0..scores.len()).map(|_| rng.gen_bool(0.5)).collect();
            labels[0] = true;
            let last = labels.len() - 1;
            labels[last] = false;
            let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
            let total = auc(&scores, &labels).unwrap() + auc(&neg, &labels).unwrap();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        /// The statistic always lies in [0, 1].
        #[test]
        fn bounded(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1000));
            let n = rng.gen_range(2..60);
            let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..5) as f64).collect();
            let mut labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            labels[0] = true;
            let last = labels.len() - 1;
            labels[last] = false;
            let value = auc(&scores, &labels).unwrap();
            prop_assert!((0.0..=1.0).contains(&value));
        }
    }
}
