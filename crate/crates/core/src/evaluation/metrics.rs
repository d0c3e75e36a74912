//! Comparison metrics: HADAM and average difference.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Harmonic mean of a performance metric `ψ ∈ [0, 1]` and the unannotated
/// fraction `ε = 1 − annotated/total`:
///
/// `HADAM = 2·ψ·ε / (ψ + ε)`, defined as 0 when `ψ + ε = 0`.
///
/// Using the unannotated *fraction* rather than the raw count removes the
/// influence of the dataset size.
pub fn hadam(psi: f64, annotated: usize, total: usize) -> Result<f64> {
    if total == 0 {
        return Err(Error::param("total", "must be positive"));
    }
    if annotated > total {
        return Err(Error::param(
            "annotated",
            format!("{annotated} exceeds the total {total}"),
        ));
    }
    if !(0.0..=1.0).contains(&psi) {
        return Err(Error::param("psi", format!("must be in [0, 1], got {psi}")));
    }
    let epsilon = 1.0 - annotated as f64 / total as f64;
    if psi + epsilon == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * psi * epsilon / (psi + epsilon))
}

/// Fraction of the stream whose labels were purchased.
pub fn annotation_fraction(annotated: usize, total: usize) -> Result<f64> {
    if total == 0 {
        return Err(Error::param("total", "must be positive"));
    }
    Ok(annotated as f64 / total as f64)
}

/// Per method, the mean over datasets of (row best − method value).
///
/// Every dataset row must cover every method; 0 is the best possible score
/// and at least one method contributes 0 on each row.
pub fn avg_diff(
    table: &BTreeMap<String, BTreeMap<String, f64>>,
) -> Result<BTreeMap<String, f64>> {
    if table.is_empty() {
        return Err(Error::EmptyInput);
    }
    let methods: Vec<String> = table
        .values()
        .next()
        .map(|row| row.keys().cloned().collect())
        .unwrap_or_default();
    if methods.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut sums: BTreeMap<String, f64> = methods.iter().map(|m| (m.clone(), 0.0)).collect();
    for (dataset, row) in table {
        for method in &methods {
            if !row.contains_key(method) {
                return Err(Error::MissingCell {
                    dataset: dataset.clone(),
                    method: method.clone(),
                });
            }
        }
        for method in row.keys() {
            if !sums.contains_key(method) {
                return Err(Error::MissingCell {
                    dataset: table.keys().next().unwrap().clone(),
                    method: method.clone(),
                });
            }
        }
        let best = row.values().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (method, &value) in row {
            *sums.get_mut(method).unwrap() += best - value;
        }
    }
    let n = table.len() as f64;
    Ok(sums.into_iter().map(|(m, s)| (m, s / n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(rows: &[(&str, &[(&str, f64)])]) -> BTreeMap<String, BTreeMap<String, f64>> {
        rows.iter()
            .map(|(d, cells)| {
                (
                    d.to_string(),
                    cells.iter().map(|(m, v)| (m.to_string(), *v)).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn hadam_reproduces_published_rows() {
        // Poker: accuracy 76.08, 77,653 of 829,201 annotated.
        let h = hadam(0.7608, 77_653, 829_201).unwrap();
        assert!((h - 0.8272).abs() < 0.0005, "poker hadam = {h}");
        // Airlines: accuracy 60.40, 48,910 of 539,383 annotated.
        let h = hadam(0.6040, 48_910, 539_383).unwrap();
        assert!((h - 0.7258).abs() < 0.0005, "airlines hadam = {h}");
    }

    #[test]
    fn hadam_endpoints() {
        assert_eq!(hadam(1.0, 0, 100).unwrap(), 1.0);
        assert_eq!(hadam(0.0, 0, 100).unwrap(), 0.0);
        // ψ = 0 and everything annotated: ε = 0, defined as 0.
        assert_eq!(hadam(0.0, 100, 100).unwrap(), 0.0);
    }

    #[test]
    fn hadam_rejects_invalid_input() {
        assert!(hadam(0.5, 101, 100).is_err());
        assert!(hadam(0.5, 0, 0).is_err());
        assert!(hadam(1.5, 0, 100).is_err());
    }

    #[test]
    fn avg_diff_best_everywhere_is_zero() {
        let t = table(&[
            ("d1", &[("A", 0.9), ("B", 0.8)]),
            ("d2", &[("A", 0.95), ("B", 0.95)]),
        ]);
        let result = avg_diff(&t).unwrap();
        assert_eq!(result["A"], 0.0);
    }

    #[test]
    fn avg_diff_two_row_hand_computation() {
        let t = table(&[
            ("d1", &[("A", 0.9), ("B", 0.8)]),
            ("d2", &[("A", 0.7), ("B", 0.9)]),
        ]);
        let result = avg_diff(&t).unwrap();
        assert!((result["A"] - 0.10).abs() < 1e-12);
        assert!((result["B"] - 0.05).abs() < 1e-12);
    }

    #[test]
    fn avg_diff_rejects_missing_cells() {
        let mut t = table(&[("d1", &[("A", 0.9), ("B", 0.8)])]);
        t.insert("d2".into(), [("A".to_string(), 0.7)].into_iter().collect());
        assert!(matches!(avg_diff(&t), Err(Error::MissingCell { .. })));
    }

    #[test]
    fn annotation_fraction_matches_published_row() {
        let f = annotation_fraction(538_950, 539_383).unwrap();
        assert!((f - 0.9992).abs() < 0.0001);
        assert_eq!(annotation_fraction(0, 10).unwrap(), 0.0);
        assert_eq!(annotation_fraction(10, 10).unwrap(), 1.0);
    }

    proptest! {
        /// hadam is symmetric in (ψ, ε) and bounded by both mean bounds.
        /// ψ is drawn on the 1/1000 grid so the swapped call reproduces the
        /// operands exactly up to one rounding of the division.
        #[test]
        fn hadam_symmetry_and_bounds(psi_millis in 0usize..=1000, annotated in 0usize..=1000) {
            let total = 1000usize;
            let psi = psi_millis as f64 / total as f64;
            let h = hadam(psi, annotated, total).unwrap();
            let eps = 1.0 - annotated as f64 / total as f64;
            let h_swapped = hadam(eps, total - psi_millis, total).unwrap();
            prop_assert!((h - h_swapped).abs() < 1e-12, "{h} vs {h_swapped}");
            prop_assert!(h <= 2.0 * psi.min(eps) + 1e-12);
            prop_assert!(h <= (psi + eps) / 2.0 + 1e-12);
            prop_assert!((0.0..=1.0).contains(&h));
        }

        /// Strictly increasing in ψ for fixed ε>0; strictly decreasing in the
        /// annotated count for fixed ψ>0.
        #[test]
        fn hadam_monotonicity(psi in 0.01f64..0.99, annotated in 1usize..999) {
            let total = 1000usize;
            let h = hadam(psi, annotated, total).unwrap();
            let h_up = hadam(psi + 0.01, annotated, total).unwrap();
            prop_assert!(h_up > h);
            let h_more_labels = hadam(psi, annotated + 1, total).unwrap();
            prop_assert!(h_more_labels < h);
        }

        /// avg_diff values are non-negative and each row has a zero
        /// contributor.
        #[test]
        fn avg_diff_nonnegative(values in proptest::collection::vec(0.0f64..1.0, 6)) {
            let t = table(&[
                ("d1", &[("A", values[0]), ("B", values[1]), ("C", values[2])]),
                ("d2", &[("A", values[3]), ("B", values[4]), ("C", values[5])]),
            ]);
            let result = avg_diff(&t).unwrap();
            for v in result.values() {
                prop_assert!(*v >= 0.0);
            }
            let min = result.values().cloned().fold(f64::INFINITY, f64::min);
            // The best method can trail the per-row maxima on average, but
            // never by more than the worst row gap.
            prop_assert!(min <= 1.0);
        }
    }
}
