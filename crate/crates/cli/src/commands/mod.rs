pub mod recompute;
pub mod run;
pub mod sweep;

use anyhow::Result;
use driftkit::evaluation::{run_prequential, ExperimentReport, HarnessConfig};
use driftkit::Sample;

use crate::settings::Resolved;
use crate::table::fmt_f64;

/// Execute one harness repeat; per-repeat seeds are `seed + repeat`.
pub(crate) fn one_repeat(
    resolved: &Resolved,
    stream: &[Sample<f64>],
    repeat: usize,
) -> Result<ExperimentReport<f64>> {
    let config = HarnessConfig {
        detector: resolved.detector_config()?,
        selector: resolved.selector(),
        classifier: resolved.classifier(),
        update_mode: resolved.update_mode,
        seed: resolved.seed + repeat as u64,
        trace: false,
    };
    Ok(run_prequential(stream, &config)?)
}

/// The shared 12-column report row.
pub(crate) fn report_row(
    resolved: &Resolved,
    repeat_label: &str,
    accuracy: f64,
    drifts: f64,
    annotated: f64,
    total: usize,
    hadam: f64,
) -> Vec<String> {
    let (w, rho, tau_or_nu) = row_params(resolved);
    vec![
        resolved.dataset_name.clone(),
        if resolved.detector_is_d3 { "d3" } else { "ocdd" }.to_string(),
        if resolved.suds { "suds" } else { "baseline" }.to_string(),
        w.to_string(),
        format!("{rho}"),
        format!("{tau_or_nu}"),
        repeat_label.to_string(),
        fmt_f64(accuracy, 4),
        fmt_f64(drifts, 2),
        fmt_f64(annotated, 2),
        total.to_string(),
        fmt_f64(hadam, 4),
    ]
}

pub(crate) fn row_params(resolved: &Resolved) -> (usize, f64, f64) {
    if resolved.detector_is_d3 {
        (
            resolved.w.unwrap_or(100),
            resolved.rho.unwrap_or(0.1),
            resolved.tau.unwrap_or(0.7),
        )
    } else {
        (
            resolved.w.unwrap_or(250),
            resolved.rho.unwrap_or(0.3),
            resolved.nu.unwrap_or(0.5),
        )
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1); zero for a single value.
pub(crate) fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}
