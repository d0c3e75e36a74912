//! `driftkit run`: one configuration, `repeats` harness executions.

use anyhow::{Context, Result};
use rayon::prelude::*;

use super::{mean, one_repeat, report_row, std_dev};
use crate::settings::{resolve, RunArgs};
use crate::table::{emit, render, Section, REPORT_COLUMNS};

pub fn execute(args: RunArgs) -> Result<()> {
    let resolved = resolve(&args)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolved.jobs)
        .build()
        .context("building the worker pool")?;
    let reports = pool.install(|| {
        (0..resolved.repeats)
            .into_par_iter()
            .map(|repeat| one_repeat(&resolved, &resolved.stream, repeat))
            .collect::<Result<Vec<_>>>()
    })?;

    let total = resolved.stream.len();
    let mut rows = Vec::new();
    for (repeat, report) in reports.iter().enumerate() {
        rows.push(report_row(
            &resolved,
            &repeat.to_string(),
            report.accuracy,
            report.drift_count() as f64,
            report.annotated_count as f64,
            total,
            report.hadam,
        ));
    }

    let accuracies: Vec<f64> = reports.iter().map(|r| r.accuracy).collect();
    let drifts: Vec<f64> = reports.iter().map(|r| r.drift_count() as f64).collect();
    let annotated: Vec<f64> = reports.iter().map(|r| r.annotated_count as f64).collect();
    let hadams: Vec<f64> = reports.iter().map(|r| r.hadam).collect();
    rows.push(report_row(
        &resolved,
        "mean",
        mean(&accuracies),
        mean(&drifts),
        mean(&annotated),
        total,
        mean(&hadams),
    ));
    rows.push(report_row(
        &resolved,
        "std",
        std_dev(&accuracies),
        std_dev(&drifts),
        std_dev(&annotated),
        total,
        std_dev(&hadams),
    ));

    let section = Section {
        name: None,
        header: REPORT_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows,
    };
    emit(&render(&[section], resolved.format), resolved.out.as_deref())
}
