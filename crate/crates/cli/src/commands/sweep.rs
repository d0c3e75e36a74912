//! `driftkit sweep`: a hyperparameter grid, both selectors per combination,
//! plus the homogeneous-minus-baseline HADAM difference matrix.

use anyhow::{Context, Result};
use rayon::prelude::*;

use driftkit::evaluation::hadam;

use super::{mean, one_repeat, report_row};
use crate::settings::{parse_grid, resolve, Resolved, SweepArgs};
use crate::table::{emit, fmt_f64, render, Section, REPORT_COLUMNS};

/// Published search grids; the bold defaults sit in the middle.
const D3_W: [usize; 3] = [50, 100, 150];
const D3_RHO: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 1.0];
const D3_TAU: [f64; 5] = [0.6, 0.65, 0.7, 0.75, 0.8];
const OCDD_W: [usize; 4] = [150, 200, 250, 300];
const OCDD_RHO: [f64; 3] = [0.25, 0.3, 0.35];
const OCDD_NU: [f64; 3] = [0.4, 0.5, 0.6];

pub fn execute(args: SweepArgs) -> Result<()> {
    let resolved = resolve(&args.run)?;

    if resolved.detector_is_d3 && args.nu_list.is_some() {
        anyhow::bail!("--nu-list does not apply to the d3 detector");
    }
    if !resolved.detector_is_d3 && args.tau_list.is_some() {
        anyhow::bail!("--tau-list does not apply to the ocdd detector");
    }

    let w_grid: Vec<usize> = match &args.w_list {
        Some(v) => parse_grid(v, "w-list")?,
        None if resolved.detector_is_d3 => D3_W.to_vec(),
        None => OCDD_W.to_vec(),
    };
    let rho_grid: Vec<f64> = match &args.rho_list {
        Some(v) => parse_grid(v, "rho-list")?,
        None if resolved.detector_is_d3 => D3_RHO.to_vec(),
        None => OCDD_RHO.to_vec(),
    };
    let third_grid: Vec<f64> = if resolved.detector_is_d3 {
        match &args.tau_list {
            Some(v) => parse_grid(v, "tau-list")?,
            None => D3_TAU.to_vec(),
        }
    } else {
        match &args.nu_list {
            Some(v) => parse_grid(v, "nu-list")?,
            None => OCDD_NU.to_vec(),
        }
    };

    let mut combos = Vec::new();
    for &w in &w_grid {
        for &rho in &rho_grid {
            for &third in &third_grid {
                combos.push((w, rho, third));
            }
        }
    }

    // One job per (combination, selector, repeat); merged in grid order.
    let mut jobs = Vec::new();
    for (combo_index, &(w, rho, third)) in combos.iter().enumerate() {
        for suds in [false, true] {
            for repeat in 0..resolved.repeats {
                jobs.push((combo_index, w, rho, third, suds, repeat));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolved.jobs)
        .build()
        .context("building the worker pool")?;
    let results = pool.install(|| {
        jobs.par_iter()
            .map(|&(combo_index, w, rho, third, suds, repeat)| {
                let combo = combo_resolved(&resolved, w, rho, third, suds);
                let report = one_repeat(&combo, &resolved.stream, repeat)?;
                Ok((
                    (combo_index, suds, repeat),
                    (report.accuracy, report.drift_count() as f64, report.annotated_count as f64),
                ))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut by_key: std::collections::BTreeMap<(usize, bool, usize), (f64, f64, f64)> =
        results.into_iter().collect();

    let total = resolved.stream.len();
    let mut rows = Vec::new();
    let mut diff_rows = Vec::new();
    for (combo_index, &(w, rho, third)) in combos.iter().enumerate() {
        let mut hadam_by_selector = [0.0f64; 2];
        for suds in [false, true] {
            let mut accuracies = Vec::new();
            let mut drifts = Vec::new();
            let mut annotated = Vec::new();
            for repeat in 0..resolved.repeats {
                let (acc, d, a) = by_key
                    .remove(&(combo_index, suds, repeat))
                    .expect("every job reports");
                accuracies.push(acc);
                drifts.push(d);
                annotated.push(a);
            }
            // Combination score: HADAM of the mean accuracy and the mean
            // annotation requirement.
            let mean_annotated = mean(&annotated);
            let combo_hadam = hadam(
                mean(&accuracies),
                mean_annotated.round() as usize,
                total,
            )?;
            hadam_by_selector[usize::from(suds)] = combo_hadam;

            let combo = combo_resolved(&resolved, w, rho, third, suds);
            rows.push(report_row(
                &combo,
                "mean",
                mean(&accuracies),
                mean(&drifts),
                mean_annotated,
                total,
                combo_hadam,
            ));
        }
        diff_rows.push(vec![
            w.to_string(),
            format!("{rho}"),
            format!("{third}"),
            fmt_f64(hadam_by_selector[1] - hadam_by_selector[0], 4),
        ]);
    }

    let summary = format!(
        "combinations={} repeats={} runs_per_selector={}",
        combos.len(),
        resolved.repeats,
        combos.len() * resolved.repeats
    );
    let sections = [
        Section {
            name: Some(format!("sweep {summary}")),
            header: REPORT_COLUMNS.iter().map(|c| c.to_string()).collect(),
            rows,
        },
        Section {
            name: Some("hadam_diff (suds - baseline)".into()),
            header: vec![
                "w".into(),
                "rho".into(),
                "tau_or_nu".into(),
                "hadam_diff".into(),
            ],
            rows: diff_rows,
        },
    ];
    emit(&render(&sections, resolved.format), resolved.out.as_deref())
}

fn combo_resolved(base: &Resolved, w: usize, rho: f64, third: f64, suds: bool) -> Resolved {
    Resolved {
        dataset_name: base.dataset_name.clone(),
        stream: Vec::new(), // runs borrow the shared stream
        detector_is_d3: base.detector_is_d3,
        suds,
        w: Some(w),
        rho: Some(rho),
        tau: if base.detector_is_d3 { Some(third) } else { base.tau },
        nu: if base.detector_is_d3 { base.nu } else { Some(third) },
        gamma: base.gamma,
        update_mode: base.update_mode,
        repeats: base.repeats,
        seed: base.seed,
        out: base.out.clone(),
        format: base.format,
        jobs: base.jobs,
    }
}
