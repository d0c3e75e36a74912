//! `driftkit recompute`: apply the HADAM and average-difference formulas to
//! a published results table, no training involved.

use std::collections::BTreeMap;
use std::fs;

use anyhow::{anyhow, bail, Context, Result};

use driftkit::evaluation::{avg_diff, hadam};

use crate::settings::{parse_format, RecomputeArgs};
use crate::table::{emit, fmt_f64, render, Section};

#[derive(Debug, Clone)]
struct TableRow {
    dataset: String,
    method: String,
    accuracy_percent: f64,
    annotated: usize,
    total: usize,
    group: Option<String>,
}

pub fn execute(args: RecomputeArgs) -> Result<()> {
    let format = parse_format(&args.format.clone().unwrap_or_else(|| "tsv".into()))?;
    let rows = parse_table(&args)?;

    // HADAM per cell, sorted for deterministic output.
    let mut hadam_rows = Vec::new();
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| (&a.dataset, &a.method).cmp(&(&b.dataset, &b.method)));
    for row in &sorted {
        let value = hadam(row.accuracy_percent / 100.0, row.annotated, row.total)
            .with_context(|| format!("row {}/{}", row.dataset, row.method))?;
        hadam_rows.push(vec![
            row.dataset.clone(),
            row.method.clone(),
            fmt_f64(row.accuracy_percent, 2),
            row.annotated.to_string(),
            row.total.to_string(),
            fmt_f64(value, 4),
        ]);
    }

    // Average difference per method over all rows, then per group when the
    // table carries one.
    let methods: Vec<String> = {
        let mut m: Vec<String> = rows.iter().map(|r| r.method.clone()).collect();
        m.sort();
        m.dedup();
        m
    };
    let mut scopes: Vec<(String, Vec<&TableRow>)> = vec![("all".into(), rows.iter().collect())];
    let mut groups: Vec<String> = rows.iter().filter_map(|r| r.group.clone()).collect();
    groups.sort();
    groups.dedup();
    for group in groups {
        let members: Vec<&TableRow> = rows
            .iter()
            .filter(|r| r.group.as_deref() == Some(group.as_str()))
            .collect();
        scopes.push((group, members));
    }

    let mut diff_rows = Vec::new();
    for (scope, members) in &scopes {
        let mut table: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        for row in members {
            table
                .entry(row.dataset.clone())
                .or_default()
                .insert(row.method.clone(), row.accuracy_percent);
        }
        let diffs = avg_diff(&table).with_context(|| format!("avg_diff over scope `{scope}`"))?;
        let mut out_row = vec![scope.clone()];
        for method in &methods {
            let value = diffs
                .get(method)
                .ok_or_else(|| anyhow!("scope `{scope}` is missing method `{method}`"))?;
            out_row.push(fmt_f64(*value, 2));
        }
        diff_rows.push(out_row);
    }

    let mut diff_header = vec!["scope".to_string()];
    diff_header.extend(methods.iter().cloned());
    let sections = [
        Section {
            name: Some("hadam".into()),
            header: vec![
                "dataset".into(),
                "method".into(),
                "accuracy".into(),
                "annotated".into(),
                "total".into(),
                "hadam".into(),
            ],
            rows: hadam_rows,
        },
        Section {
            name: Some("avg_diff (accuracy percentage points)".into()),
            header: diff_header,
            rows: diff_rows,
        },
    ];
    emit(&render(&sections, format), args.out.as_deref())
}

fn parse_table(args: &RecomputeArgs) -> Result<Vec<TableRow>> {
    let content = fs::read_to_string(&args.input)
        .with_context(|| format!("reading table {}", args.input.display()))?;
    let mut lines = content.lines().enumerate().filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    });

    let (_, header) = lines.next().ok_or_else(|| anyhow!("empty table"))?;
    let columns: Vec<&str> = header.split('\t').map(str::trim).collect();
    let expected = ["dataset", "method", "accuracy", "annotated", "total"];
    if columns.len() < expected.len() || columns[..expected.len()] != expected {
        bail!(
            "malformed table header `{header}`; expected columns {}",
            expected.join(", ")
        );
    }
    let has_group = columns.get(expected.len()) == Some(&"group");

    let mut rows = Vec::new();
    for (line_number, line) in lines {
        let cells: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cells.len() != columns.len() {
            bail!(
                "{}:{}: expected {} cells, got {}",
                args.input.display(),
                line_number + 1,
                columns.len(),
                cells.len()
            );
        }
        let parse_cell = |i: usize, what: &str| -> Result<f64> {
            cells[i].parse::<f64>().map_err(|_| {
                anyhow!(
                    "{}:{}: non-numeric {what} `{}`",
                    args.input.display(),
                    line_number + 1,
                    cells[i]
                )
            })
        };
        let accuracy_percent = parse_cell(2, "accuracy")?;
        let annotated = parse_cell(3, "annotated")? as usize;
        let total = parse_cell(4, "total")? as usize;
        rows.push(TableRow {
            dataset: cells[0].to_string(),
            method: cells[1].to_string(),
            accuracy_percent,
            annotated,
            total,
            group: if has_group {
                Some(cells[5].to_string())
            } else {
                None
            },
        });
    }
    if rows.is_empty() {
        bail!("table has no data rows");
    }
    Ok(rows)
}
