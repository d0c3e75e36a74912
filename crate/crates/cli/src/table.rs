//! Deterministic table emission: tab-separated (default) or a markdown
//! mirror of the same rows.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use crate::settings::OutputFormat;

/// Report row schema shared by `run` and `sweep`; the column order is part
/// of the external interface.
pub const REPORT_COLUMNS: [&str; 12] = [
    "dataset", "detector", "selector", "w", "rho", "tau_or_nu", "repeat", "accuracy", "drifts",
    "annotated", "total", "hadam",
];

/// One output section: an optional `# name` marker, a header row and data
/// rows.
pub struct Section {
    pub name: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn render(sections: &[Section], format: OutputFormat) -> String {
    let mut out = String::new();
    for (i, section) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if let Some(name) = &section.name {
            out.push_str(&format!("# {name}\n"));
        }
        match format {
            OutputFormat::Tsv => {
                out.push_str(&section.header.join("\t"));
                out.push('\n');
                for row in &section.rows {
                    out.push_str(&row.join("\t"));
                    out.push('\n');
                }
            }
            OutputFormat::Markdown => {
                out.push_str(&format!("| {} |\n", section.header.join(" | ")));
                out.push_str(&format!(
                    "|{}\n",
                    " --- |".repeat(section.header.len())
                ));
                for row in &section.rows {
                    out.push_str(&format!("| {} |\n", row.join(" | ")));
                }
            }
        }
    }
    out
}

pub fn emit(content: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing output to {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Fixed-precision float for byte-identical output.
pub fn fmt_f64(value: f64, decimals: usize) -> String {
    format!("{value:.decimals$}")
}
