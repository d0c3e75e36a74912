//! CSV dataset loader.
//!
//! Comma-separated, no header by default (matching the public drift-dataset
//! files), numeric feature columns, label in the last column. Row order is
//! preserved — stream order is semantically load-bearing — and labels are
//! mapped to dense class ids in first-seen order.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    pub has_header: bool,
}

pub fn load_csv<S: Scalar>(path: &Path, options: &CsvOptions) -> Result<Vec<Sample<S>>> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_error(&display, 0, e.to_string()))?;

    let mut classes: HashMap<String, usize> = HashMap::new();
    let mut samples = Vec::new();
    let header_rows = usize::from(options.has_header);
    for (i, record) in reader.records().enumerate() {
        let row_number = i + 1 + header_rows;
        let record = record.map_err(|e| parse_error(&display, row_number, e.to_string()))?;
        if record.len() < 2 {
            return Err(parse_error(
                &display,
                row_number,
                format!("need at least one feature and a label, got {} cells", record.len()),
            ));
        }
        let mut features = Vec::with_capacity(record.len() - 1);
        for (col, cell) in record.iter().take(record.len() - 1).enumerate() {
            if cell.is_empty() {
                return Err(parse_error(
                    &display,
                    row_number,
                    format!("missing value in column {}", col + 1),
                ));
            }
            let value: f64 = cell.parse().map_err(|_| {
                parse_error(
                    &display,
                    row_number,
                    format!("non-numeric feature cell `{cell}` in column {}", col + 1),
                )
            })?;
            features.push(S::cast(value));
        }
        let label_token = record.get(record.len() - 1).unwrap_or("").to_string();
        if label_token.is_empty() {
            return Err(parse_error(&display, row_number, "missing label cell".into()));
        }
        let next_id = classes.len();
        let class = *classes.entry(label_token).or_insert(next_id);
        samples.push(Sample::labeled(samples.len(), features, class));
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(samples)
}

fn parse_error(path: &str, row: usize, reason: String) -> Error {
    Error::Parse {
        path: path.to_string(),
        row,
        reason,
    }
}
