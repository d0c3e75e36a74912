//! Minimal ARFF loader.
//!
//! Supports the subset the public drift datasets use: `@relation`,
//! `@attribute` declarations with numeric (`numeric`/`real`/`integer`) or
//! nominal (`{a,b,c}`) types, a dense `@data` section and `%` comments. The
//! last attribute is the class and must be nominal; its values map to dense
//! ids in declaration order. Nominal feature attributes are one-hot encoded.
//! String/date attributes, sparse rows and missing values are rejected.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
enum AttributeType {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone)]
struct Attribute {
    name: String,
    ty: AttributeType,
}

pub fn load_arff<S: Scalar>(path: &Path) -> Result<Vec<Sample<S>>> {
    let display = path.display().to_string();
    let content = fs::read_to_string(path)?;

    let mut attributes: Vec<Attribute> = Vec::new();
    let mut in_data = false;
    let mut samples: Vec<Sample<S>> = Vec::new();

    for (line_number, raw) in content.lines().enumerate() {
        let row = line_number + 1;
        let line = strip_comment(raw).trim().to_string();
        if line.is_empty() {
            continue;
        }

        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                continue;
            } else if lower.starts_with("@attribute") {
                attributes.push(parse_attribute(&line, &display, row)?);
            } else if lower.starts_with("@data") {
                if attributes.len() < 2 {
                    return Err(parse_error(
                        &display,
                        row,
                        "need at least one feature attribute and a class attribute".into(),
                    ));
                }
                match attributes.last().map(|a| &a.ty) {
                    Some(AttributeType::Nominal(_)) => {}
                    _ => {
                        return Err(parse_error(
                            &display,
                            row,
                            "the last attribute (the class) must be nominal".into(),
                        ))
                    }
                }
                in_data = true;
            } else {
                return Err(parse_error(
                    &display,
                    row,
                    format!("unexpected header line `{line}`"),
                ));
            }
            continue;
        }

        if line.starts_with('{') {
            return Err(parse_error(
                &display,
                row,
                "sparse-format ARFF data is not supported".into(),
            ));
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != attributes.len() {
            return Err(parse_error(
                &display,
                row,
                format!("expected {} cells, got {}", attributes.len(), cells.len()),
            ));
        }

        let mut features: Vec<S> = Vec::new();
        for (attribute, &cell) in attributes.iter().zip(&cells).take(attributes.len() - 1) {
            if cell == "?" {
                return Err(parse_error(
                    &display,
                    row,
                    format!("missing value for attribute `{}`", attribute.name),
                ));
            }
            match &attribute.ty {
                AttributeType::Numeric => {
                    let value: f64 = cell.parse().map_err(|_| {
                        parse_error(
                            &display,
                            row,
                            format!("non-numeric value `{cell}` for attribute `{}`", attribute.name),
                        )
                    })?;
                    features.push(S::cast(value));
                }
                AttributeType::Nominal(values) => {
                    let token = unquote(cell);
                    let position = values.iter().position(|v| v == &token).ok_or_else(|| {
                        parse_error(
                            &display,
                            row,
                            format!("value `{token}` not declared for attribute `{}`", attribute.name),
                        )
                    })?;
                    for i in 0..values.len() {
                        features.push(if i == position { S::one() } else { S::zero() });
                    }
                }
            }
        }

        let class_cell = unquote(cells[cells.len() - 1]);
        let AttributeType::Nominal(class_values) = &attributes.last().unwrap().ty else {
            unreachable!("class nominality checked at @data");
        };
        let class = class_values
            .iter()
            .position(|v| v == &class_cell)
            .ok_or_else(|| {
                parse_error(&display, row, format!("undeclared class value `{class_cell}`"))
            })?;
        samples.push(Sample::labeled(samples.len(), features, class));
    }

    if !in_data {
        return Err(parse_error(&display, 0, "no @data section".into()));
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(samples)
}

fn parse_attribute(line: &str, path: &str, row: usize) -> Result<Attribute> {
    let rest = line["@attribute".len()..].trim();
    if rest.is_empty() {
        return Err(parse_error(path, row, "attribute declaration without a name".into()));
    }

    let (name, type_part) = if let Some(stripped) = rest.strip_prefix('\'') {
        let end = stripped
            .find('\'')
            .ok_or_else(|| parse_error(path, row, "unterminated quoted attribute name".into()))?;
        (stripped[..end].to_string(), stripped[end + 1..].trim())
    } else if let Some(stripped) = rest.strip_prefix('"') {
        let end = stripped
            .find('"')
            .ok_or_else(|| parse_error(path, row, "unterminated quoted attribute name".into()))?;
        (stripped[..end].to_string(), stripped[end + 1..].trim())
    } else {
        let mut parts = rest.splitn(2, char::is_whitespace);
        let name = parts.next().unwrap_or_default().to_string();
        (name, parts.next().unwrap_or_default().trim())
    };
    if type_part.is_empty() {
        return Err(parse_error(path, row, format!("attribute `{name}` has no type")));
    }

    let lower = type_part.to_ascii_lowercase();
    let ty = if lower == "numeric" || lower == "real" || lower == "integer" {
        AttributeType::Numeric
    } else if type_part.starts_with('{') {
        let inner = type_part
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| parse_error(path, row, "malformed nominal value list".into()))?;
        let values: Vec<String> = inner
            .split(',')
            .map(|v| unquote(v.trim()))
            .filter(|v| !v.is_empty())
            .collect();
        if values.is_empty() {
            return Err(parse_error(path, row, "empty nominal value list".into()));
        }
        AttributeType::Nominal(values)
    } else {
        return Err(parse_error(
            path,
            row,
            format!("unsupported attribute type `{type_part}` for `{name}`"),
        ));
    };
    Ok(Attribute { name, ty })
}

fn parse_error(path: &str, row: usize, reason: String) -> Error {
    Error::Parse {
        path: path.to_string(),
        row,
        reason,
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('%') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn unquote(token: &str) -> String {
    let token = token.trim();
    let token = token
        .strip_prefix('\'')
        .and_then(|t| t.strip_suffix('\''))
        .or_else(|| token.strip_prefix('"').and_then(|t| t.strip_suffix('"')))
        .unwrap_or(token);
    token.to_string()
}
