//! Matrix input files.
//!
//! JSON: `{"rows": n, "cols": m, "data": [[entry, ...], ...]}` where each
//! entry is a real number or `[re, im]`. CSV: real entries, one row per line.

use std::path::Path;

use clap::ValueEnum;
use pertexp::{Complex64, ComplexMatrix};
use serde::Deserialize;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Json,
    Csv,
}

impl InputFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Json,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Entry>>,
}

pub fn parse_json_matrix(text: &str) -> CliResult<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("invalid matrix JSON: {e}")))?;
    if file.data.len() != file.rows {
        return Err(CliError::usage(format!(
            "matrix declares {} rows but data has {}",
            file.rows,
            file.data.len()
        )));
    }
    if let Some((i, row)) = file
        .data
        .iter()
        .enumerate()
        .find(|(_, r)| r.len() != file.cols)
    {
        return Err(CliError::usage(format!(
            "matrix declares {} cols but row {i} has {}",
            file.cols,
            row.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(
        file.rows,
        file.cols,
        |r, c| match file.data[r][c] {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        },
    ))
}

pub fn parse_csv_matrix(text: &str) -> CliResult<ComplexMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::usage(format!("invalid CSV: {e}")))?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    CliError::usage(format!("invalid CSV entry {field:?} in row {line}"))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::usage("CSV matrix is empty"));
    }
    let cols = rows[0].len();
    Ok(ComplexMatrix::from_fn(rows.len(), cols, |r, c| {
        Complex64::new(rows[r][c], 0.0)
    }))
}

pub fn read_matrix(path: &Path, format: Option<InputFormat>) -> CliResult<ComplexMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = match format.unwrap_or_else(|| InputFormat::from_path(path)) {
        InputFormat::Json => parse_json_matrix(&text),
        InputFormat::Csv => parse_csv_matrix(&text),
    };
    parsed.map_err(|e| CliError::usage(format!("{}: {}", path.display(), e.message)))
}
