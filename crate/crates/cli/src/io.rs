//! CSV ingestion and export.
//!
//! Dialect: comma-separated UTF-8, `.` decimal point, header row of feature
//! names, one sample per row. A leading ID column is recognized by its header
//! (empty, `id`, `sample`, `sample_id`) or by non-numeric values.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use slr_core::{CompositionMatrix, Family};

use crate::error::{CliError, Result};

#[derive(Debug, Clone)]
pub struct Dataset {
    pub x: CompositionMatrix,
    pub y: Option<Vec<f64>>,
    pub ids: Option<Vec<String>>,
}

const ID_HEADERS: [&str; 5] = ["", "id", "sample", "sample_id", "sampleid"];

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(CliError::RaggedRows {
                row: i + 1,
                expected: header.len(),
                got: record.len(),
            });
        }
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

fn parse_number(value: &str, row: usize, column: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::NonNumeric {
            row,
            column: column.to_string(),
            value: value.to_string(),
        })
}

/// Reads a single-column response file; a non-numeric first line is a header.
fn read_response_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.split(',').next_back().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::NonNumeric {
                    row: i,
                    column: path.display().to_string(),
                    value: field.to_string(),
                })
            }
        }
    }
    Ok(values)
}

/// Loads a sample-by-feature table onto the simplex.
///
/// `response` names either a column of the table or a separate
/// single-column file aligned by row order. With a `pseudocount`, it is added
/// to every feature cell before closure; without one, zeros are an error.
pub fn load_dataset(
    path: &Path,
    response: Option<&str>,
    family: Family,
    pseudocount: Option<f64>,
) -> Result<Dataset> {
    load(path, response, family, pseudocount, None)
}

/// Loads only the named feature columns, in the given order; other columns
/// (response, covariates) are ignored. Used to apply a saved model.
pub fn load_features(path: &Path, names: &[String], pseudocount: Option<f64>) -> Result<Dataset> {
    load(path, None, Family::Gaussian, pseudocount, Some(names))
}

fn load(
    path: &Path,
    response: Option<&str>,
    family: Family,
    pseudocount: Option<f64>,
    keep: Option<&[String]>,
) -> Result<Dataset> {
    if let Some(pc) = pseudocount {
        if !(pc.is_finite() && pc > 0.0) {
            return Err(CliError::InvalidArgument(format!(
                "pseudocount must be > 0, got {pc}"
            )));
        }
    }
    let (header, rows) = read_table(path)?;
    let response_col = response.and_then(|r| header.iter().position(|h| h == r));
    if let (Some(r), None) = (response, response_col) {
        if !Path::new(r).is_file() {
            return Err(CliError::MissingResponse(r.to_string()));
        }
    }

    let first_is_id = response_col != Some(0)
        && header.len() > 1
        && (ID_HEADERS.contains(&header[0].to_ascii_lowercase().as_str())
            || rows.iter().any(|r| r[0].parse::<f64>().is_err()));

    let feature_cols: Vec<usize> = match keep {
        Some(names) => names
            .iter()
            .map(|name| {
                header.iter().position(|h| h == name).ok_or_else(|| {
                    CliError::InvalidArgument(format!("column {name:?} is missing from the input"))
                })
            })
            .collect::<Result<_>>()?,
        None => (0..header.len())
            .filter(|&c| Some(c) != response_col && !(first_is_id && c == 0))
            .collect(),
    };
    let names: Vec<String> = feature_cols.iter().map(|&c| header[c].clone()).collect();

    let mut raw = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut values = Vec::with_capacity(feature_cols.len());
        for &c in &feature_cols {
            let mut v = parse_number(&row[c], i + 1, &header[c])?;
            if v < 0.0 {
                return Err(CliError::NegativeValue {
                    row: i + 1,
                    column: header[c].clone(),
                    value: v,
                });
            }
            match pseudocount {
                Some(pc) => v += pc,
                None if v == 0.0 => {
                    return Err(CliError::ZeroWithoutPseudocount {
                        row: i + 1,
                        column: header[c].clone(),
                    })
                }
                None => {}
            }
            values.push(v);
        }
        raw.push(values);
    }
    let x = CompositionMatrix::from_raw_rows(&raw, Some(names))?;

    let y = match (response, response_col) {
        (None, _) => None,
        (Some(_), Some(c)) => Some(
            rows.iter()
                .enumerate()
                .map(|(i, r)| parse_number(&r[c], i + 1, &header[c]))
                .collect::<Result<Vec<f64>>>()?,
        ),
        (Some(r), None) => Some(read_response_file(Path::new(r))?),
    };
    if let Some(y) = &y {
        if y.len() != x.n() {
            return Err(CliError::ResponseLengthMismatch {
                expected: x.n(),
                got: y.len(),
            });
        }
        if family == Family::Binomial {
            if let Some((i, &v)) = y.iter().enumerate().find(|(_, &v)| v != 0.0 && v != 1.0) {
                return Err(CliError::BinaryResponseNotIn01 { row: i + 1, value: v });
            }
        }
    }
    let ids = first_is_id.then(|| rows.iter().map(|r| r[0].clone()).collect());
    Ok(Dataset { x, y, ids })
}

/// Writes proportions and response as CSV (`x1..xp,y`) with shortest
/// round-trip float formatting.
pub fn write_dataset_csv<W: Write>(out: W, x: &CompositionMatrix, y: &[f64]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<String> = x.feature_names().to_vec();
    header.push("y".into());
    writer.write_record(&header)?;
    for (row, yi) in x.rows().zip(y) {
        let mut record: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        record.push(yi.to_string());
        writer.write_record(&record)?;
    }
    writer.flush().map_err(|source| CliError::Io {
        path: "<csv output>".into(),
        source,
    })?;
    Ok(())
}
