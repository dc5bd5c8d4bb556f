//! Loading a generic single-CSV dataset: declared target and sensitive
//! columns, everything numeric, no OULAD-specific joins.

use super::preprocess::{normalize_column, FeatureStat, PreprocessStats, Preprocessed};
use super::{Dataset, TabularError};
use std::path::PathBuf;

/// Where and how to read a generic CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericCsvSpec {
    pub path: PathBuf,
    /// Column holding the binary target (values 0/1).
    pub target_column: String,
    /// Columns holding binary group indicators (values 0/1).
    pub sensitive_columns: Vec<String>,
    /// Dataset label; defaults to the file stem.
    pub course_id: Option<String>,
}

/// Reads the CSV into a normalized [`Dataset`].
///
/// Non-sensitive feature columns are min–max normalized on the full file;
/// sensitive and target columns must already be 0/1. Rows with empty cells
/// are dropped with a warning; non-numeric cells are parse errors.
pub fn load_generic_csv(spec: &GenericCsvSpec) -> Result<Preprocessed, TabularError> {
    let path = &spec.path;
    if !path.is_file() {
        return Err(TabularError::MissingFile(path.clone()));
    }
    let file = std::fs::File::open(path).map_err(|source| TabularError::Io {
        path: path.clone(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| TabularError::Parse {
            file: path.clone(),
            line: 1,
            message: e.to_string(),
        })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let target_idx = headers
        .iter()
        .position(|h| *h == spec.target_column)
        .ok_or_else(|| TabularError::MissingColumn {
            file: path.clone(),
            column: spec.target_column.clone(),
        })?;
    for name in &spec.sensitive_columns {
        if !headers.contains(name) {
            return Err(TabularError::MissingColumn {
                file: path.clone(),
                column: name.clone(),
            });
        }
        if *name == spec.target_column {
            return Err(TabularError::NotSensitive(name.clone()));
        }
    }

    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != target_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); feature_names.len()];
    let mut y = Vec::new();
    let mut dropped_missing = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| TabularError::Parse {
            file: path.clone(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().any(|cell| cell.trim().is_empty()) {
            log::warn!(
                "{}:{line}: dropping row with missing values",
                path.display()
            );
            dropped_missing += 1;
            continue;
        }
        let mut parsed = Vec::with_capacity(headers.len());
        for (i, cell) in record.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| TabularError::Parse {
                file: path.clone(),
                line,
                message: format!(
                    "cannot parse '{cell}' as a number for column '{}'",
                    headers[i]
                ),
            })?;
            parsed.push(value);
        }
        let target = parsed[target_idx];
        if target != 0.0 && target != 1.0 {
            return Err(TabularError::Parse {
                file: path.clone(),
                line,
                message: format!(
                    "target column '{}' must be 0 or 1, got {target}",
                    spec.target_column
                ),
            });
        }
        y.push(target == 1.0);
        let mut col_iter = columns.iter_mut();
        for (i, value) in parsed.into_iter().enumerate() {
            if i != target_idx {
                col_iter.next().unwrap().push(value);
            }
        }
    }
    if y.is_empty() {
        return Err(TabularError::EmptyDataset);
    }

    let mut feature_stats: Vec<FeatureStat> = Vec::with_capacity(feature_names.len());
    for (column, name) in columns.iter_mut().zip(&feature_names) {
        if spec.sensitive_columns.contains(name) {
            if column.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(TabularError::NotBinary(name.clone()));
            }
            feature_stats.push(FeatureStat {
                name: name.clone(),
                min: 0.0,
                max: 1.0,
                constant: false,
            });
        } else {
            feature_stats.push(normalize_column(column, name));
        }
    }

    let course_id = spec.course_id.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "csv".to_string())
    });
    let n = y.len();
    let positives = y.iter().filter(|&&l| l).count();
    let x: Vec<Vec<f64>> = (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let dataset = Dataset::from_parts(
        course_id.clone(),
        feature_names,
        spec.sensitive_columns.clone(),
        x,
        y,
    )?;

    Ok(Preprocessed {
        dataset,
        stats: PreprocessStats {
            course_id,
            rows_in_course: n + dropped_missing,
            dropped_withdrawn: 0,
            dropped_missing_poverty: dropped_missing,
            rows_out: n,
            positives,
            feature_stats,
            ordinal_maps: None,
            poverty_boundary_deprived: false,
        },
    })
}
