//! Tabular data loading, preprocessing, and bias diagnostics.
//!
//! The submodules take raw student records through the steps an audit
//! needs: joining the source CSVs, filtering and normalizing into a
//! [`Dataset`], splitting it with class stratification, and computing
//! data-bias diagnostics (group imbalance, mutual information).

mod generic;
mod mi;
mod oulad;
mod preprocess;
mod split;

pub use generic::{load_generic_csv, GenericCsvSpec};
pub use mi::{mutual_information, MiEntry, MiScores, MI_QUANTILE_BINS};
pub use oulad::{
    load_oulad, FinalResult, RawStudentRow, RawStudentTable, AGE_BANDS, EDUCATION_LEVELS,
    IMD_BANDS, STUDENT_INFO_FILE, STUDENT_VLE_FILE,
};
pub use preprocess::{
    course_ids, preprocess, preprocess_with, FeatureStat, OrdinalMaps, PreprocessOptions,
    PreprocessStats, Preprocessed, FEATURE_NAMES, SENSITIVE_FEATURES,
};
pub use split::{stratified_split, SplitPair};

use crate::Group;
use std::collections::HashSet;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TabularError {
    #[error("required file {0} is missing")]
    MissingFile(PathBuf),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Parse {
        file: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{file} is missing the required column '{column}'")]
    MissingColumn { file: PathBuf, column: String },
    #[error("column '{column}' holds unknown category '{value}'")]
    UnknownCategory { column: String, value: String },
    #[error("course '{0}' not found in the data")]
    CourseNotFound(String),
    #[error("no rows left after filtering")]
    EmptyDataset,
    #[error("unknown feature '{0}'")]
    UnknownFeature(String),
    #[error("'{0}' is not a declared sensitive feature")]
    NotSensitive(String),
    #[error("column '{0}' is not binary (values other than 0 and 1)")]
    NotBinary(String),
    #[error("split ratio must lie in (0, 1), got {0}")]
    InvalidRatio(f64),
    #[error("each class needs at least 2 rows to split (positives: {positives}, negatives: {negatives})")]
    ClassTooSmall { positives: usize, negatives: usize },
    #[error("split leaves one side empty at this ratio")]
    DegenerateSplit,
    #[error("inconsistent data shape: {0}")]
    InconsistentShape(String),
    #[error("feature '{feature}' value {value} is outside [0, 1] after normalization")]
    ValueOutOfRange { feature: String, value: f64 },
    #[error("duplicate student id '{0}' within one dataset")]
    DuplicateStudent(String),
}

/// A preprocessed per-course dataset: normalized features in [0, 1], binary
/// sensitive columns, and a binary pass/fail target.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub course_id: String,
    pub feature_names: Vec<String>,
    /// Subset of `feature_names` whose columns are binary group indicators.
    pub sensitive_names: Vec<String>,
    /// Row-major feature matrix, n rows × p features, all values in [0, 1].
    pub x: Vec<Vec<f64>>,
    /// Target: `true` = pass.
    pub y: Vec<bool>,
    /// Unique per-row identifiers (student id + presentation for OULAD).
    pub student_ids: Vec<String>,
}

impl Dataset {
    /// Builds a dataset with synthetic row ids, validating every invariant.
    pub fn from_parts(
        course_id: String,
        feature_names: Vec<String>,
        sensitive_names: Vec<String>,
        x: Vec<Vec<f64>>,
        y: Vec<bool>,
    ) -> Result<Self, TabularError> {
        let ids = (0..x.len()).map(|i| i.to_string()).collect();
        Dataset::from_parts_with_ids(course_id, feature_names, sensitive_names, x, y, ids)
    }

    pub fn from_parts_with_ids(
        course_id: String,
        feature_names: Vec<String>,
        sensitive_names: Vec<String>,
        x: Vec<Vec<f64>>,
        y: Vec<bool>,
        student_ids: Vec<String>,
    ) -> Result<Self, TabularError> {
        if x.len() != y.len() || x.len() != student_ids.len() {
            return Err(TabularError::InconsistentShape(format!(
                "{} feature rows, {} labels, {} ids",
                x.len(),
                y.len(),
                student_ids.len()
            )));
        }
        for row in &x {
            if row.len() != feature_names.len() {
                return Err(TabularError::InconsistentShape(format!(
                    "row with {} values, expected {}",
                    row.len(),
                    feature_names.len()
                )));
            }
        }
        for name in &sensitive_names {
            if !feature_names.contains(name) {
                return Err(TabularError::UnknownFeature(name.clone()));
            }
        }
        let dataset = Dataset {
            course_id,
            feature_names,
            sensitive_names,
            x,
            y,
            student_ids,
        };
        dataset.validate()?;
        Ok(dataset)
    }

    fn validate(&self) -> Result<(), TabularError> {
        for row in &self.x {
            for (value, name) in row.iter().zip(&self.feature_names) {
                if !(0.0..=1.0).contains(value) {
                    return Err(TabularError::ValueOutOfRange {
                        feature: name.clone(),
                        value: *value,
                    });
                }
            }
        }
        for name in &self.sensitive_names {
            let idx = self.feature_index(name)?;
            if self.x.iter().any(|row| row[idx] != 0.0 && row[idx] != 1.0) {
                return Err(TabularError::NotBinary(name.clone()));
            }
        }
        let mut seen = HashSet::with_capacity(self.student_ids.len());
        for id in &self.student_ids {
            if !seen.insert(id) {
                return Err(TabularError::DuplicateStudent(id.clone()));
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.x.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_index(&self, name: &str) -> Result<usize, TabularError> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TabularError::UnknownFeature(name.to_string()))
    }

    pub fn column(&self, index: usize) -> Vec<f64> {
        self.x.iter().map(|row| row[index]).collect()
    }

    /// Group membership per row under the given sensitive feature.
    pub fn sensitive_groups(&self, name: &str) -> Result<Vec<Group>, TabularError> {
        if !self.sensitive_names.iter().any(|n| n == name) {
            return Err(TabularError::NotSensitive(name.to_string()));
        }
        let idx = self.feature_index(name)?;
        self.x
            .iter()
            .map(|row| {
                let value = row[idx];
                if value == 0.0 {
                    Ok(Group::G0)
                } else if value == 1.0 {
                    Ok(Group::G1)
                } else {
                    Err(TabularError::NotBinary(name.to_string()))
                }
            })
            .collect()
    }

    /// The rows at the given indices as a new dataset.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            course_id: self.course_id.clone(),
            feature_names: self.feature_names.clone(),
            sensitive_names: self.sensitive_names.clone(),
            x: rows.iter().map(|&i| self.x[i].clone()).collect(),
            y: rows.iter().map(|&i| self.y[i]).collect(),
            student_ids: rows.iter().map(|&i| self.student_ids[i].clone()).collect(),
        }
    }

    /// Serializes the dataset as CSV: feature columns then a `target`
    /// column coded 0/1.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.feature_names.join(","));
        out.push_str(",target\n");
        for (row, &label) in self.x.iter().zip(&self.y) {
            for value in row {
                out.push_str(&format!("{value},"));
            }
            out.push_str(if label { "1\n" } else { "0\n" });
        }
        out
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<(), TabularError> {
        std::fs::write(path, self.to_csv_string()).map_err(|source| TabularError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Proportions of group 0 and group 1 under a sensitive feature.
///
/// The two proportions sum to one exactly.
pub fn group_proportions(d: &Dataset, sensitive: &str) -> Result<(f64, f64), TabularError> {
    let groups = d.sensitive_groups(sensitive)?;
    if groups.is_empty() {
        return Err(TabularError::EmptyDataset);
    }
    let ones = groups.iter().filter(|g| **g == Group::G1).count();
    let p1 = ones as f64 / groups.len() as f64;
    Ok((1.0 - p1, p1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_dataset(groups: &[f64]) -> Dataset {
        Dataset::from_parts(
            "c".into(),
            vec!["s".into(), "f".into()],
            vec!["s".into()],
            groups.iter().map(|&g| vec![g, 0.5]).collect(),
            groups.iter().map(|&g| g == 1.0).collect(),
        )
        .unwrap()
    }

    #[test]
    fn proportions_are_exact_rationals() {
        let d = binary_dataset(&[0.0, 0.0, 0.0, 1.0]);
        let (p0, p1) = group_proportions(&d, "s").unwrap();
        assert_eq!(p0, 0.75);
        assert_eq!(p1, 0.25);
    }

    #[test]
    fn proportions_sum_to_one_even_for_awkward_counts() {
        let d = binary_dataset(&[0.0, 1.0, 1.0]);
        let (p0, p1) = group_proportions(&d, "s").unwrap();
        assert_eq!(p0 + p1, 1.0);
    }

    #[test]
    fn degenerate_single_group_is_all_zero_share() {
        let d = binary_dataset(&[0.0, 0.0, 0.0]);
        assert_eq!(group_proportions(&d, "s").unwrap(), (1.0, 0.0));
    }

    #[test]
    fn non_sensitive_feature_is_rejected() {
        let d = binary_dataset(&[0.0, 1.0]);
        assert!(matches!(
            group_proportions(&d, "f"),
            Err(TabularError::NotSensitive(_))
        ));
        assert!(matches!(
            group_proportions(&d, "nope"),
            Err(TabularError::NotSensitive(_))
        ));
    }

    #[test]
    fn dataset_invariants_are_enforced() {
        let out_of_range = Dataset::from_parts(
            "c".into(),
            vec!["a".into()],
            vec![],
            vec![vec![1.5]],
            vec![true],
        );
        assert!(matches!(
            out_of_range,
            Err(TabularError::ValueOutOfRange { .. })
        ));

        let non_binary_sensitive = Dataset::from_parts(
            "c".into(),
            vec!["s".into()],
            vec!["s".into()],
            vec![vec![0.5]],
            vec![true],
        );
        assert!(matches!(
            non_binary_sensitive,
            Err(TabularError::NotBinary(_))
        ));

        let duplicate_ids = Dataset::from_parts_with_ids(
            "c".into(),
            vec!["a".into()],
            vec![],
            vec![vec![0.0], vec![1.0]],
            vec![true, false],
            vec!["x".into(), "x".into()],
        );
        assert!(matches!(
            duplicate_ids,
            Err(TabularError::DuplicateStudent(_))
        ));
    }

    #[test]
    fn csv_round_trip_shape() {
        let d = binary_dataset(&[0.0, 1.0]);
        let csv = d.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "s,f,target");
        assert_eq!(lines.next().unwrap(), "0,0.5,0");
        assert_eq!(lines.next().unwrap(), "1,0.5,1");
    }
}
