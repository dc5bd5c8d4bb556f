//! Filtering, encoding, and normalization of raw student rows into a
//! per-course [`Dataset`].

use super::oulad::{FinalResult, RawStudentTable, AGE_BANDS, EDUCATION_LEVELS, IMD_BANDS};
use super::{Dataset, TabularError};
use serde::{Deserialize, Serialize};

/// Feature layout of a preprocessed OULAD dataset.
pub const FEATURE_NAMES: [&str; 8] = [
    "gender",
    "age",
    "disability",
    "highest_education",
    "poverty",
    "num_of_prev_attempts",
    "studied_credits",
    "sum_click",
];

/// The audited sensitive features.
pub const SENSITIVE_FEATURES: [&str; 3] = ["gender", "poverty", "disability"];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PreprocessOptions {
    /// Which side of the 50% deprivation threshold the 40–50% band falls on.
    /// `false` (default) codes it as group 0 (less deprived); `true` moves
    /// the boundary band into group 1.
    pub poverty_boundary_deprived: bool,
}

/// Pre-normalization range of one feature on the course data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStat {
    pub name: String,
    pub min: f64,
    pub max: f64,
    /// A constant column normalizes to all zeros.
    pub constant: bool,
}

/// The ordinal encodings applied before normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinalMaps {
    pub age: Vec<(String, u32)>,
    pub highest_education: Vec<(String, u32)>,
    pub imd_band: Vec<(String, u32)>,
}

impl OrdinalMaps {
    fn standard() -> Self {
        let rank = |names: &[&str]| {
            names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.to_string(), i as u32))
                .collect()
        };
        OrdinalMaps {
            age: rank(&AGE_BANDS),
            highest_education: rank(&EDUCATION_LEVELS),
            imd_band: rank(&IMD_BANDS),
        }
    }
}

/// Row-drop counts and normalization statistics for one course.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessStats {
    pub course_id: String,
    pub rows_in_course: usize,
    pub dropped_withdrawn: usize,
    pub dropped_missing_poverty: usize,
    pub rows_out: usize,
    pub positives: usize,
    pub feature_stats: Vec<FeatureStat>,
    pub ordinal_maps: Option<OrdinalMaps>,
    pub poverty_boundary_deprived: bool,
}

/// A dataset together with the statistics that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub dataset: Dataset,
    pub stats: PreprocessStats,
}

/// Distinct course ids present in the raw table, sorted.
pub fn course_ids(raw: &RawStudentTable) -> Vec<String> {
    let mut ids: Vec<String> = raw.rows.iter().map(|r| r.course_id.clone()).collect();
    ids.sort();
    ids.dedup();
    ids
}

fn ordinal_rank(table: &[&str], value: &str, column: &str) -> Result<f64, TabularError> {
    table
        .iter()
        .position(|v| *v == value)
        .map(|i| i as f64)
        .ok_or_else(|| TabularError::UnknownCategory {
            column: column.to_string(),
            value: value.to_string(),
        })
}

/// Min–max normalizes one column in place. Constant columns become all
/// zeros with a warning rather than an error.
pub(crate) fn normalize_column(values: &mut [f64], name: &str) -> FeatureStat {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let constant = min == max;
    if constant {
        log::warn!("feature '{name}' is constant ({min}); normalizing to all zeros");
        values.iter_mut().for_each(|v| *v = 0.0);
    } else {
        values
            .iter_mut()
            .for_each(|v| *v = (*v - min) / (max - min));
    }
    FeatureStat {
        name: name.to_string(),
        min,
        max,
        constant,
    }
}

pub fn preprocess(raw: &RawStudentTable, course_id: &str) -> Result<Preprocessed, TabularError> {
    preprocess_with(raw, course_id, &PreprocessOptions::default())
}

/// Filters the raw table to one course, drops withdrawn and
/// missing-poverty rows, encodes ordinals, binarizes poverty at the 50%
/// deprivation threshold, and min–max normalizes every feature on the
/// course's own data.
pub fn preprocess_with(
    raw: &RawStudentTable,
    course_id: &str,
    options: &PreprocessOptions,
) -> Result<Preprocessed, TabularError> {
    let course_rows: Vec<_> = raw
        .rows
        .iter()
        .filter(|r| r.course_id == course_id)
        .collect();
    if course_rows.is_empty() {
        return Err(TabularError::CourseNotFound(course_id.to_string()));
    }
    let rows_in_course = course_rows.len();

    let mut dropped_withdrawn = 0usize;
    let mut dropped_missing_poverty = 0usize;
    let deprived_from = if options.poverty_boundary_deprived {
        4
    } else {
        5
    };

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); FEATURE_NAMES.len()];
    let mut y = Vec::new();
    let mut ids = Vec::new();
    for row in course_rows {
        if row.final_result == FinalResult::Withdrawn {
            dropped_withdrawn += 1;
            continue;
        }
        let Some(imd) = row.imd_band else {
            dropped_missing_poverty += 1;
            continue;
        };
        let gender = match row.gender.as_str() {
            "F" => 0.0,
            "M" => 1.0,
            other => {
                return Err(TabularError::UnknownCategory {
                    column: "gender".into(),
                    value: other.into(),
                })
            }
        };
        let disability = match row.disability.as_str() {
            "N" => 0.0,
            "Y" => 1.0,
            other => {
                return Err(TabularError::UnknownCategory {
                    column: "disability".into(),
                    value: other.into(),
                })
            }
        };
        let age = ordinal_rank(&AGE_BANDS, &row.age_band, "age_band")?;
        let education = ordinal_rank(
            &EDUCATION_LEVELS,
            &row.highest_education,
            "highest_education",
        )?;
        let poverty = if imd >= deprived_from { 1.0 } else { 0.0 };

        let values = [
            gender,
            age,
            disability,
            education,
            poverty,
            row.num_of_prev_attempts,
            row.studied_credits,
            row.sum_click,
        ];
        for (column, value) in columns.iter_mut().zip(values) {
            column.push(value);
        }
        y.push(matches!(
            row.final_result,
            FinalResult::Pass | FinalResult::Distinction
        ));
        ids.push(format!("{}_{}", row.student_id, row.presentation));
    }

    if y.is_empty() {
        return Err(TabularError::EmptyDataset);
    }

    let feature_stats: Vec<FeatureStat> = columns
        .iter_mut()
        .zip(FEATURE_NAMES)
        .map(|(column, name)| normalize_column(column, name))
        .collect();

    let n = y.len();
    let x: Vec<Vec<f64>> = (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let positives = y.iter().filter(|&&l| l).count();

    let dataset = Dataset::from_parts_with_ids(
        course_id.to_string(),
        FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        SENSITIVE_FEATURES.iter().map(|s| s.to_string()).collect(),
        x,
        y,
        ids,
    )?;

    Ok(Preprocessed {
        dataset,
        stats: PreprocessStats {
            course_id: course_id.to_string(),
            rows_in_course,
            dropped_withdrawn,
            dropped_missing_poverty,
            rows_out: n,
            positives,
            feature_stats,
            ordinal_maps: Some(OrdinalMaps::standard()),
            poverty_boundary_deprived: options.poverty_boundary_deprived,
        },
    })
}
