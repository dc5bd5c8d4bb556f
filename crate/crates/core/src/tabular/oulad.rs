//! Loading the OULAD CSV layout: student demographics joined with
//! aggregated virtual-learning-environment click counts.

use super::TabularError;
use std::collections::HashMap;
use std::path::{Path, PathBuf};

pub const STUDENT_INFO_FILE: &str = "studentInfo.csv";
pub const STUDENT_VLE_FILE: &str = "studentVle.csv";

/// Age bands in ascending order.
pub const AGE_BANDS: [&str; 3] = ["0-35", "35-55", "55<="];

/// Education levels in ascending order of attainment.
pub const EDUCATION_LEVELS: [&str; 5] = [
    "No Formal quals",
    "Lower Than A Level",
    "A Level or Equivalent",
    "HE Qualification",
    "Post Graduate Qualification",
];

/// Deprivation-index bands in ascending order of deprivation. The source
/// data writes them with a trailing `%` (inconsistently for `10-20`), so
/// matching strips that suffix.
pub const IMD_BANDS: [&str; 10] = [
    "0-10", "10-20", "20-30", "30-40", "40-50", "50-60", "60-70", "70-80", "80-90", "90-100",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalResult {
    Pass,
    Fail,
    Distinction,
    Withdrawn,
}

impl std::str::FromStr for FinalResult {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Pass" => Ok(FinalResult::Pass),
            "Fail" => Ok(FinalResult::Fail),
            "Distinction" => Ok(FinalResult::Distinction),
            "Withdrawn" => Ok(FinalResult::Withdrawn),
            other => Err(format!("unknown final_result '{other}'")),
        }
    }
}

/// One student's enrolment in one course presentation, with raw categorical
/// values preserved and the aggregated click count joined in.
#[derive(Debug, Clone, PartialEq)]
pub struct RawStudentRow {
    pub course_id: String,
    pub presentation: String,
    pub student_id: String,
    pub gender: String,
    pub age_band: String,
    pub disability: String,
    pub highest_education: String,
    /// Deprivation band rank 0..=9; `None` when the value is missing.
    pub imd_band: Option<u8>,
    pub num_of_prev_attempts: f64,
    pub studied_credits: f64,
    pub sum_click: f64,
    pub final_result: FinalResult,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawStudentTable {
    pub rows: Vec<RawStudentRow>,
}

impl RawStudentTable {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}

pub(crate) fn imd_band_rank(value: &str) -> Option<u8> {
    let normalized = value.trim().trim_end_matches('%');
    IMD_BANDS
        .iter()
        .position(|b| *b == normalized)
        .map(|i| i as u8)
}

fn is_missing(value: &str) -> bool {
    let v = value.trim();
    v.is_empty() || v == "?" || v == "NA"
}

struct CsvFile {
    path: PathBuf,
    reader: csv::Reader<std::fs::File>,
}

impl CsvFile {
    fn open(path: PathBuf) -> Result<Self, TabularError> {
        if !path.is_file() {
            return Err(TabularError::MissingFile(path));
        }
        let file = std::fs::File::open(&path).map_err(|source| TabularError::Io {
            path: path.clone(),
            source,
        })?;
        let reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(file);
        Ok(CsvFile { path, reader })
    }

    /// Column index per requested header name. `Ok(None)` means the file has
    /// no header at all (an empty file).
    fn columns(&mut self, names: &[&str]) -> Result<Option<Vec<usize>>, TabularError> {
        let headers = self.reader.headers().map_err(|e| TabularError::Parse {
            file: self.path.clone(),
            line: 1,
            message: e.to_string(),
        })?;
        if headers.iter().all(|h| h.trim().is_empty()) {
            return Ok(None);
        }
        let mut indices = Vec::with_capacity(names.len());
        for name in names {
            match headers.iter().position(|h| h.trim() == *name) {
                Some(i) => indices.push(i),
                None => {
                    return Err(TabularError::MissingColumn {
                        file: self.path.clone(),
                        column: (*name).to_string(),
                    })
                }
            }
        }
        Ok(Some(indices))
    }
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn parse_f64(
    record: &csv::StringRecord,
    idx: usize,
    column: &str,
    path: &Path,
) -> Result<f64, TabularError> {
    let raw = record.get(idx).unwrap_or("");
    raw.trim().parse::<f64>().map_err(|_| TabularError::Parse {
        file: path.to_path_buf(),
        line: record_line(record),
        message: format!("cannot parse '{raw}' as a number for column '{column}'"),
    })
}

fn click_key(module: &str, presentation: &str, student: &str) -> String {
    format!("{module}\u{1f}{presentation}\u{1f}{student}")
}

/// Sums each student's clicks over all their VLE interactions in a course
/// presentation. An empty file yields an empty map, not an error.
///
/// The interaction log dwarfs every other input (tens of millions of rows
/// on the full dataset), so the loop reuses one key buffer and only
/// allocates for first-seen students.
fn aggregate_clicks(dir: &Path) -> Result<HashMap<String, f64>, TabularError> {
    let mut file = CsvFile::open(dir.join(STUDENT_VLE_FILE))?;
    let wanted = [
        "code_module",
        "code_presentation",
        "id_student",
        "sum_click",
    ];
    let Some(cols) = file.columns(&wanted)? else {
        return Ok(HashMap::new());
    };
    let mut clicks: HashMap<String, f64> = HashMap::new();
    let mut key = String::new();
    let mut record = csv::StringRecord::new();
    loop {
        match file.reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                return Err(TabularError::Parse {
                    file: file.path.clone(),
                    line: e.position().map_or(0, |p| p.line()),
                    message: e.to_string(),
                })
            }
        }
        key.clear();
        key.push_str(record.get(cols[0]).unwrap_or(""));
        key.push('\u{1f}');
        key.push_str(record.get(cols[1]).unwrap_or(""));
        key.push('\u{1f}');
        key.push_str(record.get(cols[2]).unwrap_or(""));
        let count = parse_f64(&record, cols[3], "sum_click", &file.path)?;
        if let Some(total) = clicks.get_mut(&key) {
            *total += count;
        } else {
            clicks.insert(key.clone(), count);
        }
    }
    Ok(clicks)
}

/// Loads the OULAD directory into one row per (student, course presentation).
///
/// Reads `studentInfo.csv` for demographics and outcome, and aggregates
/// `studentVle.csv` into each row's `sum_click`. Missing deprivation-band
/// values are kept as missing for the preprocessing step to drop.
pub fn load_oulad(dir: &Path) -> Result<RawStudentTable, TabularError> {
    let clicks = aggregate_clicks(dir)?;

    let mut file = CsvFile::open(dir.join(STUDENT_INFO_FILE))?;
    let wanted = [
        "code_module",
        "code_presentation",
        "id_student",
        "gender",
        "highest_education",
        "imd_band",
        "age_band",
        "num_of_prev_attempts",
        "studied_credits",
        "disability",
        "final_result",
    ];
    let Some(cols) = file.columns(&wanted)? else {
        return Ok(RawStudentTable::default());
    };

    let mut rows = Vec::new();
    for record in file.reader.records() {
        let record = record.map_err(|e| TabularError::Parse {
            file: file.path.clone(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record_line(&record);
        let get = |i: usize| record.get(cols[i]).unwrap_or("").trim().to_string();
        let parse_error = |message: String| TabularError::Parse {
            file: file.path.clone(),
            line,
            message,
        };

        let course_id = get(0);
        let student_id = get(2);
        if course_id.is_empty() || student_id.is_empty() {
            return Err(parse_error("missing course or student id".into()));
        }

        let gender = get(3);
        if gender != "M" && gender != "F" {
            return Err(parse_error(format!("unknown gender '{gender}'")));
        }
        let highest_education = get(4);
        if !EDUCATION_LEVELS.contains(&highest_education.as_str()) {
            return Err(parse_error(format!(
                "unknown highest_education '{highest_education}'"
            )));
        }
        let imd_raw = get(5);
        let imd_band = if is_missing(&imd_raw) {
            None
        } else {
            Some(
                imd_band_rank(&imd_raw)
                    .ok_or_else(|| parse_error(format!("unknown imd_band '{imd_raw}'")))?,
            )
        };
        let age_band = get(6);
        if !AGE_BANDS.contains(&age_band.as_str()) {
            return Err(parse_error(format!("unknown age_band '{age_band}'")));
        }
        let disability = get(9);
        if disability != "Y" && disability != "N" {
            return Err(parse_error(format!("unknown disability '{disability}'")));
        }
        let final_result: FinalResult = get(10).parse().map_err(parse_error)?;

        let presentation = get(1);
        let key = click_key(&course_id, &presentation, &student_id);
        rows.push(RawStudentRow {
            sum_click: clicks.get(&key).copied().unwrap_or(0.0),
            course_id,
            presentation,
            student_id,
            gender,
            age_band,
            disability,
            highest_education,
            imd_band,
            num_of_prev_attempts: parse_f64(&record, cols[7], "num_of_prev_attempts", &file.path)?,
            studied_credits: parse_f64(&record, cols[8], "studied_credits", &file.path)?,
            final_result,
        });
    }
    Ok(RawStudentTable { rows })
}
