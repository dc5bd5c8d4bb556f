//! Shared test fixtures: a small deterministic dataset in the OULAD CSV
//! layout, rich enough for the full audit pipeline to run on.
//!
//! Group patterns (periods 3, 7, 10) and the outcome pattern (period 20,
//! stride 11) are chosen so that every group of every sensitive feature
//! contains plenty of both outcome classes, in any split.

use std::path::Path;

pub const INFO_HEADER: &str = "code_module,code_presentation,id_student,gender,region,highest_education,imd_band,age_band,num_of_prev_attempts,studied_credits,disability,final_result";
pub const VLE_HEADER: &str = "code_module,code_presentation,id_student,id_site,date,sum_click";

const IMD_BANDS: [&str; 10] = [
    "0-10%", "10-20", "20-30%", "30-40%", "40-50%", "50-60%", "60-70%", "70-80%", "80-90%",
    "90-100%",
];
const AGE_BANDS: [&str; 3] = ["0-35", "35-55", "55<="];
const EDUCATION: [&str; 5] = [
    "No Formal quals",
    "Lower Than A Level",
    "A Level or Equivalent",
    "HE Qualification",
    "Post Graduate Qualification",
];

pub const STUDENTS_PER_PRESENTATION: usize = 80;

fn final_result(i: usize, pres_idx: usize) -> &'static str {
    match (i * 11 + pres_idx * 3) % 20 {
        0..=9 => "Pass",
        10..=16 => "Fail",
        17 | 18 => "Distinction",
        _ => "Withdrawn",
    }
}

fn imd_band(i: usize, pres_idx: usize) -> &'static str {
    if (i + pres_idx) % 13 == 12 {
        ""
    } else {
        IMD_BANDS[(i * 3 + pres_idx) % 10]
    }
}

/// Writes two courses x two presentations x 80 students with deterministic,
/// index-derived attributes.
pub fn write_mini_oulad(dir: &Path) {
    let mut info = String::from(INFO_HEADER);
    let mut vle = String::from(VLE_HEADER);
    let mut student = 1000;
    for (course_idx, course) in ["BBB", "FFF"].iter().enumerate() {
        for (pres_idx, presentation) in ["2013J", "2014B"].iter().enumerate() {
            for i in 0..STUDENTS_PER_PRESENTATION {
                student += 1;
                // Opposite gender skew in the two courses.
                let gender = match (course_idx, i % 3) {
                    (0, 0) => "M",
                    (0, _) => "F",
                    (_, 0) => "F",
                    (_, _) => "M",
                };
                let disability = if i % 7 == 1 { "Y" } else { "N" };
                info.push_str(&format!(
                    "\n{course},{presentation},{student},{gender},Region,{education},{imd},{age},{prev},{credits},{disability},{result}",
                    education = EDUCATION[i % 5],
                    imd = imd_band(i, pres_idx),
                    age = AGE_BANDS[i % 3],
                    prev = i % 3,
                    credits = 30 + (i % 4) * 30,
                    result = final_result(i, pres_idx),
                ));
                // Two interaction rows per student.
                vle.push_str(&format!(
                    "\n{course},{presentation},{student},{site},{day},{clicks}",
                    site = 100 + i % 9,
                    day = i % 30,
                    clicks = (i * 7) % 17,
                ));
                vle.push_str(&format!(
                    "\n{course},{presentation},{student},{site},{day},{clicks}",
                    site = 200 + i % 9,
                    day = (i + 3) % 30,
                    clicks = (i * 3) % 23,
                ));
            }
        }
    }
    std::fs::write(dir.join("studentInfo.csv"), info).unwrap();
    std::fs::write(dir.join("studentVle.csv"), vle).unwrap();
}

/// Expected post-filter row count of one mini-fixture course (both
/// presentations pooled), by replaying the drop rules on the index pattern.
#[allow(dead_code)] // not every test target uses the fixture arithmetic
pub fn expected_course_rows() -> usize {
    let mut kept = 0;
    for pres_idx in 0..2 {
        for i in 0..STUDENTS_PER_PRESENTATION {
            let withdrawn = final_result(i, pres_idx) == "Withdrawn";
            let missing_imd = imd_band(i, pres_idx).is_empty();
            if !withdrawn && !missing_imd {
                kept += 1;
            }
        }
    }
    kept
}
