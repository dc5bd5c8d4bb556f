//! Fairness matrices (models × sensitive features) and report rendering.
//!
//! For both metrics, lower is fairer. The rendering convention marks the
//! best value per column in bold and the best value per row with an
//! asterisk, so a table supports the two readings of an audit: which model
//! is fairest for a feature (column-wise) and which feature a model treats
//! most fairly (row-wise).

use crate::madd::BehaviorAssessment;
use crate::models::ModelKind;
use crate::Group;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("missing metric values for: {}", format_pairs(.0))]
    MissingCells(Vec<(ModelKind, String)>),
    #[error("duplicate metric value for ({0}, {1})")]
    DuplicateCell(ModelKind, String),
    #[error("matrix needs at least one model and one feature")]
    EmptyGrid,
    #[error("matrices disagree on rows or columns")]
    DimensionMismatch,
}

fn format_pairs(pairs: &[(ModelKind, String)]) -> String {
    pairs
        .iter()
        .map(|(m, f)| format!("({m}, {f})"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "MADD")]
    Madd,
    #[serde(rename = "ABROCA")]
    Abroca,
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricKind::Madd => write!(f, "MADD"),
            MetricKind::Abroca => write!(f, "ABROCA"),
        }
    }
}

/// One metric value for a (model, sensitive feature) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub model: ModelKind,
    pub feature: String,
    pub value: f64,
}

/// A models × sensitive-features table of metric values with best-per-row
/// and best-per-column markers and arithmetic averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessMatrix {
    pub metric: MetricKind,
    pub course_id: String,
    pub models: Vec<ModelKind>,
    pub features: Vec<String>,
    /// `values[i][j]` is the metric for `models[i]` × `features[j]`.
    pub values: Vec<Vec<f64>>,
    pub row_averages: Vec<f64>,
    pub col_averages: Vec<f64>,
    /// Row index of the minimum per column (ties to the first row).
    pub best_per_col: Vec<usize>,
    /// Column index of the minimum per row (ties to the first column).
    pub best_per_row: Vec<usize>,
}

/// Assembles the matrix from per-cell values in any order.
///
/// The grid must be complete: exactly one value per (model, feature) pair.
pub fn build_matrix(
    cells: &[MatrixCell],
    metric: MetricKind,
    course_id: &str,
    models: &[ModelKind],
    features: &[String],
) -> Result<FairnessMatrix, ReportError> {
    if models.is_empty() || features.is_empty() {
        return Err(ReportError::EmptyGrid);
    }
    let mut values = vec![vec![f64::NAN; features.len()]; models.len()];
    for cell in cells {
        let Some(i) = models.iter().position(|m| *m == cell.model) else {
            continue;
        };
        let Some(j) = features.iter().position(|f| *f == cell.feature) else {
            continue;
        };
        if !values[i][j].is_nan() {
            return Err(ReportError::DuplicateCell(cell.model, cell.feature.clone()));
        }
        values[i][j] = cell.value;
    }
    let mut missing: Vec<(ModelKind, String)> = Vec::new();
    for (i, &m) in models.iter().enumerate() {
        for (j, f) in features.iter().enumerate() {
            if values[i][j].is_nan() {
                missing.push((m, f.clone()));
            }
        }
    }
    if !missing.is_empty() {
        return Err(ReportError::MissingCells(missing));
    }

    let row_averages: Vec<f64> = values
        .iter()
        .map(|row| row.iter().sum::<f64>() / row.len() as f64)
        .collect();
    let col_averages: Vec<f64> = (0..features.len())
        .map(|j| values.iter().map(|row| row[j]).sum::<f64>() / models.len() as f64)
        .collect();
    let best_per_col: Vec<usize> = (0..features.len())
        .map(|j| argmin((0..models.len()).map(|i| values[i][j])))
        .collect();
    let best_per_row: Vec<usize> = values
        .iter()
        .map(|row| argmin(row.iter().copied()))
        .collect();

    Ok(FairnessMatrix {
        metric,
        course_id: course_id.to_string(),
        models: models.to_vec(),
        features: features.to_vec(),
        values,
        row_averages,
        col_averages,
        best_per_col,
        best_per_row,
    })
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for (i, v) in values.enumerate() {
        if v < best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

/// Behavior flags of one audited cell, as input to the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellBehavior {
    pub model: ModelKind,
    pub feature: String,
    pub assessment: BehaviorAssessment,
}

/// Per-cell digest in the audit summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub model: ModelKind,
    pub feature: String,
    pub madd: f64,
    pub abroca: f64,
    pub behaviors: Vec<String>,
    pub favored_group: Option<Group>,
}

/// The overall verdicts of one course audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub course_id: String,
    /// Model with the lowest row average, per metric.
    pub fairest_model_madd: ModelKind,
    pub fairest_model_abroca: ModelKind,
    /// Model with the highest row average, per metric.
    pub least_fair_model_madd: ModelKind,
    pub least_fair_model_abroca: ModelKind,
    /// Feature with the highest column average, per metric.
    pub most_sensitive_feature_madd: String,
    pub most_sensitive_feature_abroca: String,
    pub cells: Vec<SummaryCell>,
}

/// Reads the two matrices and the behavior flags into a summary.
pub fn summarize(
    madd: &FairnessMatrix,
    abroca: &FairnessMatrix,
    behaviors: &[CellBehavior],
) -> Result<AuditSummary, ReportError> {
    if madd.models != abroca.models
        || madd.features != abroca.features
        || madd.course_id != abroca.course_id
    {
        return Err(ReportError::DimensionMismatch);
    }
    let argmax = |values: &[f64]| {
        let mut best = 0;
        let mut best_value = f64::NEG_INFINITY;
        for (i, &v) in values.iter().enumerate() {
            if v > best_value {
                best = i;
                best_value = v;
            }
        }
        best
    };
    let mut cells = Vec::new();
    for (i, &model) in madd.models.iter().enumerate() {
        for (j, feature) in madd.features.iter().enumerate() {
            let assessment = behaviors
                .iter()
                .find(|b| b.model == model && b.feature == *feature);
            cells.push(SummaryCell {
                model,
                feature: feature.clone(),
                madd: madd.values[i][j],
                abroca: abroca.values[i][j],
                behaviors: assessment
                    .map(|a| {
                        a.assessment
                            .behaviors
                            .iter()
                            .map(|b| b.to_string())
                            .collect()
                    })
                    .unwrap_or_default(),
                favored_group: assessment.and_then(|a| a.assessment.favored_group),
            });
        }
    }
    Ok(AuditSummary {
        course_id: madd.course_id.clone(),
        fairest_model_madd: madd.models[argmin(madd.row_averages.iter().copied())],
        fairest_model_abroca: abroca.models[argmin(abroca.row_averages.iter().copied())],
        least_fair_model_madd: madd.models[argmax(&madd.row_averages)],
        least_fair_model_abroca: abroca.models[argmax(&abroca.row_averages)],
        most_sensitive_feature_madd: madd.features[argmax(&madd.col_averages)].clone(),
        most_sensitive_feature_abroca: abroca.features[argmax(&abroca.col_averages)].clone(),
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Markdown,
    Json,
}

/// Renders a matrix as a Markdown table (bold best per column, asterisk
/// best per row, two decimals) or as lossless JSON.
pub fn render_matrix(matrix: &FairnessMatrix, format: RenderFormat) -> String {
    match format {
        RenderFormat::Json => serde_json::to_string_pretty(matrix).expect("matrix serializes"),
        RenderFormat::Markdown => {
            let mut out = String::new();
            out.push_str(&format!(
                "| {} | {} | Average |\n",
                matrix.metric,
                matrix.features.join(" | ")
            ));
            out.push_str(&"| --- ".repeat(matrix.features.len() + 2));
            out.push_str("|\n");
            for (i, &model) in matrix.models.iter().enumerate() {
                out.push_str(&format!("| {model} |"));
                for j in 0..matrix.features.len() {
                    let mut cell = format!("{:.2}", matrix.values[i][j]);
                    if matrix.best_per_row[i] == j {
                        cell.push_str("\\*");
                    }
                    if matrix.best_per_col[j] == i {
                        cell = format!("**{cell}**");
                    }
                    out.push_str(&format!(" {cell} |"));
                }
                out.push_str(&format!(" {:.2} |\n", matrix.row_averages[i]));
            }
            out.push_str("| Average |");
            for avg in &matrix.col_averages {
                out.push_str(&format!(" {avg:.2} |"));
            }
            out.push_str("  |\n");
            out
        }
    }
}

/// Renders a summary as Markdown prose or as JSON.
pub fn render_summary(summary: &AuditSummary, format: RenderFormat) -> String {
    match format {
        RenderFormat::Json => serde_json::to_string_pretty(summary).expect("summary serializes"),
        RenderFormat::Markdown => {
            let mut out = String::new();
            out.push_str(&format!(
                "## Audit summary — course {}\n\n",
                summary.course_id
            ));
            out.push_str(&format!(
                "- Fairest model by MADD: **{}**; least fair: {}\n",
                summary.fairest_model_madd, summary.least_fair_model_madd
            ));
            out.push_str(&format!(
                "- Fairest model by ABROCA: **{}**; least fair: {}\n",
                summary.fairest_model_abroca, summary.least_fair_model_abroca
            ));
            out.push_str(&format!(
                "- Most sensitive feature by MADD: **{}**; by ABROCA: **{}**\n\n",
                summary.most_sensitive_feature_madd, summary.most_sensitive_feature_abroca
            ));
            out.push_str("| Model | Feature | MADD | ABROCA | Behaviors | Favored group |\n");
            out.push_str("| --- | --- | --- | --- | --- | --- |\n");
            for cell in &summary.cells {
                let behaviors = if cell.behaviors.is_empty() {
                    "—".to_string()
                } else {
                    cell.behaviors.join(", ")
                };
                let favored = cell
                    .favored_group
                    .map_or("—".to_string(), |g| format!("group {g}"));
                out.push_str(&format!(
                    "| {} | {} | {:.2} | {:.2} | {} | {} |\n",
                    cell.model, cell.feature, cell.madd, cell.abroca, behaviors, favored
                ));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn features(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn cells_from_rows(models: &[ModelKind], feats: &[String], rows: &[&[f64]]) -> Vec<MatrixCell> {
        let mut cells = Vec::new();
        for (i, &model) in models.iter().enumerate() {
            for (j, feature) in feats.iter().enumerate() {
                cells.push(MatrixCell {
                    model,
                    feature: feature.clone(),
                    value: rows[i][j],
                });
            }
        }
        cells
    }

    #[test]
    fn two_by_two_markers_and_averages() {
        let models = [ModelKind::Lr, ModelKind::Kn];
        let feats = features(&["a", "b"]);
        let cells = cells_from_rows(&models, &feats, &[&[0.5, 0.9], &[0.7, 0.3]]);
        let m = build_matrix(&cells, MetricKind::Madd, "c", &models, &feats).unwrap();
        assert_eq!(m.best_per_col, vec![0, 1]);
        assert_eq!(m.best_per_row, vec![0, 1]);
        assert_eq!(m.row_averages, vec![0.7, 0.5]);
    }

    #[test]
    fn ties_resolve_to_the_first_row_and_column() {
        let models = [ModelKind::Lr, ModelKind::Kn];
        let feats = features(&["a", "b"]);
        let cells = cells_from_rows(&models, &feats, &[&[0.4, 0.4], &[0.4, 0.4]]);
        let m = build_matrix(&cells, MetricKind::Madd, "c", &models, &feats).unwrap();
        assert_eq!(m.best_per_col, vec![0, 0]);
        assert_eq!(m.best_per_row, vec![0, 0]);
    }

    #[test]
    fn missing_cells_are_listed() {
        let models = [ModelKind::Lr, ModelKind::Kn];
        let feats = features(&["a", "b"]);
        let mut cells = cells_from_rows(&models, &feats, &[&[0.4, 0.4], &[0.4, 0.4]]);
        cells.retain(|c| !(c.model == ModelKind::Kn && c.feature == "b"));
        match build_matrix(&cells, MetricKind::Madd, "c", &models, &feats) {
            Err(ReportError::MissingCells(missing)) => {
                assert_eq!(missing, vec![(ModelKind::Kn, "b".to_string())]);
            }
            other => panic!("expected MissingCells, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_cells_are_rejected() {
        let models = [ModelKind::Lr];
        let feats = features(&["a"]);
        let mut cells = cells_from_rows(&models, &feats, &[&[0.4]]);
        cells.push(cells[0].clone());
        assert!(matches!(
            build_matrix(&cells, MetricKind::Madd, "c", &models, &feats),
            Err(ReportError::DuplicateCell(_, _))
        ));
    }

    /// The published four-model, three-feature reference table.
    fn reference_matrix() -> FairnessMatrix {
        let models = ModelKind::ALL;
        let feats = features(&["gender", "poverty", "disability"]);
        let rows: [&[f64]; 4] = [
            &[1.72, 1.85, 1.57],
            &[1.13, 1.12, 0.93],
            &[0.69, 0.85, 0.65],
            &[0.52, 0.90, 1.37],
        ];
        let cells = cells_from_rows(&models, &feats, &rows);
        build_matrix(&cells, MetricKind::Madd, "BBB", &models, &feats).unwrap()
    }

    #[test]
    fn reference_table_markers_match_the_published_convention() {
        let m = reference_matrix();
        // Column bests: NB for gender, DT for poverty and disability.
        assert_eq!(m.best_per_col, vec![3, 2, 2]);
        // Row bests: disability for LR/KN/DT, gender for NB.
        assert_eq!(m.best_per_row, vec![2, 2, 2, 0]);
        let close = |a: f64, b: f64| (a - b).abs() <= 0.005 + 1e-9;
        for (computed, published) in m.col_averages.iter().zip([1.02, 1.18, 1.13]) {
            assert!(close(*computed, published), "{computed} vs {published}");
        }
        for (computed, published) in m.row_averages.iter().zip([1.71, 1.06, 0.73, 0.93]) {
            assert!(close(*computed, published), "{computed} vs {published}");
        }
    }

    #[test]
    fn markdown_marks_best_both_ways() {
        let m = reference_matrix();
        let md = render_matrix(&m, RenderFormat::Markdown);
        // DT/disability is best in both its row and its column.
        assert!(md.contains("**0.65\\***"), "markdown:\n{md}");
        // NB/gender likewise.
        assert!(md.contains("**0.52\\***"), "markdown:\n{md}");
        assert!(md.lines().count() >= 7);
    }

    #[test]
    fn json_rendering_round_trips_losslessly() {
        let m = reference_matrix();
        let json = render_matrix(&m, RenderFormat::Json);
        let back: FairnessMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn recomputed_markers_always_match_stored_markers() {
        let m = reference_matrix();
        for (j, &best) in m.best_per_col.iter().enumerate() {
            for i in 0..m.models.len() {
                assert!(m.values[best][j] <= m.values[i][j]);
            }
        }
        for (i, &best) in m.best_per_row.iter().enumerate() {
            for j in 0..m.features.len() {
                assert!(m.values[i][best] <= m.values[i][j]);
            }
        }
    }

    #[test]
    fn summary_reads_both_matrices() {
        let madd = reference_matrix();
        let mut abroca = reference_matrix();
        abroca.metric = MetricKind::Abroca;
        let summary = summarize(&madd, &abroca, &[]).unwrap();
        assert_eq!(summary.fairest_model_madd, ModelKind::Dt);
        assert_eq!(summary.least_fair_model_madd, ModelKind::Lr);
        assert_eq!(summary.most_sensitive_feature_madd, "poverty");
        // Identical matrices give identical verdicts for both metrics.
        assert_eq!(summary.fairest_model_abroca, summary.fairest_model_madd);
        assert_eq!(summary.cells.len(), 12);
    }

    #[test]
    fn summary_rejects_mismatched_matrices() {
        let madd = reference_matrix();
        let models = [ModelKind::Lr];
        let feats = features(&["gender"]);
        let other = build_matrix(
            &cells_from_rows(&models, &feats, &[&[0.1]]),
            MetricKind::Abroca,
            "BBB",
            &models,
            &feats,
        )
        .unwrap();
        assert_eq!(
            summarize(&madd, &other, &[]),
            Err(ReportError::DimensionMismatch)
        );
    }
}
