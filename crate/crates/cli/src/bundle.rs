//! The machine-readable audit bundle: everything a run produced, in one
//! JSON document that the `plot` and `report` subcommands can re-render
//! from without touching the original data.

use crate::config::AuditConfig;
use fairdist::abroca::{AbrocaResult, RocCurve};
use fairdist::density::DensityVector;
use fairdist::madd::{BehaviorAssessment, MaddResult};
use fairdist::models::ModelKind;
use fairdist::report::{AuditSummary, FairnessMatrix};
use fairdist::smoothing::{KdeCurve, ZoneAreas};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// SHA-256 of one input file, recorded for provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileHash {
    pub file: String,
    pub sha256: String,
}

/// The configuration echo carried in every bundle, with the derived grid
/// size alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    #[serde(flatten)]
    pub config: AuditConfig,
    /// Density grid points, `m = 1/e + 1`.
    pub m: usize,
}

/// Group shares of one sensitive feature on the full course data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupShare {
    pub feature: String,
    pub p0: f64,
    pub p1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelAccuracy {
    pub model: ModelKind,
    pub accuracy: f64,
}

/// Everything measured for one (model, sensitive feature) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCell {
    pub model: ModelKind,
    pub feature: String,
    pub madd: MaddResult,
    pub behavior: BehaviorAssessment,
    /// MADD recomputed at the display step, for step-sensitivity reporting.
    pub madd_at_display_step: f64,
    /// |MADD(e) − MADD(display step)|.
    pub step_sensitivity: f64,
    pub abroca: AbrocaResult,
    pub density_g0: DensityVector,
    pub density_g1: DensityVector,
    pub kde_g0: KdeCurve,
    pub kde_g1: KdeCurve,
    pub zones: ZoneAreas,
    pub roc_g0: RocCurve,
    pub roc_g1: RocCurve,
}

/// One course's complete audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CourseAudit {
    pub course_id: String,
    pub rows: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub group_shares: Vec<GroupShare>,
    pub accuracies: Vec<ModelAccuracy>,
    pub cells: Vec<AuditCell>,
    pub madd_matrix: FairnessMatrix,
    pub abroca_matrix: FairnessMatrix,
    pub summary: AuditSummary,
}

/// The full audit output of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditBundle {
    pub config: EffectiveConfig,
    pub input_hashes: Vec<FileHash>,
    pub courses: Vec<CourseAudit>,
}

impl AuditBundle {
    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("bundle serializes");
        json.push('\n');
        json
    }

    pub fn load(path: &Path) -> Result<Self, std::io::Error> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}
