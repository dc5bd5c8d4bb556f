//! Group fairness auditing for binary classifiers.
//!
//! The crate quantifies how differently a probabilistic classifier behaves
//! between two groups of a binary sensitive feature. The central measure is
//! the model absolute density distance (MADD): predicted probabilities are
//! rounded to a fixed step, counted into per-group density vectors, and the
//! L1 distance between those vectors is the metric. It is complemented by
//! ABROCA (the absolute area between the groups' ROC curves), Gaussian KDE
//! smoothing for visual inspection, and SVG plot generation.
//!
//! Modules follow the audit pipeline:
//!
//! * [`tabular`] — data loading, preprocessing, stratified splitting,
//!   mutual-information diagnostics
//! * [`models`] — the four reference classifiers (LR, KN, DT, NB)
//! * [`density`] — probability discretization and per-group density vectors
//! * [`mod@madd`] — the density-distance metric and behavior indicators
//! * [`smoothing`] — KDE curves, Scott bandwidth, fair/MADD zone areas
//! * [`mod@abroca`] — per-group ROC curves and the area between them
//! * [`viz`] — deterministic SVG renderings of the analysis
//! * [`report`] — fairness matrices, summaries, Markdown/JSON rendering

pub mod abroca;
pub mod density;
pub mod madd;
pub mod models;
pub mod report;
pub mod smoothing;
pub mod tabular;
pub mod viz;

use serde::{Deserialize, Serialize};

/// One of the two audited groups of a binary sensitive feature.
///
/// Group membership is encoded as 0/1 in the data; neither group is treated
/// as a baseline or privileged group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Group {
    G0,
    G1,
}

impl Group {
    pub fn index(self) -> usize {
        match self {
            Group::G0 => 0,
            Group::G1 => 1,
        }
    }

    pub fn other(self) -> Group {
        match self {
            Group::G0 => Group::G1,
            Group::G1 => Group::G0,
        }
    }
}

impl From<Group> for u8 {
    fn from(g: Group) -> u8 {
        g.index() as u8
    }
}

impl TryFrom<u8> for Group {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            0 => Ok(Group::G0),
            1 => Ok(Group::G1),
            other => Err(format!("group must be 0 or 1, got {other}")),
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

pub use abroca::{abroca, roc_curve, AbrocaError, AbrocaResult, RocCurve, RocPoint};
pub use density::{density_vector, split_by_group, DensityError, DensityVector, ProbabilityStep};
pub use madd::{classify_behavior, madd, Behavior, BehaviorAssessment, MaddResult};
pub use models::{
    accuracy, predict_proba, train, Hyperparams, ModelError, ModelKind, PredictionRecord,
    TrainedModel,
};
pub use report::{
    build_matrix, render_matrix, render_summary, summarize, AuditSummary, FairnessMatrix,
    MatrixCell, MetricKind, RenderFormat, ReportError,
};
pub use smoothing::{
    bandwidth_with_fallback, kde, scott_bandwidth, zone_areas, KdeCurve, SmoothingError, ZoneAreas,
    DEFAULT_GRID_SIZE,
};
pub use tabular::{
    group_proportions, load_oulad, mutual_information, preprocess, stratified_split, Dataset,
    MiEntry, MiScores, Preprocessed, RawStudentTable, SplitPair, TabularError,
};
