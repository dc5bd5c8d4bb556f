//! The four reference binary classifiers audited by the pipeline.
//!
//! All four expose a probability estimate for the positive class, which is
//! what the density analysis consumes. Training is deterministic: identical
//! data, hyperparameters, and seed yield bit-identical parameters.

mod knn;
mod logistic;
mod naive_bayes;
mod tree;

use crate::tabular::Dataset;
use crate::Group;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use knn::KnnParams;
pub(crate) use logistic::LogisticParams;
pub(crate) use naive_bayes::NbParams;
pub(crate) use tree::TreeParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("training set must contain both classes")]
    SingleClassTrainingSet,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("feature values must be finite (found {0})")]
    NonFiniteFeature(f64),
    #[error("expected {expected} features, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("k must be between 1 and the training-set size, got {0}")]
    InvalidNeighborCount(usize),
    #[error("classification threshold must lie in (0, 1), got {0}")]
    InvalidThreshold(f64),
}

/// Classifier family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "LR")]
    Lr,
    #[serde(rename = "KN")]
    Kn,
    #[serde(rename = "DT")]
    Dt,
    #[serde(rename = "NB")]
    Nb,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Lr, ModelKind::Kn, ModelKind::Dt, ModelKind::Nb];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lr => "LR",
            ModelKind::Kn => "KN",
            ModelKind::Dt => "DT",
            ModelKind::Nb => "NB",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LR" => Ok(ModelKind::Lr),
            "KN" | "KNN" => Ok(ModelKind::Kn),
            "DT" => Ok(ModelKind::Dt),
            "NB" => Ok(ModelKind::Nb),
            other => Err(format!(
                "unknown model kind '{other}' (expected LR, KN, DT, or NB)"
            )),
        }
    }
}

/// Training hyperparameters for all four model families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparams {
    /// L2 penalty strength for logistic regression.
    pub lr_l2: f64,
    /// Gradient-norm convergence tolerance for logistic regression.
    pub lr_tol: f64,
    /// Iteration cap for logistic regression.
    pub lr_max_iter: usize,
    /// Neighbor count for the k-nearest-neighbors model.
    pub knn_k: usize,
    /// Optional depth cap for the decision tree (none = grow to purity).
    pub dt_max_depth: Option<usize>,
    /// Minimum samples per decision-tree leaf.
    pub dt_min_leaf: usize,
    /// Variance floor for the Gaussian naive Bayes likelihoods.
    pub nb_var_floor: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            lr_l2: 1.0,
            lr_tol: 1e-6,
            lr_max_iter: 1000,
            knn_k: 5,
            dt_max_depth: None,
            dt_min_leaf: 1,
            nb_var_floor: 1e-9,
        }
    }
}

/// Learned parameters, per model family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ModelParams {
    Logistic(LogisticParams),
    Knn(KnnParams),
    Tree(TreeParams),
    Gaussian(NbParams),
}

/// A fitted classifier with its training metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: ModelKind,
    pub feature_names: Vec<String>,
    pub seed: u64,
    pub hyperparams: Hyperparams,
    pub params: ModelParams,
}

impl TrainedModel {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Probability of the positive class for a single feature row.
    pub fn predict_proba_one(&self, row: &[f64]) -> Result<f64, ModelError> {
        if row.len() != self.n_features() {
            return Err(ModelError::ShapeMismatch {
                expected: self.n_features(),
                actual: row.len(),
            });
        }
        let p = match &self.params {
            ModelParams::Logistic(p) => p.predict_proba(row),
            ModelParams::Knn(p) => p.predict_proba(row),
            ModelParams::Tree(p) => p.predict_proba(row),
            ModelParams::Gaussian(p) => p.predict_proba(row),
        };
        debug_assert!((0.0..=1.0).contains(&p), "probability {p} out of range");
        Ok(p)
    }
}

/// Trains a classifier of the requested kind.
pub fn train(
    kind: ModelKind,
    train_set: &Dataset,
    hyperparams: &Hyperparams,
    seed: u64,
) -> Result<TrainedModel, ModelError> {
    let x = &train_set.x;
    let y = &train_set.y;
    if x.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if y.iter().all(|&l| l) || y.iter().all(|&l| !l) {
        return Err(ModelError::SingleClassTrainingSet);
    }
    for row in x {
        for &v in row {
            if !v.is_finite() {
                return Err(ModelError::NonFiniteFeature(v));
            }
        }
    }

    let params = match kind {
        ModelKind::Lr => ModelParams::Logistic(logistic::fit(
            x,
            y,
            hyperparams.lr_l2,
            hyperparams.lr_tol,
            hyperparams.lr_max_iter,
        )),
        ModelKind::Kn => ModelParams::Knn(knn::fit(x, y, hyperparams.knn_k)?),
        ModelKind::Dt => ModelParams::Tree(tree::fit(
            x,
            y,
            hyperparams.dt_max_depth,
            hyperparams.dt_min_leaf,
        )),
        ModelKind::Nb => ModelParams::Gaussian(naive_bayes::fit(x, y, hyperparams.nb_var_floor)),
    };

    Ok(TrainedModel {
        kind,
        feature_names: train_set.feature_names.clone(),
        seed,
        hyperparams: hyperparams.clone(),
        params,
    })
}

/// Positive-class probabilities for a feature matrix.
pub fn predict_proba(model: &TrainedModel, x: &[Vec<f64>]) -> Result<Vec<f64>, ModelError> {
    x.iter().map(|row| model.predict_proba_one(row)).collect()
}

/// Fraction of test rows whose thresholded prediction matches the label.
pub fn accuracy(model: &TrainedModel, test: &Dataset, t: f64) -> Result<f64, ModelError> {
    if test.x.is_empty() {
        return Err(ModelError::EmptyTestSet);
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(ModelError::InvalidThreshold(t));
    }
    let probs = predict_proba(model, &test.x)?;
    let correct = probs
        .iter()
        .zip(&test.y)
        .filter(|(&p, &label)| (p >= t) == label)
        .count();
    Ok(correct as f64 / test.x.len() as f64)
}

/// One audited test-set sample: the model's probability, the sample's group
/// under the audited sensitive feature, and the true/predicted labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub p_hat: f64,
    pub group: Group,
    pub y_true: bool,
    /// `true` iff `p_hat >= t` for the audit's classification threshold.
    pub y_pred: bool,
}

impl PredictionRecord {
    pub fn new(p_hat: f64, group: Group, y_true: bool, t: f64) -> Result<Self, ModelError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(ModelError::InvalidThreshold(t));
        }
        Ok(PredictionRecord {
            p_hat,
            group,
            y_true,
            y_pred: p_hat >= t,
        })
    }
}

/// Pairs already-computed probabilities with their groups and labels.
pub fn records_from_probs(
    probs: &[f64],
    groups: &[Group],
    y: &[bool],
    t: f64,
) -> Result<Vec<PredictionRecord>, ModelError> {
    if probs.len() != groups.len() || probs.len() != y.len() {
        return Err(ModelError::ShapeMismatch {
            expected: probs.len(),
            actual: groups.len().min(y.len()),
        });
    }
    probs
        .iter()
        .zip(groups)
        .zip(y)
        .map(|((&p, &g), &label)| PredictionRecord::new(p, g, label, t))
        .collect()
}

/// Scores a feature matrix and pairs each probability with its group and
/// label.
pub fn predict_records(
    model: &TrainedModel,
    x: &[Vec<f64>],
    groups: &[Group],
    y: &[bool],
    t: f64,
) -> Result<Vec<PredictionRecord>, ModelError> {
    let probs = predict_proba(model, x)?;
    records_from_probs(&probs, groups, y, t)
}
