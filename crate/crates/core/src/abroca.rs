//! Per-group ROC curves and the absolute area between them (ABROCA).
//!
//! ABROCA is the predictive-performance-oriented counterpart to the density
//! distance: it integrates `|tpr_0(fpr) − tpr_1(fpr)|` over the false
//! positive rate, so two groups with interchangeable ranking quality score
//! near zero even when the underlying probability distributions differ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AbrocaError {
    #[error("ROC requires both classes in the labels")]
    SingleClassLabels,
    #[error("scores and labels have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("scores must be finite")]
    NonFiniteScore,
    #[error("no samples given")]
    Empty,
    #[error("invalid ROC curve: {0}")]
    InvalidCurve(&'static str),
}

/// One point of a ROC curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

/// A ROC curve: (fpr, tpr) points from (0, 0) to (1, 1), both coordinates
/// nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    points: Vec<RocPoint>,
}

impl RocCurve {
    /// Validates and wraps an explicit point list.
    pub fn from_points(points: Vec<RocPoint>) -> Result<Self, AbrocaError> {
        if points.len() < 2 {
            return Err(AbrocaError::InvalidCurve("fewer than two points"));
        }
        let first = points.first().unwrap();
        let last = points.last().unwrap();
        if first.fpr != 0.0 || first.tpr != 0.0 {
            return Err(AbrocaError::InvalidCurve("curve must start at (0, 0)"));
        }
        if last.fpr != 1.0 || last.tpr != 1.0 {
            return Err(AbrocaError::InvalidCurve("curve must end at (1, 1)"));
        }
        for w in points.windows(2) {
            if w[1].fpr < w[0].fpr || w[1].tpr < w[0].tpr {
                return Err(AbrocaError::InvalidCurve(
                    "coordinates must be nondecreasing",
                ));
            }
        }
        if points
            .iter()
            .any(|p| !(0.0..=1.0).contains(&p.fpr) || !(0.0..=1.0).contains(&p.tpr))
        {
            return Err(AbrocaError::InvalidCurve("coordinates outside [0, 1]"));
        }
        Ok(RocCurve { points })
    }

    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }

    /// Area under the curve by the trapezoid rule along the curve's points.
    ///
    /// Equals the pairwise concordance probability (ties counted half).
    pub fn auc(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0)
            .sum()
    }

    /// The curve as a function of fpr: for each distinct fpr the upper tpr
    /// is kept, so vertical segments collapse to their top end.
    fn upper_envelope(&self) -> Vec<RocPoint> {
        let mut env: Vec<RocPoint> = Vec::with_capacity(self.points.len());
        for &p in &self.points {
            match env.last_mut() {
                Some(last) if last.fpr == p.fpr => last.tpr = p.tpr,
                _ => env.push(p),
            }
        }
        env
    }
}

/// Builds a ROC curve by sweeping the classification threshold down through
/// the distinct score values. Tied scores enter in a single step. Duplicate
/// curve points are collapsed.
pub fn roc_curve(scores: &[f64], labels: &[bool]) -> Result<RocCurve, AbrocaError> {
    if scores.is_empty() {
        return Err(AbrocaError::Empty);
    }
    if scores.len() != labels.len() {
        return Err(AbrocaError::LengthMismatch(scores.len(), labels.len()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(AbrocaError::NonFiniteScore);
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(AbrocaError::SingleClassLabels);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0 }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        // One step per distinct score value.
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let point = RocPoint {
            fpr: fp as f64 / negatives as f64,
            tpr: tp as f64 / positives as f64,
        };
        if *points.last().unwrap() != point {
            points.push(point);
        }
    }
    RocCurve::from_points(points)
}

/// The ABROCA statistic with the per-group AUCs it compares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbrocaResult {
    /// Integral over fpr of the absolute tpr difference, in [0, 1].
    pub value: f64,
    pub auc_g0: f64,
    pub auc_g1: f64,
}

fn interp(env: &[RocPoint], fpr: f64) -> f64 {
    // env is sorted by strictly increasing fpr and spans [0, 1].
    match env.binary_search_by(|p| p.fpr.total_cmp(&fpr)) {
        Ok(i) => env[i].tpr,
        Err(i) => {
            let (a, b) = (env[i - 1], env[i]);
            a.tpr + (b.tpr - a.tpr) * (fpr - a.fpr) / (b.fpr - a.fpr)
        }
    }
}

/// Computes the absolute area between two ROC curves.
///
/// Both curves are read as functions of fpr via their upper envelopes
/// (vertical segments contribute their top tpr), linearly interpolated onto
/// the merged set of fpr breakpoints. The integral of the absolute
/// difference is evaluated exactly per segment, splitting at sign changes.
pub fn abroca(c0: &RocCurve, c1: &RocCurve) -> Result<AbrocaResult, AbrocaError> {
    let env0 = c0.upper_envelope();
    let env1 = c1.upper_envelope();

    let mut breakpoints: Vec<f64> = env0
        .iter()
        .map(|p| p.fpr)
        .chain(env1.iter().map(|p| p.fpr))
        .collect();
    breakpoints.sort_unstable_by(f64::total_cmp);
    breakpoints.dedup();

    let mut value = 0.0;
    let mut prev_x = breakpoints[0];
    let mut prev_d = interp(&env0, prev_x) - interp(&env1, prev_x);
    for &x in &breakpoints[1..] {
        let d = interp(&env0, x) - interp(&env1, x);
        let width = x - prev_x;
        if prev_d * d >= 0.0 {
            value += width * (prev_d.abs() + d.abs()) / 2.0;
        } else {
            // The linear difference crosses zero inside the segment.
            let cross = prev_d / (prev_d - d) * width;
            value += prev_d.abs() * cross / 2.0 + d.abs() * (width - cross) / 2.0;
        }
        prev_x = x;
        prev_d = d;
    }

    Ok(AbrocaResult {
        value,
        auc_g0: c0.auc(),
        auc_g1: c1.auc(),
    })
}
