//! The model absolute density distance (MADD) and its behavior indicators.
//!
//! Given the two groups' density vectors on a shared probability grid, the
//! MADD is the L1 distance between them: `Σ_k |d0_k − d1_k|`. It ranges over
//! `[0, 2]`; 0 means the model produces identical probability distributions
//! for both groups, 2 means the supports are completely disjoint.
//!
//! Alongside the raw distance, the result carries the indicators used to
//! qualify a discriminatory behavior: the per-group distribution means (a
//! mean offset signals unequal treatment of one group) and the per-group
//! peak densities (a dominant single bin signals stereotypical judgement,
//! i.e. near-identical predictions for most of a group).

use crate::density::{DensityError, DensityVector};
use crate::Group;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// MADD value plus the indicators behind the behavior diagnosis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaddResult {
    /// `Σ_k |d0_k − d1_k|`, in `[0, 2]`.
    pub value: f64,
    /// The absolute per-bin differences that sum to `value`.
    pub per_bin_abs_diff: Vec<f64>,
    /// Mean of group 0's density vector (computed before any smoothing).
    pub mean_g0: f64,
    /// Mean of group 1's density vector.
    pub mean_g1: f64,
    /// `mean_g1 − mean_g0`; positive when group 1 receives higher
    /// probabilities on average.
    pub mean_gap: f64,
    /// Largest single-bin density of group 0.
    pub peak_g0: f64,
    /// Largest single-bin density of group 1.
    pub peak_g1: f64,
}

/// Computes the MADD between two density vectors on the same grid.
pub fn madd(d0: &DensityVector, d1: &DensityVector) -> Result<MaddResult, DensityError> {
    if d0.step() != d1.step() {
        return Err(DensityError::StepMismatch(d0.step().e(), d1.step().e()));
    }
    let per_bin_abs_diff: Vec<f64> = d0
        .values()
        .iter()
        .zip(d1.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    let value = per_bin_abs_diff.iter().sum();
    let (mean_g0, mean_g1) = (d0.mean(), d1.mean());
    Ok(MaddResult {
        value,
        per_bin_abs_diff,
        mean_g0,
        mean_g1,
        mean_gap: mean_g1 - mean_g0,
        peak_g0: d0.peak(),
        peak_g1: d1.peak(),
    })
}

/// A discriminatory behavior pattern readable from the density comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Behavior {
    /// The groups' prediction means differ: one group is systematically
    /// given higher probabilities than the other.
    UnequalTreatment,
    /// One group's predictions concentrate on few probability values.
    StereotypicalJudgement,
}

impl std::fmt::Display for Behavior {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Behavior::UnequalTreatment => write!(f, "unequal treatment"),
            Behavior::StereotypicalJudgement => write!(f, "stereotypical judgement"),
        }
    }
}

/// Thresholded reading of a [`MaddResult`]'s indicators.
///
/// The thresholds quantify what the density plots show; they are reported
/// alongside the raw indicators so a reviewer can re-threshold rather than
/// take the flags as a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviorAssessment {
    pub behaviors: BTreeSet<Behavior>,
    /// The group with the higher mean, when the means differ at all.
    pub favored_group: Option<Group>,
    pub gap_threshold: f64,
    pub peak_threshold: f64,
}

impl BehaviorAssessment {
    pub fn is_empty(&self) -> bool {
        self.behaviors.is_empty()
    }
}

/// Flags behaviors from a MADD result.
///
/// Unequal treatment is flagged when `|mean_gap| >= gap_threshold`;
/// stereotypical judgement when either group's peak density reaches
/// `peak_threshold`. Thresholds must be nonnegative.
pub fn classify_behavior(
    result: &MaddResult,
    gap_threshold: f64,
    peak_threshold: f64,
) -> BehaviorAssessment {
    debug_assert!(gap_threshold >= 0.0 && peak_threshold >= 0.0);
    let mut behaviors = BTreeSet::new();
    if result.mean_gap.abs() >= gap_threshold {
        behaviors.insert(Behavior::UnequalTreatment);
    }
    if result.peak_g0.max(result.peak_g1) >= peak_threshold {
        behaviors.insert(Behavior::StereotypicalJudgement);
    }
    let favored_group = if result.mean_gap > 0.0 {
        Some(Group::G1)
    } else if result.mean_gap < 0.0 {
        Some(Group::G0)
    } else {
        None
    };
    BehaviorAssessment {
        behaviors,
        favored_group,
        gap_threshold,
        peak_threshold,
    }
}
