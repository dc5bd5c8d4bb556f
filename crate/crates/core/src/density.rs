//! Discretization of predicted probabilities into fixed-step density vectors.
//!
//! Probabilities are rounded to the nearest multiple of a step `e` whose
//! reciprocal is an integer, giving `m = 1/e + 1` distinct values. Counting
//! each group's rounded probabilities and normalizing by the group size
//! yields a length-`m` density vector; two groups' vectors share the same
//! probability grid and are therefore directly comparable.

use crate::models::PredictionRecord;
use crate::Group;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("invalid probability step {0}: 1/e must be a positive integer (e.g. 0.5, 0.1, 0.01)")]
    InvalidStep(f64),
    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("cannot build a density vector from an empty probability list")]
    EmptyProbs,
    #[error("density vectors use different steps: e = {0} vs e = {1}")]
    StepMismatch(f64, f64),
    #[error("no prediction records for group {0}; both groups are required for an audit")]
    EmptyGroup(Group),
    #[error("no prediction records given")]
    EmptyRecords,
}

/// The probability sampling step `e`.
///
/// Only steps whose reciprocal is an integer are representable, so that the
/// grid `0, e, 2e, …, 1` has exactly `m = 1/e + 1` points. Grid arithmetic is
/// done on integer bin indices to avoid accumulated floating-point drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct ProbabilityStep {
    bins_per_unit: u32,
}

impl ProbabilityStep {
    /// Validates that `1/e` is an integer and returns the step.
    pub fn new(e: f64) -> Result<Self, DensityError> {
        if !e.is_finite() || e <= 0.0 || e > 1.0 {
            return Err(DensityError::InvalidStep(e));
        }
        let inv = (1.0 / e).round();
        if inv < 1.0 || inv > u32::MAX as f64 || (e * inv - 1.0).abs() > 1e-9 {
            return Err(DensityError::InvalidStep(e));
        }
        Ok(ProbabilityStep {
            bins_per_unit: inv as u32,
        })
    }

    /// Builds a step directly from the number of intervals per unit (`1/e`).
    pub fn from_bins_per_unit(bins_per_unit: u32) -> Result<Self, DensityError> {
        if bins_per_unit == 0 {
            return Err(DensityError::InvalidStep(0.0));
        }
        Ok(ProbabilityStep { bins_per_unit })
    }

    /// The step value `e`.
    pub fn e(self) -> f64 {
        1.0 / self.bins_per_unit as f64
    }

    /// Number of grid points `m = 1/e + 1`.
    pub fn num_bins(self) -> usize {
        self.bins_per_unit as usize + 1
    }

    /// The probability value of bin `k`, i.e. `k * e`.
    pub fn bin_value(self, k: usize) -> f64 {
        k as f64 / self.bins_per_unit as f64
    }

    /// Index of the grid point nearest to `p`; exact midpoints round half-up.
    pub fn round_to_bin(self, p: f64) -> Result<usize, DensityError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(DensityError::OutOfRange(p));
        }
        let scaled = p * self.bins_per_unit as f64;
        let k = (scaled + 0.5).floor() as usize;
        Ok(k.min(self.bins_per_unit as usize))
    }
}

impl From<ProbabilityStep> for f64 {
    fn from(s: ProbabilityStep) -> f64 {
        s.e()
    }
}

impl TryFrom<f64> for ProbabilityStep {
    type Error = DensityError;

    fn try_from(e: f64) -> Result<Self, Self::Error> {
        ProbabilityStep::new(e)
    }
}

/// Rounds `p` to the nearest grid value `k * e`; exact midpoints round half-up.
pub fn round_prob(p: f64, step: ProbabilityStep) -> Result<f64, DensityError> {
    Ok(step.bin_value(step.round_to_bin(p)?))
}

/// A group's discrete distribution of rounded predicted probabilities.
///
/// Entry `k` is the fraction of the group's predictions that round to `k * e`.
/// Entries are rational (`count / n_samples`) and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityVector {
    #[serde(rename = "e")]
    step: ProbabilityStep,
    n_samples: usize,
    d: Vec<f64>,
}

impl DensityVector {
    /// Builds a density vector from bin counts.
    pub fn from_counts(counts: &[usize], step: ProbabilityStep) -> Result<Self, DensityError> {
        if counts.len() != step.num_bins() {
            return Err(DensityError::InvalidStep(step.e()));
        }
        let n: usize = counts.iter().sum();
        if n == 0 {
            return Err(DensityError::EmptyProbs);
        }
        let d = counts.iter().map(|&c| c as f64 / n as f64).collect();
        Ok(DensityVector {
            step,
            n_samples: n,
            d,
        })
    }

    pub fn step(&self) -> ProbabilityStep {
        self.step
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// The density values, one per grid point.
    pub fn values(&self) -> &[f64] {
        &self.d
    }

    /// Mean of the distribution: `Σ_k (k·e) · d_k`.
    pub fn mean(&self) -> f64 {
        self.d
            .iter()
            .enumerate()
            .map(|(k, &dk)| self.step.bin_value(k) * dk)
            .sum()
    }

    /// Largest single-bin density.
    pub fn peak(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Re-bins the vector onto a coarser (or equal) step by rounding each bin
    /// value onto the target grid and accumulating its mass there.
    pub fn rebin(&self, target: ProbabilityStep) -> Result<DensityVector, DensityError> {
        let mut d = vec![0.0; target.num_bins()];
        for (k, &mass) in self.d.iter().enumerate() {
            let bin = target.round_to_bin(self.step.bin_value(k))?;
            d[bin] += mass;
        }
        Ok(DensityVector {
            step: target,
            n_samples: self.n_samples,
            d,
        })
    }
}

/// Counts rounded probabilities into a [`DensityVector`].
pub fn density_vector(probs: &[f64], step: ProbabilityStep) -> Result<DensityVector, DensityError> {
    if probs.is_empty() {
        return Err(DensityError::EmptyProbs);
    }
    let mut counts = vec![0usize; step.num_bins()];
    for &p in probs {
        counts[step.round_to_bin(p)?] += 1;
    }
    DensityVector::from_counts(&counts, step)
}

/// Partitions predicted probabilities by group membership, preserving order.
///
/// Errors if either group has no records, since a one-group audit is
/// degenerate.
pub fn split_by_group(records: &[PredictionRecord]) -> Result<(Vec<f64>, Vec<f64>), DensityError> {
    if records.is_empty() {
        return Err(DensityError::EmptyRecords);
    }
    let mut g0 = Vec::new();
    let mut g1 = Vec::new();
    for r in records {
        match r.group {
            Group::G0 => g0.push(r.p_hat),
            Group::G1 => g1.push(r.p_hat),
        }
    }
    if g0.is_empty() {
        return Err(DensityError::EmptyGroup(Group::G0));
    }
    if g1.is_empty() {
        return Err(DensityError::EmptyGroup(Group::G1));
    }
    Ok((g0, g1))
}
