//! k-nearest-neighbors classification with lazily stored training data.

use super::ModelError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
    pub train_x: Vec<Vec<f64>>,
    pub train_y: Vec<bool>,
}

pub fn fit(x: &[Vec<f64>], y: &[bool], k: usize) -> Result<KnnParams, ModelError> {
    if k == 0 || k > x.len() {
        return Err(ModelError::InvalidNeighborCount(k));
    }
    Ok(KnnParams {
        k,
        train_x: x.to_vec(),
        train_y: y.to_vec(),
    })
}

impl KnnParams {
    /// Fraction of positive labels among the k nearest training points by
    /// Euclidean distance. Distance ties break toward the lowest training
    /// row index, so predictions are deterministic.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let mut dists: Vec<(f64, usize)> = self
            .train_x
            .iter()
            .enumerate()
            .map(|(i, train_row)| {
                let d2: f64 = train_row
                    .iter()
                    .zip(row)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (d2, i)
            })
            .collect();
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < dists.len() {
            dists.select_nth_unstable_by(self.k - 1, cmp);
        }
        let positives = dists[..self.k]
            .iter()
            .filter(|&&(_, i)| self.train_y[i])
            .count();
        positives as f64 / self.k as f64
    }
}
