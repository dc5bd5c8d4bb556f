//! Gaussian naive Bayes with per-class feature likelihoods in log space.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    pub log_prior_neg: f64,
    pub log_prior_pos: f64,
    pub mean_neg: Vec<f64>,
    pub mean_pos: Vec<f64>,
    pub var_neg: Vec<f64>,
    pub var_pos: Vec<f64>,
}

fn class_stats(x: &[Vec<f64>], rows: &[usize], var_floor: f64) -> (Vec<f64>, Vec<f64>) {
    let p = x[0].len();
    let n = rows.len() as f64;
    let mut mean = vec![0.0; p];
    for &i in rows {
        for (m, v) in mean.iter_mut().zip(&x[i]) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);

    let mut var = vec![0.0; p];
    for &i in rows {
        for ((s, v), m) in var.iter_mut().zip(&x[i]).zip(&mean) {
            let d = v - m;
            *s += d * d;
        }
    }
    // Population variance with an absolute floor: a zero-variance feature
    // keeps contributing instead of being dropped.
    var.iter_mut().for_each(|s| *s = (*s / n).max(var_floor));
    (mean, var)
}

pub fn fit(x: &[Vec<f64>], y: &[bool], var_floor: f64) -> NbParams {
    let neg_rows: Vec<usize> = (0..x.len()).filter(|&i| !y[i]).collect();
    let pos_rows: Vec<usize> = (0..x.len()).filter(|&i| y[i]).collect();
    let n = x.len() as f64;
    let (mean_neg, var_neg) = class_stats(x, &neg_rows, var_floor);
    let (mean_pos, var_pos) = class_stats(x, &pos_rows, var_floor);
    NbParams {
        log_prior_neg: (neg_rows.len() as f64 / n).ln(),
        log_prior_pos: (pos_rows.len() as f64 / n).ln(),
        mean_neg,
        mean_pos,
        var_neg,
        var_pos,
    }
}

fn log_likelihood(row: &[f64], mean: &[f64], var: &[f64]) -> f64 {
    const LN_2PI: f64 = 1.8378770664093453;
    row.iter()
        .zip(mean)
        .zip(var)
        .map(|((x, m), v)| {
            let d = x - m;
            -0.5 * (LN_2PI + v.ln() + d * d / v)
        })
        .sum()
}

impl NbParams {
    /// Posterior of the positive class: equal log-posteriors give exactly
    /// one half.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let log_pos = self.log_prior_pos + log_likelihood(row, &self.mean_pos, &self.var_pos);
        let log_neg = self.log_prior_neg + log_likelihood(row, &self.mean_neg, &self.var_neg);
        1.0 / (1.0 + (log_neg - log_pos).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_feature_uses_the_floor() {
        let x = vec![vec![0.5, 0.0], vec![0.5, 1.0]];
        let y = vec![false, true];
        let params = fit(&x, &y, 1e-9);
        assert_eq!(params.var_neg[0], 1e-9);
        assert_eq!(params.var_pos[0], 1e-9);
        let p = params.predict_proba(&[0.5, 1.0]);
        assert!(p > 0.99, "informative feature should dominate, got {p}");
    }

    #[test]
    fn priors_shift_the_posterior() {
        // Three positives, one negative, identical likelihoods at the
        // shared midpoint: posterior follows the 3:1 prior.
        let x = vec![vec![0.25], vec![0.75], vec![0.25], vec![0.75]];
        let y = vec![true, true, true, false];
        let params = fit(&x, &y, 1e-9);
        assert!(params.log_prior_pos > params.log_prior_neg);
    }

    #[test]
    fn ln_2pi_constant_is_accurate() {
        assert!(
            (super::super::naive_bayes::fit(&[vec![0.0], vec![1.0]], &[false, true], 1e-9)
                .log_prior_pos
                - 0.5f64.ln())
            .abs()
                < 1e-15
        );
        assert!(((2.0 * std::f64::consts::PI).ln() - 1.8378770664093453).abs() < 1e-15);
    }
}
