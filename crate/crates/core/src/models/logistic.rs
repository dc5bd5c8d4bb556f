//! Logistic regression fitted by full-batch gradient descent on the
//! L2-penalized logistic loss.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Minimizes `(1/n) Σ log(1 + exp(−y·z)) + l2/(2n)·‖w‖²` with a fixed step
/// of `1/L`, where `L` bounds the objective's curvature. Parameters start at
/// zero; the loop stops when the gradient's infinity norm falls below `tol`.
pub fn fit(x: &[Vec<f64>], y: &[bool], l2: f64, tol: f64, max_iter: usize) -> LogisticParams {
    let n = x.len();
    let p = x[0].len();
    let n_f = n as f64;

    // Curvature bound: the logistic Hessian is at most 1/4 of the Gram
    // matrix plus the ridge term.
    let max_row_sq: f64 = x
        .iter()
        .map(|row| row.iter().map(|v| v * v).sum::<f64>() + 1.0)
        .fold(0.0, f64::max);
    let step = 1.0 / (0.25 * max_row_sq + l2 / n_f);

    let mut weights = vec![0.0; p];
    let mut bias = 0.0;
    let mut iterations = 0;
    let mut converged = false;

    let mut grad_w = vec![0.0; p];
    while iterations < max_iter {
        grad_w.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_b = 0.0;
        for (row, &label) in x.iter().zip(y) {
            let z = bias
                + row
                    .iter()
                    .zip(&weights)
                    .map(|(xi, wi)| xi * wi)
                    .sum::<f64>();
            let residual = sigmoid(z) - if label { 1.0 } else { 0.0 };
            for (g, xi) in grad_w.iter_mut().zip(row) {
                *g += residual * xi;
            }
            grad_b += residual;
        }
        let mut grad_norm: f64 = 0.0;
        for (g, w) in grad_w.iter_mut().zip(&weights) {
            *g = *g / n_f + l2 / n_f * w;
            grad_norm = grad_norm.max(g.abs());
        }
        grad_b /= n_f;
        grad_norm = grad_norm.max(grad_b.abs());

        if grad_norm <= tol {
            converged = true;
            break;
        }
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= step * g;
        }
        bias -= step * grad_b;
        iterations += 1;
    }

    LogisticParams {
        weights,
        bias,
        iterations,
        converged,
    }
}

impl LogisticParams {
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let z = self.bias
            + row
                .iter()
                .zip(&self.weights)
                .map(|(xi, wi)| xi * wi)
                .sum::<f64>();
        sigmoid(z)
    }
}
