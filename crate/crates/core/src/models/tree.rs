//! CART-style decision tree with Gini impurity and deterministic
//! tie-breaking.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        /// Positive-class fraction of the training samples in this leaf.
        p: f64,
        n: usize,
        positives: usize,
    },
    Split {
        feature: usize,
        /// Samples with `value <= threshold` go left.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes stored in an arena; index 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub nodes: Vec<TreeNode>,
}

struct BestSplit {
    reduction: f64,
    feature: usize,
    threshold: f64,
}

fn gini_from_counts(positives: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = positives as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

/// Finds the impurity-minimizing binary split of the given sample indices.
///
/// Candidates are midpoints between consecutive distinct feature values.
/// Ties on impurity reduction resolve to the lowest feature index, then the
/// lowest threshold; splits with zero reduction are still eligible, so an
/// impure node keeps splitting as long as any feature varies.
#[allow(clippy::needless_range_loop)] // `feature` indexes columns, not rows
fn best_split(
    x: &[Vec<f64>],
    y: &[bool],
    indices: &[usize],
    min_leaf: usize,
    order_buf: &mut Vec<usize>,
) -> Option<BestSplit> {
    let n = indices.len();
    let total_pos = indices.iter().filter(|&&i| y[i]).count();
    let parent_impurity = (n as f64) * gini_from_counts(total_pos, n);
    let n_features = x[0].len();

    let mut best: Option<BestSplit> = None;
    for feature in 0..n_features {
        order_buf.clear();
        order_buf.extend_from_slice(indices);
        order_buf.sort_unstable_by(|&a, &b| x[a][feature].total_cmp(&x[b][feature]));

        let mut left_n = 0usize;
        let mut left_pos = 0usize;
        for pos in 0..n - 1 {
            let i = order_buf[pos];
            left_n += 1;
            if y[i] {
                left_pos += 1;
            }
            let here = x[i][feature];
            let next = x[order_buf[pos + 1]][feature];
            if here == next {
                continue;
            }
            if left_n < min_leaf || n - left_n < min_leaf {
                continue;
            }
            let right_n = n - left_n;
            let right_pos = total_pos - left_pos;
            let weighted = (left_n as f64) * gini_from_counts(left_pos, left_n)
                + (right_n as f64) * gini_from_counts(right_pos, right_n);
            let reduction = (parent_impurity - weighted) / n as f64;
            if reduction < 0.0 {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => reduction > b.reduction,
            };
            if better {
                let mid = (here + next) / 2.0;
                // Guard against midpoints that round onto the upper value,
                // which would send both sides left.
                let threshold = if mid < next { mid } else { here };
                best = Some(BestSplit {
                    reduction,
                    feature,
                    threshold,
                });
            }
        }
    }
    best
}

pub fn fit(x: &[Vec<f64>], y: &[bool], max_depth: Option<usize>, min_leaf: usize) -> TreeParams {
    let mut nodes = Vec::new();
    let root_indices: Vec<usize> = (0..x.len()).collect();
    nodes.push(TreeNode::Leaf {
        p: 0.0,
        n: 0,
        positives: 0,
    });

    // Work queue of (node slot, samples, depth); splitting is iterative so
    // degenerate chains cannot overflow the stack.
    let mut work = vec![(0usize, root_indices, 0usize)];
    let mut order_buf = Vec::new();
    while let Some((slot, indices, depth)) = work.pop() {
        let n = indices.len();
        let positives = indices.iter().filter(|&&i| y[i]).count();
        let pure = positives == 0 || positives == n;
        let depth_capped = max_depth.is_some_and(|cap| depth >= cap);

        let split = if pure || depth_capped || n < 2 * min_leaf.max(1) {
            None
        } else {
            best_split(x, y, &indices, min_leaf.max(1), &mut order_buf)
        };

        match split {
            Some(s) => {
                let (mut left, mut right) = (Vec::new(), Vec::new());
                for &i in &indices {
                    if x[i][s.feature] <= s.threshold {
                        left.push(i);
                    } else {
                        right.push(i);
                    }
                }
                let left_slot = nodes.len();
                nodes.push(TreeNode::Leaf {
                    p: 0.0,
                    n: 0,
                    positives: 0,
                });
                let right_slot = nodes.len();
                nodes.push(TreeNode::Leaf {
                    p: 0.0,
                    n: 0,
                    positives: 0,
                });
                nodes[slot] = TreeNode::Split {
                    feature: s.feature,
                    threshold: s.threshold,
                    left: left_slot,
                    right: right_slot,
                };
                work.push((left_slot, left, depth + 1));
                work.push((right_slot, right, depth + 1));
            }
            None => {
                nodes[slot] = TreeNode::Leaf {
                    p: positives as f64 / n as f64,
                    n,
                    positives,
                };
            }
        }
    }

    TreeParams { nodes }
}

impl TreeParams {
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                TreeNode::Leaf { p, .. } => return *p,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], i: usize) -> usize {
            match &nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }
}
